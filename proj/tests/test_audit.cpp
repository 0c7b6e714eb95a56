// Tests for the audit registry, runner, and report emission: registry
// integrity, deterministic replay, dimension-cap and trial overrides, and
// the three output formats.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qte/audit.hpp"

using namespace qte;
using Catch::Matchers::ContainsSubstring;

namespace {

// Splits a string into lines, dropping a trailing empty piece.
std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("registry lists every case exactly once with usable metadata") {
  const auto& reg = audit_registry();
  REQUIRE(reg.size() >= 21);
  std::set<std::string> ids;
  for (const auto& e : reg) {
    REQUIRE_FALSE(e.id.empty());
    REQUIRE_FALSE(e.claim.empty());
    REQUIRE(e.default_trials >= 1);
    REQUIRE(e.needed_dim >= 1);
    REQUIRE(e.needed_dim <= limits::max_dim);
    REQUIRE(e.run != nullptr);
    REQUIRE(ids.insert(e.id).second);  // no duplicate ids
  }
  for (int i = 1; i <= 21; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "T%02d", i);
    REQUIRE(ids.count(buf) == 1);
  }
}

TEST_CASE("find_audit resolves known ids and rejects unknown ones") {
  REQUIRE(find_audit("T01").id == "T01");
  REQUIRE_THROWS_WITH(find_audit("T99"), ContainsSubstring("unknown audit id"));
  REQUIRE_THROWS_WITH(find_audit(""), ContainsSubstring("unknown audit id"));
}

TEST_CASE("the always-rejecting transport case passes with zero-tolerance checks") {
  AuditCase c;
  c.id = "T20";
  AuditReport r = run_audit(c);
  REQUIRE(r.error.empty());
  REQUIRE(r.pass);
  REQUIRE_FALSE(r.checks.empty());
  for (const auto& ck : r.checks) {
    REQUIRE(ck.kind == "identity");
    REQUIRE(ck.tolerance == 0.0);
    REQUIRE(ck.pass);
    REQUIRE(ck.lhs == 0.0);
  }
  REQUIRE(r.case_id == "T20");
  REQUIRE(r.claim == find_audit("T20").claim);
  REQUIRE(r.version == std::string(artifact_version));
}

TEST_CASE("the optimal-test case runs its default trial count plus pinned checks") {
  AuditCase c;
  c.id = "T01";
  c.seed = 1;
  AuditReport r = run_audit(c);
  REQUIRE(r.error.empty());
  REQUIRE(r.pass);
  REQUIRE(r.trials == 200);
  REQUIRE(r.checks.size() == 202);  // one bound per trial plus two pinned identities
}

TEST_CASE("reports replay bit-for-bit under one seed and move under another") {
  AuditCase c;
  c.id = "T12";
  c.seed = 7;
  c.trials = 20;
  AuditReport a = run_audit(c);
  AuditReport b = run_audit(c);
  REQUIRE(a.checks.size() == b.checks.size());
  for (size_t i = 0; i < a.checks.size(); ++i) {
    REQUIRE(a.checks[i].name == b.checks[i].name);
    REQUIRE(a.checks[i].kind == b.checks[i].kind);
    REQUIRE(a.checks[i].lhs == b.checks[i].lhs);  // exact double equality
    REQUIRE(a.checks[i].rhs == b.checks[i].rhs);
    REQUIRE(a.checks[i].slack == b.checks[i].slack);
    REQUIRE(a.checks[i].pass == b.checks[i].pass);
  }
  c.seed = 8;
  AuditReport d = run_audit(c);
  REQUIRE(d.checks.size() == a.checks.size());
  bool any_diff = false;
  for (size_t i = 0; i < a.checks.size(); ++i)
    any_diff = any_diff || a.checks[i].lhs != d.checks[i].lhs ||
               a.checks[i].rhs != d.checks[i].rhs;
  REQUIRE(any_diff);
}

TEST_CASE("the trial override changes how many checks a per-trial case emits") {
  AuditCase c;
  c.id = "T12";
  c.seed = 3;
  c.trials = 7;
  AuditReport r = run_audit(c);
  REQUIRE(r.error.empty());
  REQUIRE(r.trials == 7);
  REQUIRE(r.checks.size() == 7);  // this case emits exactly one bound per trial
}

TEST_CASE("dimension caps are enforced before any check runs") {
  SECTION("a cap below the case requirement aborts the case, not the program") {
    AuditCase c;
    c.id = "T09";  // needs a large composite space
    c.dim_cap = 8;
    AuditReport r = run_audit(c);
    REQUIRE_THAT(r.error, ContainsSubstring("dimension cap exceeded"));
    REQUIRE_FALSE(r.pass);
    REQUIRE(r.checks.empty());
  }
  SECTION("a cap above the global maximum is rejected") {
    AuditCase c;
    c.id = "T01";
    c.dim_cap = 600;
    AuditReport r = run_audit(c);
    REQUIRE_THAT(r.error, ContainsSubstring("dimension cap exceeded"));
    REQUIRE_THAT(r.error, ContainsSubstring("global maximum"));
    REQUIRE_FALSE(r.pass);
  }
  SECTION("a non-positive cap is a schema violation") {
    AuditCase c;
    c.id = "T01";
    c.dim_cap = 0;
    AuditReport r = run_audit(c);
    REQUIRE_THAT(r.error, ContainsSubstring("schema violation"));
    REQUIRE_FALSE(r.pass);
  }
}

TEST_CASE("report emission covers json, csv, and text") {
  AuditCase c;
  c.id = "T20";
  AuditReport r = run_audit(c);
  REQUIRE(r.pass);

  SECTION("json carries the document schema and every check") {
    std::string s = emit_report(r, "json");
    Json doc = Json::parse(s);
    REQUIRE(doc.at("schema").get<int>() == file_schema);
    REQUIRE(doc.at("version").get<std::string>() == artifact_version);
    REQUIRE(doc.at("pass").get<bool>());
    REQUIRE(doc.at("reports").size() == 1);
    const Json& rep = doc.at("reports").at(0);
    REQUIRE(rep.at("case").get<std::string>() == "T20");
    REQUIRE(rep.at("checks").size() == r.checks.size());
    REQUIRE(rep.at("error").get<std::string>().empty());
    const Json& ck = rep.at("checks").at(0);
    REQUIRE(ck.at("kind").get<std::string>() == "identity");
    REQUIRE(ck.at("tolerance").get<double>() == 0.0);
    REQUIRE(ck.at("pass").get<bool>());
  }

  SECTION("csv has the fixed header and one row per check") {
    std::string s = emit_report(r, "csv");
    std::vector<std::string> rows = lines_of(s);
    REQUIRE(rows.size() == r.checks.size() + 1);
    REQUIRE(rows[0] == "case,check,kind,lhs,rhs,slack,tolerance,pass");
    for (size_t i = 1; i < rows.size(); ++i) {
      REQUIRE_THAT(rows[i], ContainsSubstring("T20,"));
      REQUIRE_THAT(rows[i], ContainsSubstring(",true"));
    }
  }

  SECTION("text names the case and its verdict") {
    std::string s = emit_report(r, "text");
    REQUIRE_THAT(s, ContainsSubstring("T20"));
    REQUIRE_THAT(s, ContainsSubstring("PASS"));
    REQUIRE_THAT(s, ContainsSubstring("total checks"));
  }

  SECTION("unknown formats are rejected") {
    REQUIRE_THROWS_WITH(emit_report(r, "xml"),
                        ContainsSubstring("report format must be json, csv, or text"));
  }
}

TEST_CASE("a default-constructed report still emits in every format") {
  AuditReport r;
  Json doc = Json::parse(emit_report(r, "json"));
  REQUIRE_FALSE(doc.at("pass").get<bool>());
  std::string csv = emit_report(r, "csv");
  REQUIRE(lines_of(csv).size() == 1);  // header only
  std::string text = emit_report(r, "text");
  REQUIRE_THAT(text, ContainsSubstring("FAIL"));
}
