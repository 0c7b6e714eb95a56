// qte-audit: command-line front end for the audit registry and the scheme
// construction language.
//
//   qte-audit list
//   qte-audit run [--case all|Txx] [--seed N] [--trials N] [--dim-cap N]
//                 [--format json|csv|text] [--out PATH]
//   qte-audit scheme eval --expr EXPR [--metric eps|alpha|profile]
//                 [--attack NAME|FILE] [--seed N]
//
// Exit status: 0 when everything executed passed, 1 when an audit check
// failed, 2 on usage or data errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qte/attacks.hpp"
#include "qte/audit.hpp"
#include "qte/expr.hpp"
#include "qte/serialize.hpp"

namespace {

using namespace qte;

void write_output(const std::string& body, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(out_path);
  require(out.good(), "schema violation: cannot open '" + out_path + "' for writing");
  out << body;
  require(out.good(), "schema violation: write to '" + out_path + "' failed");
  std::cerr << "wrote " << out_path << "\n";
}

int cmd_list() {
  std::printf("%-5s %-7s %-4s %s\n", "id", "trials", "dim", "claim");
  for (const auto& e : audit_registry())
    std::printf("%-5s %-7d %-4d %s\n", e.id.c_str(), e.default_trials, e.needed_dim,
                e.claim.c_str());
  return 0;
}

int cmd_run(const std::string& which, uint64_t seed, int trials, int dim_cap,
            const std::string& format, const std::string& out_path) {
  std::vector<AuditReport> reports;
  if (which == "all") {
    reports = run_all_audits(seed, trials, dim_cap);
  } else {
    AuditCase c;
    c.id = which;
    c.seed = seed;
    c.trials = trials;
    c.dim_cap = dim_cap;
    reports.push_back(run_audit(c));  // throws on an unknown id
  }
  write_output(emit_report(reports, format), out_path);
  bool all = true;
  for (const auto& r : reports) all = all && r.pass;
  if (!all)
    for (const auto& r : reports)
      if (!r.pass)
        std::cerr << "failed: " << r.case_id
                  << (r.error.empty() ? "" : " (" + r.error + ")") << "\n";
  return all ? 0 : 1;
}

TamperAttack attack_by_name(const std::string& name, const AqecmScheme& s, uint64_t seed) {
  if (name == "identity") return identity_attack(s.cipher_space);
  if (name == "bitflip") return bitflip_attack(s.cipher_space);
  if (name == "full_measure") return full_measure_attack(s.cipher_space);
  if (name == "cgm") {
    require(s.message_count() >= 2, "alphabet mismatch: distinguisher needs two messages");
    return cgm_distinguisher_attack(s, 0, 1);
  }
  if (name == "random") {
    Rng rng = Rng(seed).split("cli-attack");
    return random_isometry_attack(s.cipher_space, 2, rng);
  }
  // Anything else names a stored channel file.
  return TamperAttack{"file:" + name, load_channel(name)};
}

int cmd_eval(const std::string& expr, const std::string& metric, const std::string& attack,
             uint64_t seed) {
  SchemeValue v = eval_scheme_expr(expr);
  std::printf("kind: %s\n", v.kind_name());
  switch (v.kind) {
    case SchemeValue::Kind::aqecm:
      std::printf("name: %s\nmessages: %d  keys: %d  cipher dimension: %d\n",
                  v.aqecm.name.c_str(), v.aqecm.message_count(), v.aqecm.keys.size(),
                  v.aqecm.cipher_space.dim());
      break;
    case SchemeValue::Kind::qecm:
      std::printf("name: %s\nmessages: %d  keys: %d  cipher dimension: %d\n",
                  v.qecm.name.c_str(), v.qecm.message_count(), v.qecm.keys.size(),
                  v.qecm.cipher_space.dim());
      break;
    case SchemeValue::Kind::qecmr:
      std::printf("name: %s\nmessages: %d  keys: %d  cipher dimension: %d  token dimension: %d\n",
                  v.qecmr.name.c_str(), v.qecmr.message_count(), v.qecmr.keys.size(),
                  v.qecmr.cipher_space.dim(), v.qecmr.rev_space.dim());
      break;
    case SchemeValue::Kind::qm:
      std::printf("name: %s\nkeys: %d  note dimension: %d\n", v.qm.name.c_str(),
                  v.qm.keys.size(), v.qm.note_space.dim());
      break;
  }

  if (metric == "eps") {
    double eps = 0.0;
    switch (v.kind) {
      case SchemeValue::Kind::aqecm: eps = correctness_gap(v.aqecm); break;
      case SchemeValue::Kind::qecm: eps = correctness_gap(v.qecm); break;
      case SchemeValue::Kind::qecmr: eps = correctness_gap(v.qecmr); break;
      case SchemeValue::Kind::qm: eps = correctness_gap(v.qm); break;
    }
    std::printf("eps: %.17g\n", eps);
    return 0;
  }
  if (metric == "alpha") {
    EncryptionGap g;
    switch (v.kind) {
      case SchemeValue::Kind::aqecm: g = encryption_gap(v.aqecm); break;
      case SchemeValue::Kind::qecm: g = encryption_gap(v.qecm); break;
      case SchemeValue::Kind::qecmr: g = encryption_gap(v.qecmr); break;
      case SchemeValue::Kind::qm:
        throw Error("schema violation: the alpha metric is undefined for money schemes");
    }
    std::printf("alpha: %.17g  (messages %d vs %d)\n", g.alpha, g.arg_m0, g.arg_m1);
    return 0;
  }
  if (metric == "profile") {
    if (v.kind != SchemeValue::Kind::aqecm)
      throw Error("schema violation: the profile metric needs an authenticating scheme");
    TamperAttack atk = attack_by_name(attack, v.aqecm, seed);
    TamperProfile p = worst_tamper_profile(v.aqecm, atk.map);
    std::printf("attack: %s\n", atk.name.c_str());
    for (int k = 0; k < v.aqecm.keys.size(); ++k)
      std::printf("  key %-12s value %.17g\n", v.aqecm.keys.labels[static_cast<size_t>(k)].c_str(),
                  p.per_key[static_cast<size_t>(k)]);
    std::printf("expectation: %.17g\ncertified level: %.17g\n", p.expectation, p.delta_hat);
    return 0;
  }
  throw Error("schema violation: metric must be eps, alpha, or profile");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical audit of a tamper-evident quantum encryption library"};
  app.set_version_flag("--version", qte::artifact_version);
  app.require_subcommand(1);

  CLI::App* list = app.add_subcommand("list", "list the registered audit cases");

  std::string run_case = "all";
  uint64_t run_seed = 1;
  int run_trials = 0;
  int run_dim_cap = qte::limits::default_dim_cap;
  std::string run_format = "text";
  std::string run_out;
  CLI::App* run = app.add_subcommand("run", "run one audit case or the whole registry");
  run->add_option("--case", run_case, "case id, or 'all'")->capture_default_str();
  run->add_option("--seed", run_seed, "root seed for all randomness")->capture_default_str();
  run->add_option("--trials", run_trials, "override the per-case trial count (0 keeps defaults)")
      ->capture_default_str();
  run->add_option("--dim-cap", run_dim_cap, "abort cases needing spaces above this dimension")
      ->capture_default_str();
  run->add_option("--format", run_format, "report format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  run->add_option("--out", run_out, "write the report here instead of stdout");

  std::string eval_expr;
  std::string eval_metric = "eps";
  std::string eval_attack = "identity";
  uint64_t eval_seed = 1;
  CLI::App* scheme = app.add_subcommand("scheme", "work with scheme constructions");
  scheme->require_subcommand(1);
  CLI::App* eval = scheme->add_subcommand("eval", "build a scheme expression and measure it");
  eval->add_option("--expr", eval_expr,
                   "construction expression, e.g. 'xor_pad(conj_parity_pad(n=2))'")
      ->required();
  eval->add_option("--metric", eval_metric, "eps, alpha, or profile")
      ->check(CLI::IsMember({"eps", "alpha", "profile"}))
      ->capture_default_str();
  eval->add_option("--attack", eval_attack,
                   "for profile: identity, bitflip, full_measure, cgm, random, or a stored "
                   "channel file")
      ->capture_default_str();
  eval->add_option("--seed", eval_seed, "seed for the random attack")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) return cmd_list();
    if (run->parsed())
      return cmd_run(run_case, run_seed, run_trials, run_dim_cap, run_format, run_out);
    if (eval->parsed()) return cmd_eval(eval_expr, eval_metric, eval_attack, eval_seed);
  } catch (const qte::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
