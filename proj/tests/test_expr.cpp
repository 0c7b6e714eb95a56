// Tests for the construction-expression evaluator: grammar, argument
// binding, family tracking, and agreement with the directly built schemes.

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "qte/expr.hpp"

using namespace qte;
using Catch::Matchers::ContainsSubstring;

namespace {

const std::vector<std::string> kBits{"0", "1"};

double enc_residual(const AqecmScheme& a, const AqecmScheme& b) {
  REQUIRE(a.keys.size() == b.keys.size());
  double worst = 0.0;
  for (size_t k = 0; k < a.enc.size(); ++k) {
    worst = std::max(worst, (a.enc[k].choi() - b.enc[k].choi()).norm_max());
    worst = std::max(worst, (a.dec[k].choi() - b.dec[k].choi()).norm_max());
  }
  return worst;
}

}  // namespace

TEST_CASE("bare names evaluate to the baseline schemes") {
  SchemeValue v = eval_scheme_expr("otp_accept");
  REQUIRE(v.kind == SchemeValue::Kind::aqecm);
  REQUIRE(std::string(v.kind_name()) == "authenticating scheme");
  REQUIRE(v.aqecm.messages == kBits);
  REQUIRE(v.aqecm.keys.size() == 2);
  REQUIRE(enc_residual(v.aqecm, otp_accept(kBits)) <= 1e-15);
}

TEST_CASE("composite expressions match the directly built schemes") {
  SchemeValue v = eval_scheme_expr("star(otp_accept, triv_reject)");
  REQUIRE(v.kind == SchemeValue::Kind::aqecm);
  AqecmScheme direct = star_of(otp_accept(kBits), triv_reject(kBits));
  REQUIRE(v.aqecm.keys.size() == direct.keys.size());
  REQUIRE(v.aqecm.cipher_space.dim() == direct.cipher_space.dim());
  REQUIRE(enc_residual(v.aqecm, direct) <= 1e-15);
}

TEST_CASE("the shared-pad wrapper builds through the evaluator") {
  SchemeValue v = eval_scheme_expr("xor_pad(conj_parity_pad(n=1))");
  REQUIRE(v.kind == SchemeValue::Kind::aqecm);
  REQUIRE(v.aqecm.keys.size() == 4);
  REQUIRE(v.aqecm.message_count() == 2);
  REQUIRE(correctness_gap(v.aqecm) <= 1e-12);
  // One-qubit carrier: the pad leaks at trace distance 1/sqrt(2).
  REQUIRE(std::abs(encryption_gap(v.aqecm).alpha - 1.0 / std::sqrt(2.0)) <= 1e-9);
}

TEST_CASE("family-changing wrappers report the right scheme kind") {
  REQUIRE(eval_scheme_expr("rev(otp_accept)").kind == SchemeValue::Kind::qecmr);
  REQUIRE(std::string(eval_scheme_expr("rev(otp_accept)").kind_name()) == "revocation scheme");
  REQUIRE(eval_scheme_expr("te(rev(otp_accept))").kind == SchemeValue::Kind::aqecm);
  REQUIRE(eval_scheme_expr("drop_flag(otp_accept)").kind == SchemeValue::Kind::qecm);
  REQUIRE(std::string(eval_scheme_expr("drop_flag(otp_accept)").kind_name()) == "plain scheme");

  SchemeValue money = eval_scheme_expr("qm(double(conj_parity_pad(n=1)), gamma=0)");
  REQUIRE(money.kind == SchemeValue::Kind::qm);
  REQUIRE(std::string(money.kind_name()) == "money scheme");
  REQUIRE(money.qm.keys.size() == 32);  // sixteen keys times two messages
}

TEST_CASE("weak-verifier money schemes build through the evaluator") {
  SchemeValue v = eval_scheme_expr("qm(triv_reject, gamma=0, weak=1)");
  REQUIRE(v.kind == SchemeValue::Kind::qm);
  QmScheme direct = qm_of(triv_reject(kBits), 0.0, true);
  REQUIRE(v.qm.keys.size() == direct.keys.size());
  REQUIRE(correctness_gap(v.qm) == correctness_gap(direct));
}

TEST_CASE("parameters bind positionally and by name, with whitespace ignored") {
  SchemeValue named = eval_scheme_expr("conj_parity_pad(n=2)");
  SchemeValue positional = eval_scheme_expr("conj_parity_pad(2)");
  REQUIRE(named.aqecm.keys.size() == 16);
  REQUIRE(positional.aqecm.keys.size() == 16);
  REQUIRE(enc_residual(named.aqecm, positional.aqecm) <= 1e-15);

  SchemeValue three = eval_scheme_expr("otp_accept(m=3)");
  REQUIRE(three.aqecm.messages == std::vector<std::string>{"0", "1", "2"});

  SchemeValue spaced = eval_scheme_expr("  star ( otp_accept , triv_reject )  ");
  REQUIRE(spaced.aqecm.keys.size() == 2);
}

TEST_CASE("malformed expressions fail with located messages") {
  REQUIRE_THROWS_WITH(eval_scheme_expr("te(otp_accept)"),
                      ContainsSubstring("needs a revocation scheme"));
  REQUIRE_THROWS_WITH(eval_scheme_expr("frobnicate"),
                      ContainsSubstring("unknown construction"));
  REQUIRE_THROWS_WITH(eval_scheme_expr("star(otp_accept"), ContainsSubstring("expected ')'"));
  REQUIRE_THROWS_WITH(eval_scheme_expr("otp_accept junk"), ContainsSubstring("trailing input"));
  REQUIRE_THROWS_WITH(eval_scheme_expr("otp_accept(m=1)"),
                      ContainsSubstring("message count must lie in [2, 16]"));
  REQUIRE_THROWS_WITH(eval_scheme_expr("parallel(otp_accept)"),
                      ContainsSubstring("expected 2 scheme argument(s)"));
  REQUIRE_THROWS_WITH(eval_scheme_expr("otp_accept(k=3)"),
                      ContainsSubstring("unknown parameter 'k'"));
  REQUIRE_THROWS_WITH(eval_scheme_expr("qotp_accept(n=1.5)"),
                      ContainsSubstring("must be an integer"));
  REQUIRE_THROWS_WITH(eval_scheme_expr("nfold(otp_accept, n=0)"),
                      ContainsSubstring("fold count"));
  REQUIRE_THROWS_WITH(eval_scheme_expr(""), ContainsSubstring("expected a name"));
}
