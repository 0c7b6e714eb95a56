#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qte/constructions.hpp"
#include "qte/enumeration.hpp"
#include "qte/random.hpp"
#include "qte/sampling.hpp"

using namespace qte;

TEST_CASE("key distributions") {
  KeyDist u = KeyDist::uniform({"a", "b", "c", "d"});
  u.validate();
  REQUIRE(u.size() == 4);
  REQUIRE(u.probs[2] == 0.25);

  KeyDist p = KeyDist::point("-");
  p.validate();
  REQUIRE(p.size() == 1);

  KeyDist prod = u.product(KeyDist::uniform({"x", "y"}));
  prod.validate();
  REQUIRE(prod.size() == 8);
  REQUIRE(prod.labels[1] == "a|y");
  REQUIRE(prod.probs[0] == 0.125);

  KeyDist bad;
  bad.labels = {"a", "b"};
  bad.probs = {0.7, 0.7};
  REQUIRE_THROWS_WITH(bad.validate(),
                      Catch::Matchers::ContainsSubstring("not a probability distribution"));
  bad.probs = {1.5, -0.5};
  REQUIRE_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("baseline schemes validate and hit their frozen metrics") {
  AqecmScheme otp = otp_accept({"0", "1"});
  otp.validate();
  REQUIRE(otp.keys.size() == 2);
  REQUIRE(correctness_gap(otp) < 1e-12);
  REQUIRE(encryption_gap(otp).alpha < 1e-12);

  AqecmScheme id = id_accept({"0", "1"});
  id.validate();
  REQUIRE(correctness_gap(id) < 1e-12);
  REQUIRE(std::abs(encryption_gap(id).alpha - 1.0) < 1e-12);

  AqecmScheme qotp = qotp_accept(1);
  qotp.validate();
  REQUIRE(qotp.keys.size() == 4);
  REQUIRE(correctness_gap(qotp) < 1e-12);
  REQUIRE(encryption_gap(qotp).alpha < 1e-12);

  AqecmScheme conj = conj_parity_pad(2);
  conj.validate();
  REQUIRE(correctness_gap(conj) < 1e-12);

  // The always-rejecting scheme fails correctness maximally and hides nothing
  // it could leak: decode never accepts any message.
  AqecmScheme triv = triv_reject({"0", "1"});
  triv.validate();
  REQUIRE(triv.keys.size() == 1);
  REQUIRE(correctness_gap(triv) == 1.0);
}

TEST_CASE("accept effects: pinned closed forms per key") {
  AqecmScheme otp = otp_accept({"0", "1"});
  for (int k = 0; k < otp.keys.size(); ++k) {
    CMatrix eff = dbar_accept_effect(otp, k);
    REQUIRE((eff - CMatrix::identity(2)).norm_max() < 1e-12);
  }

  AqecmScheme triv = triv_reject({"0", "1"});
  REQUIRE(dbar_accept_effect(triv, 0).norm_max() == 0.0);

  // Conjugate-basis scheme with parity pad on n qubits: the accept effect has
  // trace fraction 2^-n, and each honest encoding decodes to its message with
  // certainty. Cross-checked against the independent exact enumeration.
  const int n = 2;
  AqecmScheme conj = conj_parity_pad(n);
  oracle::ConjKeyStats st = oracle::conj_key_stats(n, 0, 0);
  for (int k = 0; k < conj.keys.size(); ++k) {
    CMatrix eff = dbar_accept_effect(conj, k);
    double frac = eff.trace().real() / static_cast<double>(conj.cipher_space.dim());
    REQUIRE(std::abs(frac - st.mixed_accept) < 1e-12);
    REQUIRE(std::abs(st.mixed_accept - std::pow(2.0, -n)) < 1e-15);
    for (int m = 0; m < conj.message_count(); ++m) {
      CMatrix c = conj.enc[static_cast<size_t>(k)].apply(conj.message_state(m));
      double ok = trace_of_product(dbar_message_effect(conj, k, m), c).real();
      REQUIRE(std::abs(ok - st.accept_and_msg[static_cast<size_t>(m)]) < 1e-12);
      REQUIRE(std::abs(ok - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("tamper profile of the identity attack is zero on honest schemes") {
  AqecmScheme otp = otp_accept({"0", "1"});
  KrausChannel idc = identity_channel(otp.cipher_space);
  TamperProfile p = tamper_profile(otp, idc, 0, 1);
  REQUIRE(p.expectation < 1e-12);
  REQUIRE(p.delta_hat < 1e-12);
  REQUIRE(p.satisfies(otp.keys, 0.0));

  AqecmScheme conj = conj_parity_pad(2);
  TamperProfile pc = worst_tamper_profile(conj, identity_channel(conj.cipher_space));
  REQUIRE(pc.delta_hat < 1e-12);
}

TEST_CASE("delta-hat solves the self-referential tail condition") {
  KeyDist half = KeyDist::uniform({"a", "b"});
  // values {0.2, 0.6}, probs 1/2 each: Pr[d > x] = 1/2 on [0.2, 0.6), so the
  // best feasible point is x = 0.5; at 0.6 the tail drops to 0 but 0.6 > 0.5.
  REQUIRE(std::abs(detail::compute_delta_hat(half, {0.2, 0.6}) - 0.5) < 1e-15);

  KeyDist skew;
  skew.labels = {"a", "b"};
  skew.probs = {0.1, 0.9};
  // Pr[d > 0.05] = 0.1 and 0.1 >= max(0.05, 0.1); 0.9 fails until x = 0.9.
  REQUIRE(std::abs(detail::compute_delta_hat(skew, {0.9, 0.05}) - 0.1) < 1e-15);

  REQUIRE(detail::compute_delta_hat(half, {0.0, 0.0}) == 0.0);
  REQUIRE(detail::compute_delta_hat(half, {1.0, 1.0}) == 1.0);

  // Conversions between the expectation and probability forms.
  REQUIRE(std::abs(te_delta_from_expectation(0.25) - 0.5) < 1e-15);
  REQUIRE(std::abs(te_expectation_from_delta(0.5) - 0.75) < 1e-15);
}

TEST_CASE("effect contraction reduces the leading block correctly") {
  Rng rng(301);
  SpaceShape c = SpaceShape::single("C", 3);
  SpaceShape a = SpaceShape::single("A", 2);
  CMatrix omega = random_hermitian(rng, 6);
  omega.set_shapes(c.concat(a), c.concat(a));
  CMatrix eff = random_psd(rng, 3);
  CMatrix red = effect_contract(omega, eff);
  REQUIRE(red.rows() == 2);
  // Against a direct double sum: red(i,j) = sum_{x,y} eff(y,x) omega((x,i),(y,j)).
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Complex want(0.0, 0.0);
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) want += eff(y, x) * omega(x * 2 + i, y * 2 + j);
      REQUIRE(std::abs(red(i, j) - want) < 1e-13);
    }

  // Scalar effect contraction equals the plain trace inner product.
  CMatrix full = random_psd(rng, 6);
  CMatrix scal = effect_contract(omega, full);
  REQUIRE(scal.rows() == 1);
  REQUIRE(std::abs(scal(0, 0) - trace_of_product(full, omega)) < 1e-12);
}

TEST_CASE("revocation schemes expose verifier effects") {
  QecmrScheme sr = rev_of(otp_accept({"0", "1"}));
  REQUIRE(correctness_gap(sr) < 1e-12);
  for (int k = 0; k < sr.keys.size(); ++k) {
    CMatrix v = vbar_accept_effect(sr, k);
    REQUIRE((v - CMatrix::identity(sr.rev_space.dim())).norm_max() < 1e-12);
    CMatrix honest = sr.rev.apply(sr.enc[static_cast<size_t>(k)].apply(sr.message_state(0)));
    REQUIRE(std::abs(vbar_apply(sr, k, honest) - 1.0) < 1e-12);
  }
}

TEST_CASE("attack shape validation rejects malformed adversaries") {
  AqecmScheme otp = otp_accept({"0", "1"});
  KrausChannel wrong_in = identity_channel(SpaceShape::single("X", 3));
  REQUIRE_THROWS_WITH(tamper_profile(otp, wrong_in, 0, 1),
                      Catch::Matchers::ContainsSubstring("attack shape mismatch"));

  // Output must lead with the cipher factors.
  SpaceShape flipped = SpaceShape::single("A", 3).concat(otp.cipher_space);
  Rng rng(311);
  KrausChannel bad = random_cptp(rng, otp.cipher_space, flipped, 2);
  REQUIRE_THROWS_AS(tamper_profile(otp, bad, 0, 1), Error);

  // A compliant C -> C (x) A attack passes and reports the auxiliary shape.
  SpaceShape good = otp.cipher_space.concat(SpaceShape::single("A", 3));
  KrausChannel fine = random_cptp(rng, otp.cipher_space, good, 2);
  REQUIRE(attack_aux_shape(otp, fine).dim() == 3);
}

TEST_CASE("money forgery value validates attack shapes") {
  QmScheme q = qm_of(otp_accept({"0", "1"}), 0.0);
  REQUIRE(q.keys.size() == 4);
  int n = q.note_space.dim();
  Rng rng(321);
  KrausChannel bad = random_cptp(rng, q.note_space, q.note_space, 2);
  REQUIRE_THROWS_WITH(qm_forgery_value(q, bad),
                      Catch::Matchers::ContainsSubstring("attack shape mismatch"));

  SpaceShape doubled = q.note_space.concat(q.note_space);
  KrausChannel dup = random_cptp(rng, q.note_space, doubled, 2);
  ForgeryValue fv = qm_forgery_value(q, dup);
  REQUIRE(fv.per_key.size() == static_cast<size_t>(q.keys.size()));
  REQUIRE(fv.value >= -1e-12);
  REQUIRE(fv.value <= 1.0 + 1e-9);
  (void)n;
}

TEST_CASE("group tables define valid xor-like structure") {
  GroupTable g = GroupTable::cyclic({"0", "1", "2"});
  REQUIRE(g.table[1][2] == 0);
  REQUIRE(g.table[2][2] == 1);
  REQUIRE(g.table[0][1] == 1);
}
