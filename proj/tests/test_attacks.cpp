#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qte/attacks.hpp"
#include "qte/constructions.hpp"
#include "qte/sampling.hpp"

using namespace qte;

TEST_CASE("gallery members are well-formed channels") {
  Rng rng(401);
  AqecmScheme conj = conj_parity_pad(1);
  auto gallery = attack_gallery(conj, rng, 2);
  for (const auto& atk : gallery) {
    REQUIRE_FALSE(atk.name.empty());
    REQUIRE(validate_channel(atk.map).cptp);
    (void)attack_aux_shape(conj, atk.map);  // contract: cipher factors lead
  }

  AqecmScheme otp = otp_accept({"0", "1"});
  Rng rng2(402);
  auto g2 = attack_gallery(otp, rng2, 2);
  // identity + bitflip + full measurement + 2 random isometries + 1 pair
  // distinguisher.
  REQUIRE(g2.size() == 6);

  REQUIRE_THROWS_WITH(bitflip_attack(SpaceShape::single("C", 3)),
                      Catch::Matchers::ContainsSubstring("no trailing bit"));
  REQUIRE_THROWS_AS(double_split_attack(SpaceShape::single("C", 4), 1), Error);
}

TEST_CASE("full measurement keeps a faithful classical copy") {
  Rng rng(411);
  SpaceShape two_qubits = SpaceShape::single("A", 2).concat(SpaceShape::single("B", 2));
  TamperAttack atk = full_measure_attack(two_qubits);
  CMatrix rho = random_density(rng, 4);
  rho.set_shapes(two_qubits, two_qubits);
  CMatrix out = atk.map.apply(rho);
  // Discarding the copy leaves the dephased input.
  KrausChannel drop = discard_factors(atk.map.out_shape(), {2});
  CMatrix kept = drop.apply(out);
  CMatrix deph = dephase_channel(two_qubits).apply(rho);
  REQUIRE((kept - deph).norm_max() < 1e-13);
  // The copy agrees with the kept register on the diagonal.
  KrausChannel keep_copy = discard_factors(atk.map.out_shape(), {0, 1});
  CMatrix copy = keep_copy.apply(out);
  for (int i = 0; i < 4; ++i)
    REQUIRE(std::abs(copy(i, i) - deph(i, i)) < 1e-13);
}

TEST_CASE("the optimal-measurement distinguisher breaks the identity scheme") {
  AqecmScheme id = id_accept({"0", "1"});
  TamperAttack cgm = cgm_distinguisher_attack(id, 0, 1);
  TamperProfile p = tamper_profile(id, cgm.map, 0, 1);
  REQUIRE(p.per_key.size() == 1);
  REQUIRE(std::abs(p.per_key[0] - 1.0) < 1e-9);
  REQUIRE(std::abs(p.expectation - 1.0) < 1e-9);
  REQUIRE(std::abs(p.delta_hat - 1.0) < 1e-9);

  Rng rng(421);
  REQUIRE(std::abs(best_tamper_lower_bound(id, attack_gallery(id, rng)) - 1.0) < 1e-9);

  // Against the one-time pad the averaged encodings coincide, so the same
  // distinguisher learns nothing and disturbs nothing on average.
  AqecmScheme otp = otp_accept({"0", "1"});
  TamperAttack blind = cgm_distinguisher_attack(otp, 0, 1);
  TamperProfile q = worst_tamper_profile(otp, blind.map);
  REQUIRE(q.delta_hat < 1e-9);
}

TEST_CASE("hybrid lifts reduce a joint attack to one component") {
  AqecmScheme a = otp_accept({"0", "1"});
  AqecmScheme b = otp_accept({"0", "1"});
  AqecmScheme par = parallel_compose(a, b);
  Rng rng(431);

  // Lifting the identity attack hard-wires an honestly decoded second slot:
  // the result appends an accept flag and nothing else.
  KrausChannel idatk = identity_channel(par.cipher_space);
  KrausChannel lift1 = lift_attack_to_first(idatk, a, b, 1, 1);
  REQUIRE(validate_channel(lift1).cptp);
  CMatrix sigma = random_density(rng, 2);
  CMatrix accept_flag = CMatrix::projector(CMatrix::ket(2, 1));
  REQUIRE((lift1.apply(sigma) - tensor_product(sigma, accept_flag)).norm_max() < 1e-12);

  KrausChannel lift2 = lift_attack_to_second(idatk, a, b, 0, 1);
  REQUIRE(validate_channel(lift2).cptp);
  CMatrix sigma2 = random_density(rng, 2);
  REQUIRE((lift2.apply(sigma2) - tensor_product(sigma2, accept_flag)).norm_max() < 1e-12);

  // A genuine joint attack lifts to a CPTP per-component attack whose
  // auxiliary carries the other slot's flag.
  TamperAttack joint = random_isometry_attack(par.cipher_space, 2, rng);
  KrausChannel lifted = lift_attack_to_first(joint.map, a, b, 0, 0);
  REQUIRE(validate_channel(lifted).cptp);
  SpaceShape aux = attack_aux_shape(a, lifted);
  REQUIRE(aux.dim() == 4);  // flag (2) times the attack's own auxiliary (2)
}

TEST_CASE("revocation attack adapters round-trip on ciphertext tokens") {
  QecmrScheme sr = rev_of(otp_accept({"0", "1"}));
  Rng rng(441);
  TamperAttack t = random_isometry_attack(sr.cipher_space, 2, rng);
  KrausChannel as_rev = rev_attack_from_tamper(sr, t.map);
  // Tokens are full ciphertexts, so the adaptation composes with identity.
  REQUIRE((as_rev.choi() - t.map.choi()).norm_max() < 1e-12);
  KrausChannel back = tamper_attack_from_rev(sr, as_rev);
  REQUIRE((back.choi() - as_rev.choi()).norm_max() == 0.0);

  // The identity attack leaves no auxiliary: the accepted residue is the
  // scalar difference of two equal-trace states, which vanishes.
  RevAttackValue rv = rev_attack_value(sr, identity_channel(sr.cipher_space), 0, 1);
  REQUIRE(rv.expectation < 1e-12);
  for (double v : rv.per_key) REQUIRE(v < 1e-12);
}

TEST_CASE("deletion game values convert to accepted-residual distances") {
  QecmrScheme sr = rev_of(conj_parity_pad(1));
  Rng rng(451);
  KrausChannel atk = random_cptp(
      rng, sr.cipher_space, sr.rev_space.concat(SpaceShape::single("A", 2)), 2);

  RevAttackValue rv = rev_attack_value(sr, atk, 0, 1);
  RevGame game = game_from_rev_attack(sr, atk, 0, 1);
  double v0 = rev_game_value(sr, game, 0);
  double v1 = rev_game_value(sr, game, 1);
  RevGame flipped = game;
  flipped.flipped = true;
  double f0 = rev_game_value(sr, flipped, 0);
  double f1 = rev_game_value(sr, flipped, 1);
  // The optimal guess collects the full trace norm across both sign parts.
  REQUIRE(std::abs((v0 - v1) + (f1 - f0) - 2.0 * rv.expectation) < 1e-9);
  REQUIRE(rev_game_advantage(sr, game) <= 2.0 * rv.expectation + 1e-9);

  // Decomposing the canonical game recovers the single submitted pair.
  auto pairs = rev_attacks_from_game(sr, game);
  REQUIRE(pairs.size() == 1);
  REQUIRE(pairs[0].m0 == 0);
  REQUIRE(pairs[0].m1 == 1);
  REQUIRE(std::abs(pairs[0].prob - 1.0) < 1e-12);
  RevAttackValue rv2 = rev_attack_value(sr, pairs[0].attack, 0, 1);
  REQUIRE(std::abs(rv2.expectation - rv.expectation) < 1e-10);
}

TEST_CASE("counterfeit adapters normalize attack output shapes") {
  QmScheme q = qm_of(otp_accept({"0", "1"}), 0.0);
  SpaceShape n = q.note_space;
  Rng rng(461);

  KrausChannel two = random_cptp(rng, n, n.concat(n), 2);
  REQUIRE((qm_counterfeit_adapter(two, n).choi() - two.choi()).norm_max() == 0.0);

  KrausChannel one = identity_channel(n);
  KrausChannel padded = qm_counterfeit_adapter(one, n);
  REQUIRE(padded.out_shape().dim() == n.dim() * n.dim());
  ForgeryValue fv = qm_forgery_value(q, padded);
  // The second half is maximally mixed and the pad verifier accepts it with
  // probability 1/2; the honest half always passes.
  REQUIRE(std::abs(fv.value - 0.5) < 1e-12);

  KrausChannel bad = random_cptp(rng, n, SpaceShape::single("X", 3), 2);
  REQUIRE_THROWS_WITH(qm_counterfeit_adapter(bad, n),
                      Catch::Matchers::ContainsSubstring("counterfeit output"));
}
