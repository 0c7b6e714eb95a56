#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "qte/distance.hpp"
#include "qte/random.hpp"

using namespace qte;
using namespace qte::testing;

TEST_CASE("trace norm matches an independent SVD oracle") {
  Rng rng(101);
  for (int t = 0; t < 40; ++t) {
    int d = 2 + rng.next_int(5);
    CMatrix h = random_hermitian(rng, d);
    REQUIRE(std::abs(trace_norm(h) - trace_norm_oracle(h)) < 1e-10);
    CMatrix g = random_gaussian(rng, d, d);  // exercises the non-Hermitian path
    REQUIRE(std::abs(trace_norm(g) - trace_norm_oracle(g)) < 1e-10);
  }
}

TEST_CASE("trace distance on pinned states") {
  CMatrix zero = CMatrix::projector(CMatrix::ket(2, 0));
  CMatrix one = CMatrix::projector(CMatrix::ket(2, 1));
  CMatrix plus(2, 2);
  plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = Complex(0.5, 0.0);

  REQUIRE(std::abs(trace_distance(zero, one) - 1.0) < 1e-12);
  REQUIRE(std::abs(trace_distance(zero, plus) - 1.0 / std::sqrt(2.0)) < 1e-12);
  REQUIRE(trace_distance(zero, zero) < 1e-15);
}

TEST_CASE("pure-state distance handles subnormalized vectors") {
  CMatrix u(2, 1), v(2, 1);
  u(0, 0) = Complex(0.6, 0.0);
  v(1, 0) = Complex(0.8, 0.0);
  // sqrt(((0.36+0.64)/2)^2 - 0) = 0.5
  REQUIRE(std::abs(td_pure(u, v) - 0.5) < 1e-12);

  // On normalized pairs it agrees with the density-matrix trace distance.
  Rng rng(103);
  for (int t = 0; t < 60; ++t) {
    int d = 2 + rng.next_int(5);
    CMatrix a = random_ket(rng, d);
    CMatrix b = random_ket(rng, d);
    double via_pure = td_pure(a, b);
    double via_td = trace_distance(CMatrix::projector(a), CMatrix::projector(b));
    REQUIRE(std::abs(via_pure - via_td) < 1e-9);
  }
}

TEST_CASE("optimal two-outcome measurement saturates the trace norm") {
  Rng rng(107);
  for (int t = 0; t < 60; ++t) {
    int d = 2 + rng.next_int(7);
    Rng sub = rng.split("pair" + std::to_string(t));
    double w0 = 0.2 + 0.6 * sub.next_double();
    CMatrix rho = random_density(sub, d) * Complex(w0, 0.0);
    CMatrix sigma = random_density(sub, d) * Complex(1.0 - w0, 0.0);
    HelstromPair h = helstrom_pair(rho, sigma);
    REQUIRE(std::abs(h.saturation - trace_norm_oracle(rho - sigma)) < 1e-9);
    // The two effects form a genuine binary measurement.
    REQUIRE((h.p + h.q - CMatrix::identity(d)).norm_max() == 0.0);
    REQUIRE(h.p.is_hermitian());
  }

  // Pinned: equal-weight orthogonal halves give bias Tr[P delta] - Tr[Q delta] = 1.
  CMatrix zero = CMatrix::projector(CMatrix::ket(2, 0)) * Complex(0.5, 0.0);
  CMatrix one = CMatrix::projector(CMatrix::ket(2, 1)) * Complex(0.5, 0.0);
  HelstromPair hp = helstrom_pair(zero, one);
  REQUIRE(std::abs(hp.saturation - 1.0) < 1e-12);
}

TEST_CASE("closed-form probability bounds") {
  REQUIRE(std::abs(bound_eval(BoundKind::markov_ub, {{"expect", 1.0}, {"alpha", 2.0}}) - 0.5) <
          1e-15);
  REQUIRE(std::abs(bound_eval(BoundKind::conc_lb, {{"expect", 0.75}, {"alpha", 0.5}, {"beta", 1.0}}) -
                   0.5) < 1e-15);
  double c = bound_eval(BoundKind::copies_lb, {{"t", 2.0}, {"d", 1.0}});
  REQUIRE(std::abs(c - (1.0 - 2.0 * std::exp(-1.0))) < 1e-15);
  REQUIRE(std::abs(bound_eval(BoundKind::scaled_td_lb, {{"t0", 0.4}, {"t1", 0.8}, {"d", 0.5}}) -
                   0.2) < 1e-15);

  REQUIRE_THROWS_WITH(bound_eval(BoundKind::markov_ub, {{"expect", 1.0}}),
                      Catch::Matchers::ContainsSubstring("missing bound parameter"));
  REQUIRE_THROWS_AS(bound_eval(BoundKind::markov_ub, {{"expect", 1.0}, {"alpha", 0.0}}), Error);
  REQUIRE_THROWS_AS(bound_eval(BoundKind::conc_lb, {{"expect", 1.0}, {"alpha", 1.0}, {"beta", 1.0}}),
                    Error);
}
