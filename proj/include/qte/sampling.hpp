#pragma once

#include <string>
#include <vector>

#include "qte/channel.hpp"
#include "qte/random.hpp"
#include "qte/scheme.hpp"

namespace qte {

// Random instance generators for the numerical audits. Everything here is
// driven by the deterministic Rng so audit runs are reproducible.

// A random POVM with n outcomes on a d-dimensional space: normalize a
// family of random positive operators by the inverse square root of
// their sum.
inline Povm random_povm(Rng& rng, int dim, int n_outcomes) {
  require(dim >= 1 && n_outcomes >= 1, "shape mismatch: povm size");
  std::vector<CMatrix> gs;
  CMatrix total(dim, dim);
  for (int y = 0; y < n_outcomes; ++y) {
    CMatrix g = random_psd(rng, dim);
    total = total + g;
    gs.push_back(std::move(g));
  }
  // Ridge keeps the sum invertible even in degenerate draws.
  total = total + CMatrix::identity(dim) * Complex(1e-9, 0.0);
  CMatrix root = psd_sqrt(total);
  CMatrix inv_root(EMatrix(root.eigen().inverse()));
  Povm povm;
  povm.space = SpaceShape::single("X", dim);
  for (auto& g : gs) povm.effects.push_back(inv_root * g * inv_root);
  // Absorb the ridge into the last effect so the family sums to identity.
  CMatrix sum(dim, dim);
  for (const auto& e : povm.effects) sum = sum + e;
  povm.effects.back() = povm.effects.back() + (CMatrix::identity(dim) - sum);
  return povm;
}

// A Haar-flavored CPTP map via a random Stinespring isometry with the
// given environment dimension.
inline KrausChannel random_cptp(Rng& rng, const SpaceShape& in, const SpaceShape& out,
                                int env_dim) {
  int din = in.dim(), dout = out.dim();
  CMatrix v = random_isometry(rng, dout * env_dim, din);
  std::vector<CMatrix> kraus;
  for (int e = 0; e < env_dim; ++e) {
    EMatrix k(dout, din);
    for (int r = 0; r < dout; ++r) k.row(r) = v.eigen().row(r * env_dim + e);
    kraus.push_back(CMatrix(std::move(k)));
  }
  return KrausChannel(std::move(kraus), in, out);
}

// A random probability distribution over n points.
inline std::vector<double> random_distribution(Rng& rng, int n) {
  std::vector<double> p(static_cast<size_t>(n));
  double sum = 0.0;
  for (auto& v : p) {
    double g = rng.next_gaussian();
    v = g * g;  // chi-square weights
    sum += v;
  }
  for (auto& v : p) v /= sum;
  return p;
}

// A random revocation scheme at the given desk-scale dimensions: all four
// maps are random CPTP channels, so it carries no correctness promise --
// exactly what the security-translation identities need.
inline QecmrScheme random_qecmr(Rng& rng, int n_messages, int n_keys, int cipher_dim,
                                int rev_dim) {
  QecmrScheme s;
  s.name = "random_qecmr";
  for (int m = 0; m < n_messages; ++m) s.messages.push_back(std::to_string(m));
  std::vector<std::string> key_labels;
  for (int k = 0; k < n_keys; ++k) key_labels.push_back("k" + std::to_string(k));
  s.keys.labels = key_labels;
  s.keys.probs = random_distribution(rng, n_keys);
  s.msg_space = SpaceShape::single("M", n_messages, true);
  s.cipher_space = SpaceShape::single("C", cipher_dim);
  s.rev_space = SpaceShape::single("R", rev_dim);
  s.flag_space = SpaceShape::single("F", 2, true);
  s.rev = random_cptp(rng, s.cipher_space, s.rev_space, 2);
  for (int k = 0; k < n_keys; ++k) {
    s.enc.push_back(random_cptp(rng, s.msg_space, s.cipher_space, 2));
    s.dec.push_back(random_cptp(rng, s.cipher_space, s.msg_space, 2));
    s.ver.push_back(random_cptp(rng, s.rev_space, s.flag_space, 2));
  }
  return s;
}

}  // namespace qte
