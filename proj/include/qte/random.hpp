#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>
#include <cmath>
#include <cstdint>
#include <string>

#include "qte/matrix.hpp"

namespace qte {

// SplitMix64-based generator. Uses only fixed-width integer arithmetic
// and an explicit Box-Muller transform, so streams are bit-for-bit
// reproducible for a given seed regardless of the standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  int next_int(int n) {
    require(n > 0, "shape mismatch: next_int needs a positive bound");
    uint64_t bound = static_cast<uint64_t>(n);
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return static_cast<int>(v % bound);
  }

  double next_gaussian() {
    // Box-Muller; the second value of each pair is discarded to keep the
    // stream position independent of call parity.
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Complex next_complex_gaussian() {
    double re = next_gaussian();
    double im = next_gaussian();
    return Complex(re, im) / std::sqrt(2.0);
  }

  // Deterministic substream derived from the current seed and a tag.
  Rng split(const std::string& tag) const {
    uint64_t h = state_ ^ 0x243f6a8885a308d3ULL;
    for (unsigned char c : tag) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return Rng(h);
  }

 private:
  uint64_t state_;
};

inline CMatrix random_gaussian(Rng& rng, int rows, int cols) {
  EMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.next_complex_gaussian();
  return CMatrix(std::move(m));
}

// Haar-ish isometry (rows >= cols) via QR with phase fixing.
inline CMatrix random_isometry(Rng& rng, int rows, int cols) {
  require(rows >= cols, "shape mismatch: isometry needs rows >= cols");
  EMatrix g = random_gaussian(rng, rows, cols).eigen();
  Eigen::HouseholderQR<EMatrix> qr(g);
  EMatrix q = qr.householderQ() * EMatrix::Identity(rows, cols);
  EMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (int j = 0; j < cols; ++j) {
    Complex d = r(j, j);
    double ad = std::abs(d);
    Complex phase = ad > 0 ? d / ad : Complex(1, 0);
    q.col(j) *= phase;
  }
  return CMatrix(std::move(q));
}

inline CMatrix random_unitary(Rng& rng, int d) { return random_isometry(rng, d, d); }

inline CMatrix random_hermitian(Rng& rng, int d) {
  EMatrix g = random_gaussian(rng, d, d).eigen();
  return CMatrix(EMatrix((g + g.adjoint()) / 2.0));
}

inline CMatrix random_psd(Rng& rng, int d) {
  EMatrix g = random_gaussian(rng, d, d).eigen();
  return CMatrix(EMatrix(g * g.adjoint() / static_cast<double>(d)));
}

inline CMatrix random_density(Rng& rng, int d) {
  CMatrix p = random_psd(rng, d);
  return p * (1.0 / p.trace());
}

inline CMatrix random_ket(Rng& rng, int d) {
  EMatrix v = random_gaussian(rng, d, 1).eigen();
  v /= v.norm();
  return CMatrix(std::move(v));
}

}  // namespace qte
