#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "qte/error.hpp"
#include "qte/tolerances.hpp"

namespace qte {

// One tensor factor of a labelled product space. Labels are advisory
// (all contracts are positional); the classical flag records that states
// on this factor are expected to be diagonal in the computational basis.
struct Factor {
  std::string label;
  int dim = 1;
  bool classical = false;

  Factor() = default;
  Factor(std::string l, int d, bool c = false)
      : label(std::move(l)), dim(d), classical(c) {}
};

inline bool same_dims(const Factor& a, const Factor& b) { return a.dim == b.dim; }

// An ordered factorization H = H_0 (x) H_1 (x) ... (x) H_{n-1}.
// The empty shape is the scalar space (dimension one), used for the
// domain of preparation channels and the codomain of discard channels.
class SpaceShape {
 public:
  SpaceShape() = default;
  SpaceShape(std::initializer_list<Factor> fs) : factors_(fs) { check(); }
  explicit SpaceShape(std::vector<Factor> fs) : factors_(std::move(fs)) { check(); }

  static SpaceShape single(const std::string& label, int dim, bool classical = false) {
    return SpaceShape{Factor(label, dim, classical)};
  }
  static SpaceShape scalar() { return SpaceShape(); }

  int factor_count() const { return static_cast<int>(factors_.size()); }
  const Factor& factor(int i) const { return factors_.at(static_cast<size_t>(i)); }
  const std::vector<Factor>& factors() const { return factors_; }

  int dim() const {
    long long d = 1;
    for (const auto& f : factors_) {
      d *= f.dim;
      require(d <= limits::max_matrix_entries, "dimension cap exceeded: shape dimension overflow");
    }
    return static_cast<int>(d);
  }

  bool all_classical() const {
    for (const auto& f : factors_)
      if (!f.classical) return false;
    return true;
  }

  SpaceShape concat(const SpaceShape& o) const {
    std::vector<Factor> fs = factors_;
    fs.insert(fs.end(), o.factors_.begin(), o.factors_.end());
    return SpaceShape(std::move(fs));
  }

  // perm[i] is the destination position of factor i.
  SpaceShape permuted(const std::vector<int>& perm) const {
    require(static_cast<int>(perm.size()) == factor_count(),
            "not a permutation: length differs from factor count");
    std::vector<Factor> out(factors_.size());
    std::vector<bool> hit(factors_.size(), false);
    for (size_t i = 0; i < perm.size(); ++i) {
      int p = perm[i];
      require(p >= 0 && p < factor_count() && !hit[static_cast<size_t>(p)],
              "not a permutation: invalid or repeated destination");
      hit[static_cast<size_t>(p)] = true;
      out[static_cast<size_t>(p)] = factors_[i];
    }
    return SpaceShape(std::move(out));
  }

  // Shape made of the factors at the given positions, in the given order.
  SpaceShape subset(const std::vector<int>& positions) const {
    std::vector<Factor> out;
    out.reserve(positions.size());
    for (int p : positions) {
      require(p >= 0 && p < factor_count(), "shape mismatch: factor index out of range");
      out.push_back(factors_[static_cast<size_t>(p)]);
    }
    return SpaceShape(std::move(out));
  }

  // Row-major strides: factor 0 varies slowest.
  std::vector<long long> strides() const {
    std::vector<long long> s(factors_.size(), 1);
    for (int i = factor_count() - 2; i >= 0; --i)
      s[static_cast<size_t>(i)] =
          s[static_cast<size_t>(i + 1)] * factors_[static_cast<size_t>(i + 1)].dim;
    return s;
  }

  long long index_of(const std::vector<int>& multi) const {
    require(static_cast<int>(multi.size()) == factor_count(), "shape mismatch: multi-index length");
    auto s = strides();
    long long idx = 0;
    for (size_t i = 0; i < multi.size(); ++i) {
      require(multi[i] >= 0 && multi[i] < factors_[i].dim,
              "shape mismatch: multi-index out of range");
      idx += multi[i] * s[i];
    }
    return idx;
  }

  std::vector<int> multi_of(long long index) const {
    std::vector<int> multi(factors_.size(), 0);
    for (int i = factor_count() - 1; i >= 0; --i) {
      int d = factors_[static_cast<size_t>(i)].dim;
      multi[static_cast<size_t>(i)] = static_cast<int>(index % d);
      index /= d;
    }
    return multi;
  }

  bool dims_equal(const SpaceShape& o) const {
    if (factor_count() != o.factor_count()) return false;
    for (int i = 0; i < factor_count(); ++i)
      if (factors_[static_cast<size_t>(i)].dim != o.factors_[static_cast<size_t>(i)].dim)
        return false;
    return true;
  }

  std::string describe() const {
    std::string s = "[";
    for (int i = 0; i < factor_count(); ++i) {
      if (i) s += ", ";
      const Factor& f = factors_[static_cast<size_t>(i)];
      s += f.label + ":" + std::to_string(f.dim) + (f.classical ? "c" : "q");
    }
    return s + "]";
  }

 private:
  void check() const {
    for (const auto& f : factors_) {
      require(f.dim >= 1, "shape mismatch: factor dimension must be positive");
      require(f.dim <= limits::max_dim, "dimension cap exceeded: factor dimension");
    }
  }
  std::vector<Factor> factors_;
};

// Identity permutation convenience and composition helpers for one-line
// permutations (perm[i] = destination of position i).
inline std::vector<int> identity_perm(int n) {
  std::vector<int> p(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)] = i;
  return p;
}

inline std::vector<int> inverse_perm(const std::vector<int>& perm) {
  std::vector<int> inv(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) inv[static_cast<size_t>(perm[i])] = static_cast<int>(i);
  return inv;
}

}  // namespace qte
