#pragma once

#include <utility>
#include <vector>

#include "qte/distance.hpp"
#include "qte/matrix.hpp"
#include "qte/spectral.hpp"

namespace qte {

// Completely positive trace-preserving map in Kraus form. Kraus operators
// map the in shape to the out shape; exact zero operators produced by
// compositions are dropped on construction.
class KrausChannel {
 public:
  KrausChannel() = default;
  KrausChannel(std::vector<CMatrix> kraus, SpaceShape in, SpaceShape out)
      : in_(std::move(in)), out_(std::move(out)) {
    require(!kraus.empty(), "kraus dimension mismatch: empty Kraus list");
    kraus_.reserve(kraus.size());
    for (auto& k : kraus) {
      require(k.rows() == out_.dim() && k.cols() == in_.dim(),
              "kraus dimension mismatch: operator size vs channel shapes");
      if (k.norm_fro() == 0.0) continue;
      k.set_shapes(out_, in_);
      kraus_.push_back(std::move(k));
    }
    if (kraus_.empty()) {
      // Keep one explicit zero so the object stays well formed; such a
      // channel fails validation but remains inspectable.
      CMatrix z(out_.dim(), in_.dim());
      z.set_shapes(out_, in_);
      kraus_.push_back(std::move(z));
    }
  }

  const SpaceShape& in_shape() const { return in_; }
  const SpaceShape& out_shape() const { return out_; }
  const std::vector<CMatrix>& kraus() const { return kraus_; }

  CMatrix apply(const CMatrix& rho) const {
    require(rho.rows() == in_.dim() && rho.cols() == in_.dim(),
            "shape mismatch: channel input dimension");
    EMatrix acc = EMatrix::Zero(out_.dim(), out_.dim());
    for (const auto& k : kraus_) acc += k.eigen() * rho.eigen() * k.eigen().adjoint();
    CMatrix res(std::move(acc));
    res.set_shapes(out_, out_);
    return res;
  }

  // Heisenberg picture: effect on the output space pulled back to the
  // input space, sum_i K_i^dagger E K_i.
  CMatrix apply_adjoint(const CMatrix& effect) const {
    require(effect.rows() == out_.dim() && effect.cols() == out_.dim(),
            "shape mismatch: adjoint channel input dimension");
    EMatrix acc = EMatrix::Zero(in_.dim(), in_.dim());
    for (const auto& k : kraus_) acc += k.eigen().adjoint() * effect.eigen() * k.eigen();
    CMatrix res(std::move(acc));
    res.set_shapes(in_, in_);
    return res;
  }

  // Choi operator on out (x) in with the convention
  // J[(a,i),(b,j)] = sum_k K[a,i] conj(K[b,j]).
  CMatrix choi() const {
    long long din = in_.dim(), dout = out_.dim();
    long long d = din * dout;
    require(d * d <= limits::max_matrix_entries, "dimension cap exceeded: choi matrix");
    EMatrix j = EMatrix::Zero(d, d);
    for (const auto& k : kraus_) {
      // vec(K) with row-major pairing (a, i) -> a * din + i.
      EMatrix v(d, 1);
      for (long long a = 0; a < dout; ++a)
        for (long long i = 0; i < din; ++i) v(a * din + i, 0) = k(static_cast<int>(a), static_cast<int>(i));
      j += v * v.adjoint();
    }
    CMatrix res(std::move(j));
    res.set_shapes(out_.concat(in_), out_.concat(in_));
    return res;
  }

 private:
  std::vector<CMatrix> kraus_;
  SpaceShape in_, out_;
};

struct ChannelCheck {
  double completeness_dev = 0.0;  // max abs entry of sum K^t K - I
  double choi_min_eig = 0.0;
  bool cptp = false;
};

inline ChannelCheck validate_channel(const KrausChannel& c,
                                     double completeness_tol = tol::completeness,
                                     double choi_floor = tol::choi_floor) {
  ChannelCheck out;
  EMatrix acc = EMatrix::Zero(c.in_shape().dim(), c.in_shape().dim());
  for (const auto& k : c.kraus()) acc += k.eigen().adjoint() * k.eigen();
  acc -= EMatrix::Identity(acc.rows(), acc.cols());
  out.completeness_dev = acc.cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<EMatrix> es(c.choi().eigen(), Eigen::EigenvaluesOnly);
  out.choi_min_eig = es.eigenvalues().minCoeff();
  out.cptp = out.completeness_dev <= completeness_tol && out.choi_min_eig >= choi_floor;
  return out;
}

// f after g (apply g first). Kraus operators multiply pairwise.
inline KrausChannel compose(const KrausChannel& f, const KrausChannel& g) {
  require(f.in_shape().dim() == g.out_shape().dim(), "shape mismatch: channel composition");
  std::vector<CMatrix> ops;
  ops.reserve(f.kraus().size() * g.kraus().size());
  for (const auto& kf : f.kraus())
    for (const auto& kg : g.kraus()) ops.push_back(CMatrix(EMatrix(kf.eigen() * kg.eigen())));
  return KrausChannel(std::move(ops), g.in_shape(), f.out_shape());
}

inline KrausChannel tensor(const KrausChannel& a, const KrausChannel& b) {
  std::vector<CMatrix> ops;
  ops.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& ka : a.kraus())
    for (const auto& kb : b.kraus()) ops.push_back(tensor_product(ka, kb));
  return KrausChannel(std::move(ops), a.in_shape().concat(b.in_shape()),
                      a.out_shape().concat(b.out_shape()));
}

inline KrausChannel tensor(const std::vector<KrausChannel>& parts) {
  require(!parts.empty(), "shape mismatch: empty channel tensor");
  KrausChannel acc = parts.front();
  for (size_t i = 1; i < parts.size(); ++i) acc = tensor(acc, parts[i]);
  return acc;
}

inline KrausChannel identity_channel(const SpaceShape& s) {
  return KrausChannel({CMatrix::identity(s.dim())}, s, s);
}

// Unitary or isometry conjugation as a channel.
inline KrausChannel unitary_channel(const CMatrix& u, const SpaceShape& in, const SpaceShape& out) {
  require(u.rows() == out.dim() && u.cols() == in.dim(), "kraus dimension mismatch: unitary");
  return KrausChannel({u}, in, out);
}

inline KrausChannel unitary_channel(const CMatrix& u, const SpaceShape& s) {
  return unitary_channel(u, s, s);
}

// Complete dephasing in the computational product basis. The output shape
// marks every factor classical.
inline KrausChannel dephase_channel(const SpaceShape& s) {
  int d = s.dim();
  std::vector<CMatrix> ops;
  ops.reserve(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) ops.push_back(CMatrix::ketbra(d, i, i));
  std::vector<Factor> fs = s.factors();
  for (auto& f : fs) f.classical = true;
  return KrausChannel(std::move(ops), s, SpaceShape(std::move(fs)));
}

// Factor reordering as a channel (perm[i] = destination of factor i).
inline KrausChannel swap_channel(const SpaceShape& s, const std::vector<int>& perm) {
  auto map = detail::permutation_index_map(s, perm);
  int d = s.dim();
  EMatrix w = EMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) w(map[static_cast<size_t>(i)], i) = 1.0;
  return KrausChannel({CMatrix(std::move(w))}, s, s.permuted(perm));
}

// Measurement outcomes live on a single classical factor.
struct Povm {
  SpaceShape space;                  // measured space
  std::vector<CMatrix> effects;      // PSD, summing to the identity
  std::vector<std::string> labels;   // optional outcome labels
};

inline void validate_povm(const Povm& p, double tolerance = tol::completeness) {
  require(!p.effects.empty(), "shape mismatch: empty POVM");
  EMatrix acc = EMatrix::Zero(p.space.dim(), p.space.dim());
  for (const auto& e : p.effects) {
    require(e.rows() == p.space.dim() && e.cols() == p.space.dim(),
            "shape mismatch: POVM effect dimension");
    require(e.is_hermitian(), "not Hermitian: POVM effect");
    Eigen::SelfAdjointEigenSolver<EMatrix> es(e.eigen(), Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= tol::choi_floor, "not PSD: POVM effect");
    acc += e.eigen();
  }
  acc -= EMatrix::Identity(acc.rows(), acc.cols());
  require(acc.cwiseAbs().maxCoeff() <= tolerance, "not CPTP: POVM does not sum to identity");
}

// Destructive measurement channel rho -> sum_y Tr(mu_y rho) |y><y|.
// Kraus operators |y><phi| come from eigendecompositions of the effects.
inline KrausChannel measure_channel(const Povm& p, const std::string& outcome_label = "Y") {
  validate_povm(p);
  int ny = static_cast<int>(p.effects.size());
  std::vector<CMatrix> ops;
  for (int y = 0; y < ny; ++y) {
    Eigen::SelfAdjointEigenSolver<EMatrix> es(p.effects[static_cast<size_t>(y)].eigen());
    require(es.info() == Eigen::Success, "not Hermitian: eigensolver failed");
    for (int j = 0; j < es.eigenvalues().size(); ++j) {
      double lam = es.eigenvalues()(j);
      if (lam <= 0.0) continue;
      EMatrix k = EMatrix::Zero(ny, p.space.dim());
      k.row(y) = std::sqrt(lam) * es.eigenvectors().col(j).adjoint();
      ops.push_back(CMatrix(std::move(k)));
    }
  }
  return KrausChannel(std::move(ops), p.space,
                      SpaceShape::single(outcome_label, ny, true));
}

// Classical channel given by a stochastic matrix s(y|x): dephases the
// input and moves probability mass along s. Kraus: sqrt(s(y|x)) |y><x|.
inline KrausChannel classical_channel(const std::vector<std::vector<double>>& s,
                                      const SpaceShape& in, const SpaceShape& out) {
  int dx = in.dim(), dy = out.dim();
  require(static_cast<int>(s.size()) == dy, "kraus dimension mismatch: stochastic matrix rows");
  for (const auto& row : s)
    require(static_cast<int>(row.size()) == dx, "kraus dimension mismatch: stochastic matrix cols");
  for (int x = 0; x < dx; ++x) {
    double colsum = 0.0;
    for (int y = 0; y < dy; ++y) {
      require(s[static_cast<size_t>(y)][static_cast<size_t>(x)] >= -tol::probability,
              "not a probability distribution: negative stochastic entry");
      colsum += s[static_cast<size_t>(y)][static_cast<size_t>(x)];
    }
    require(std::abs(colsum - 1.0) <= tol::probability,
            "not a probability distribution: stochastic column sum");
  }
  std::vector<CMatrix> ops;
  for (int y = 0; y < dy; ++y)
    for (int x = 0; x < dx; ++x) {
      double v = s[static_cast<size_t>(y)][static_cast<size_t>(x)];
      if (v <= 0.0) continue;
      EMatrix k = EMatrix::Zero(dy, dx);
      k(y, x) = std::sqrt(v);
      ops.push_back(CMatrix(std::move(k)));
    }
  return KrausChannel(std::move(ops), in, out);
}

// Deterministic classical function as a channel.
inline KrausChannel function_channel(const std::vector<int>& f, const SpaceShape& in,
                                     const SpaceShape& out) {
  std::vector<std::vector<double>> s(static_cast<size_t>(out.dim()),
                                     std::vector<double>(static_cast<size_t>(in.dim()), 0.0));
  require(static_cast<int>(f.size()) == in.dim(), "shape mismatch: function table length");
  for (int x = 0; x < in.dim(); ++x) {
    require(f[static_cast<size_t>(x)] >= 0 && f[static_cast<size_t>(x)] < out.dim(),
            "shape mismatch: function value out of range");
    s[static_cast<size_t>(f[static_cast<size_t>(x)])][static_cast<size_t>(x)] = 1.0;
  }
  return classical_channel(s, in, out);
}

// State preparation: the scalar space to a fixed state sigma.
inline KrausChannel prep_channel(const CMatrix& sigma, const SpaceShape& out) {
  require(sigma.rows() == out.dim() && sigma.cols() == out.dim(),
          "shape mismatch: preparation state dimension");
  require(sigma.is_hermitian(), "not Hermitian: preparation state");
  Eigen::SelfAdjointEigenSolver<EMatrix> es(sigma.eigen());
  require(es.info() == Eigen::Success, "not Hermitian: eigensolver failed");
  std::vector<CMatrix> ops;
  for (int j = 0; j < es.eigenvalues().size(); ++j) {
    double lam = es.eigenvalues()(j);
    require(lam >= tol::psd_clamp_floor, "not PSD: preparation state");
    if (lam <= 0.0) continue;
    ops.push_back(CMatrix(EMatrix(std::sqrt(lam) * es.eigenvectors().col(j))));
  }
  return KrausChannel(std::move(ops), SpaceShape::scalar(), out);
}

// Full trace as a channel to the scalar space.
inline KrausChannel discard_channel(const SpaceShape& s) {
  int d = s.dim();
  std::vector<CMatrix> ops;
  for (int i = 0; i < d; ++i) {
    EMatrix k = EMatrix::Zero(1, d);
    k(0, i) = 1.0;
    ops.push_back(CMatrix(std::move(k)));
  }
  return KrausChannel(std::move(ops), s, SpaceShape::scalar());
}

// Partial trace over the listed factors, as a channel. Remaining factors
// keep their original relative order.
inline KrausChannel discard_factors(const SpaceShape& s, const std::vector<int>& drop) {
  std::vector<bool> dropped(static_cast<size_t>(s.factor_count()), false);
  for (int p : drop) {
    require(p >= 0 && p < s.factor_count(), "shape mismatch: discard factor index");
    require(!dropped[static_cast<size_t>(p)], "shape mismatch: repeated discard factor");
    dropped[static_cast<size_t>(p)] = true;
  }
  std::vector<int> keep;
  for (int i = 0; i < s.factor_count(); ++i)
    if (!dropped[static_cast<size_t>(i)]) keep.push_back(i);
  SpaceShape keep_shape = s.subset(keep);
  std::vector<int> drop_sorted;
  for (int i = 0; i < s.factor_count(); ++i)
    if (dropped[static_cast<size_t>(i)]) drop_sorted.push_back(i);
  SpaceShape drop_shape = s.subset(drop_sorted);

  auto strides = s.strides();
  long long dk = keep_shape.dim(), dd = drop_shape.dim();
  std::vector<CMatrix> ops;
  ops.reserve(static_cast<size_t>(dd));
  for (long long t = 0; t < dd; ++t) {
    EMatrix k = EMatrix::Zero(dk, s.dim());
    auto tm = drop_shape.multi_of(t);
    for (long long r = 0; r < dk; ++r) {
      auto rm = keep_shape.multi_of(r);
      long long idx = 0;
      for (size_t i = 0; i < keep.size(); ++i)
        idx += static_cast<long long>(rm[i]) * strides[static_cast<size_t>(keep[i])];
      for (size_t i = 0; i < drop_sorted.size(); ++i)
        idx += static_cast<long long>(tm[i]) * strides[static_cast<size_t>(drop_sorted[i])];
      k(r, idx) = 1.0;
    }
    ops.push_back(CMatrix(std::move(k)));
  }
  return KrausChannel(std::move(ops), s, keep_shape);
}

// Applies a channel to a contiguous run of factors starting at `first`,
// leaving the rest untouched: Id (x) c (x) Id with the obvious reshuffles
// avoided because the run is contiguous.
inline KrausChannel on_factors(const KrausChannel& c, const SpaceShape& full, int first) {
  int nc = c.in_shape().factor_count();
  require(first >= 0 && first + nc <= full.factor_count(), "shape mismatch: on_factors range");
  std::vector<int> left_idx, right_idx, mid_idx;
  for (int i = 0; i < first; ++i) left_idx.push_back(i);
  for (int i = first; i < first + nc; ++i) mid_idx.push_back(i);
  for (int i = first + nc; i < full.factor_count(); ++i) right_idx.push_back(i);
  SpaceShape left = full.subset(left_idx);
  SpaceShape mid = full.subset(mid_idx);
  SpaceShape right = full.subset(right_idx);
  require(mid.dims_equal(c.in_shape()), "shape mismatch: on_factors target factors");
  KrausChannel lid = identity_channel(left);
  KrausChannel rid = identity_channel(right);
  return tensor(tensor(lid, c), rid);
}

// Whether the channel's output is classical: composing with complete
// dephasing of the output leaves it unchanged (compared via Choi).
inline bool is_classical_output(const KrausChannel& c, double tolerance = tol::completeness) {
  KrausChannel deph = compose(dephase_channel(c.out_shape()), c);
  return (deph.choi() - c.choi()).norm_max() <= tolerance;
}

// Extracts the unique POVM mu with Delta o c = Measure(mu) from a channel
// whose output is classical: mu_y = sum_i K_i^dagger |y><y| K_i.
inline Povm povm_of_channel(const KrausChannel& c, double tolerance = tol::completeness) {
  require(is_classical_output(c, tolerance), "classical output required");
  int ny = c.out_shape().dim();
  Povm p;
  p.space = c.in_shape();
  p.effects.reserve(static_cast<size_t>(ny));
  for (int y = 0; y < ny; ++y)
    p.effects.push_back(c.apply_adjoint(CMatrix::ketbra(ny, y, y)));
  return p;
}

// Coherent gentle measurement of a classical-output channel: the isometry
// V = sum_y sqrt(mu_y) (x) |y> as a single-Kraus channel from the input
// space to input (x) outcome register. The outcome register is quantum
// here; dephasing it recovers the original statistics exactly.
inline KrausChannel cgm_of_channel(const KrausChannel& c, const std::string& outcome_label = "Y") {
  Povm p = povm_of_channel(c);
  int din = c.in_shape().dim();
  int ny = static_cast<int>(p.effects.size());
  EMatrix v = EMatrix::Zero(static_cast<long long>(din) * ny, din);
  for (int y = 0; y < ny; ++y) {
    CMatrix root = psd_sqrt(p.effects[y]);
    // Row layout (x, y) with the outcome register as the last factor.
    for (int x = 0; x < din; ++x)
      for (int xp = 0; xp < din; ++xp)
        v(static_cast<long long>(x) * ny + y, xp) += root(x, xp);
  }
  SpaceShape out = c.in_shape().concat(SpaceShape::single(outcome_label, ny, false));
  return KrausChannel({CMatrix(std::move(v))}, c.in_shape(), out);
}

}  // namespace qte
