#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <map>
#include <string>

#include "qte/spectral.hpp"

namespace qte {

// Trace norm (sum of singular values). Hermitian inputs take the
// eigenvalue route, general inputs the SVD route.
inline double trace_norm(const CMatrix& a) {
  if (a.rows() == a.cols() && a.is_hermitian()) {
    Eigen::SelfAdjointEigenSolver<EMatrix> es(a.eigen(), Eigen::EigenvaluesOnly);
    require(es.info() == Eigen::Success, "not Hermitian: eigensolver failed");
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<EMatrix> svd(a.eigen());
  return svd.singularValues().sum();
}

inline double trace_distance(const CMatrix& a, const CMatrix& b) {
  return 0.5 * trace_norm(a - b);
}

// Trace distance between (possibly subnormalized or unnormalized) pure
// states given as column vectors:
//   sqrt( ((<psi|psi> + <phi|phi>)/2)^2 - |<psi|phi>|^2 ).
inline double td_pure(const CMatrix& psi, const CMatrix& phi) {
  require(psi.cols() == 1 && phi.cols() == 1, "shape mismatch: td_pure expects column vectors");
  require(psi.rows() == phi.rows(), "shape mismatch: td_pure vector dimensions differ");
  double npsi = psi.eigen().squaredNorm();
  double nphi = phi.eigen().squaredNorm();
  Complex ovl = (psi.eigen().adjoint() * phi.eigen())(0, 0);
  double avg = 0.5 * (npsi + nphi);
  double inside = avg * avg - std::norm(ovl);
  if (inside < 0.0) {
    require(inside >= -tol::identity, "not PSD: td_pure radicand below zero");
    inside = 0.0;
  }
  return std::sqrt(inside);
}

// The two-outcome measurement achieving the trace-norm distinguishing
// advantage for a Hermitian difference a - b: P collects eigenprojectors
// with eigenvalue >= 0 (values in [-1e-10, 0) count as zero), and
// Q = I - P exactly, so the pair is a valid POVM by construction.
// saturation = Tr(P (a-b)) - Tr(Q (a-b)) equals || a - b ||_1.
struct HelstromPair {
  CMatrix p;
  CMatrix q;
  double saturation = 0.0;
};

inline HelstromPair helstrom_pair(const CMatrix& a, const CMatrix& b) {
  CMatrix diff = a - b;
  require(diff.rows() == diff.cols() && diff.is_hermitian(),
          "not Hermitian: helstrom pair needs a Hermitian difference");
  SpectralDecomp sd = spectral_decompose(diff);
  CMatrix p = CMatrix::zero(diff.rows(), diff.cols());
  for (size_t i = 0; i < sd.eigenvalues.size(); ++i)
    if (sd.eigenvalues[i] >= -1e-10) p = p + sd.projectors[i];
  CMatrix q = CMatrix::identity(diff.rows()) - p;
  if (diff.row_shape() && diff.col_shape()) {
    p.set_shapes(*diff.row_shape(), *diff.col_shape());
    q.set_shapes(*diff.row_shape(), *diff.col_shape());
  }
  HelstromPair out;
  out.saturation = (p.eigen() * diff.eigen()).trace().real() -
                   (q.eigen() * diff.eigen()).trace().real();
  out.p = std::move(p);
  out.q = std::move(q);
  return out;
}

// Closed-form scalar bounds used throughout the audit suite.
enum class BoundKind {
  markov_ub,    // Pr[X >= alpha] <= expect / alpha
  conc_lb,      // Pr[X > alpha]  >= (expect - alpha) / (beta - alpha), X <= beta
  copies_lb,    // distinguishability of t copies >= 1 - 2 exp(-(t/2) d^2)
  scaled_td_lb  // (max{t0,t1}/2) d <= trace distance of scaled states
};

inline double bound_eval(BoundKind kind, const std::map<std::string, double>& params) {
  auto get = [&](const std::string& k) {
    auto it = params.find(k);
    require(it != params.end(), "schema violation: missing bound parameter " + k);
    return it->second;
  };
  switch (kind) {
    case BoundKind::markov_ub: {
      double e = get("expect"), a = get("alpha");
      require(a > 0.0, "schema violation: markov bound needs alpha > 0");
      return e / a;
    }
    case BoundKind::conc_lb: {
      double e = get("expect"), a = get("alpha"), b = get("beta");
      require(b > a, "schema violation: concentration bound needs beta > alpha");
      return (e - a) / (b - a);
    }
    case BoundKind::copies_lb: {
      double t = get("t"), d = get("d");
      return 1.0 - 2.0 * std::exp(-(t / 2.0) * d * d);
    }
    case BoundKind::scaled_td_lb: {
      double t0 = get("t0"), t1 = get("t1"), d = get("d");
      return 0.5 * (t0 > t1 ? t0 : t1) * d;
    }
  }
  throw Error("schema violation: unknown bound kind");
}

}  // namespace qte
