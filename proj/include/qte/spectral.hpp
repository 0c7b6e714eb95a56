#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qte/matrix.hpp"

namespace qte {

// Spectral decomposition of a Hermitian operator into eigenvalues and
// rank-one projectors onto an orthonormal eigenbasis (ascending order,
// one entry per eigenvalue instance, repetitions included).
struct SpectralDecomp {
  std::vector<double> eigenvalues;
  std::vector<CMatrix> projectors;

  CMatrix reconstruct() const {
    require(!projectors.empty(), "shape mismatch: empty decomposition");
    CMatrix acc = projectors.front() * Complex(eigenvalues.front(), 0.0);
    for (size_t i = 1; i < projectors.size(); ++i)
      acc = acc + projectors[i] * Complex(eigenvalues[i], 0.0);
    return acc;
  }
};

inline SpectralDecomp spectral_decompose(const CMatrix& a,
                                         double herm_tolerance = tol::hermiticity) {
  require(a.rows() == a.cols(), "shape mismatch: spectral decomposition of non-square matrix");
  require(a.is_hermitian(herm_tolerance), "not Hermitian: spectral decomposition refused");
  Eigen::SelfAdjointEigenSolver<EMatrix> es(a.eigen());
  require(es.info() == Eigen::Success, "not Hermitian: eigensolver failed");
  SpectralDecomp out;
  int d = a.rows();
  out.eigenvalues.reserve(static_cast<size_t>(d));
  out.projectors.reserve(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    out.eigenvalues.push_back(es.eigenvalues()(i));
    EMatrix v = es.eigenvectors().col(i);
    CMatrix proj(EMatrix(v * v.adjoint()));
    if (a.row_shape() && a.col_shape()) proj.set_shapes(*a.row_shape(), *a.col_shape());
    out.projectors.push_back(std::move(proj));
  }
  return out;
}

// Operator square root of a PSD matrix. Eigenvalues in
// [psd_clamp_floor, 0) are clamped to zero; anything lower is an error.
inline CMatrix psd_sqrt(const CMatrix& a, double clamp_floor = tol::psd_clamp_floor) {
  require(a.rows() == a.cols() && a.is_hermitian(), "not Hermitian: operator square root refused");
  Eigen::SelfAdjointEigenSolver<EMatrix> es(a.eigen());
  require(es.info() == Eigen::Success, "not Hermitian: eigensolver failed");
  EMatrix vecs = es.eigenvectors();
  Eigen::VectorXd vals = es.eigenvalues();
  for (int i = 0; i < vals.size(); ++i) {
    require(vals(i) >= clamp_floor, "not PSD: eigenvalue below clamp floor");
    if (vals(i) < 0.0) vals(i) = 0.0;
  }
  EMatrix root = vecs * vals.cwiseSqrt().asDiagonal() * vecs.adjoint();
  CMatrix out(std::move(root));
  if (a.row_shape() && a.col_shape()) out.set_shapes(*a.row_shape(), *a.col_shape());
  return out;
}

}  // namespace qte
