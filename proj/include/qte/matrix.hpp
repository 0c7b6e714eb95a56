#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "qte/error.hpp"
#include "qte/shape.hpp"
#include "qte/tolerances.hpp"

namespace qte {

using Complex = std::complex<double>;
using EMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

// Dense complex matrix with optional row/column space factorizations.
// Operators on H carry the same shape twice; kets carry a row shape and
// the scalar column shape; Kraus operators carry out/in shapes.
class CMatrix {
 public:
  CMatrix() : m_(EMatrix::Zero(0, 0)) {}
  CMatrix(int rows, int cols) : m_(EMatrix::Zero(rows, cols)) { guard(rows, cols); }
  explicit CMatrix(EMatrix m) : m_(std::move(m)) { guard(m_.rows(), m_.cols()); }
  CMatrix(EMatrix m, SpaceShape row, SpaceShape col)
      : m_(std::move(m)), row_(std::move(row)), col_(std::move(col)) {
    guard(m_.rows(), m_.cols());
    require(!row_ || row_->dim() == m_.rows(), "shape mismatch: row shape vs matrix rows");
    require(!col_ || col_->dim() == m_.cols(), "shape mismatch: col shape vs matrix cols");
  }

  int rows() const { return static_cast<int>(m_.rows()); }
  int cols() const { return static_cast<int>(m_.cols()); }

  Complex& operator()(int r, int c) { return m_(r, c); }
  const Complex& operator()(int r, int c) const { return m_(r, c); }

  const EMatrix& eigen() const { return m_; }
  EMatrix& eigen() { return m_; }

  const std::optional<SpaceShape>& row_shape() const { return row_; }
  const std::optional<SpaceShape>& col_shape() const { return col_; }
  void set_shapes(SpaceShape row, SpaceShape col) {
    require(row.dim() == rows() && col.dim() == cols(), "shape mismatch: set_shapes");
    row_ = std::move(row);
    col_ = std::move(col);
  }
  void clear_shapes() {
    row_.reset();
    col_.reset();
  }

  // The shape of the space an operator acts on; requires square layout.
  const SpaceShape& operator_shape() const {
    require(row_.has_value(), "shape mismatch: operator carries no shape");
    require(col_.has_value() && row_->dims_equal(*col_), "shape mismatch: operator shapes differ");
    return *row_;
  }

  CMatrix dagger() const {
    CMatrix out(EMatrix(m_.adjoint()));
    if (row_ && col_) out.set_shapes(*col_, *row_);
    return out;
  }

  Complex trace() const { return m_.trace(); }
  double norm_max() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }
  double norm_fro() const { return m_.norm(); }

  bool is_hermitian(double tolerance = tol::hermiticity) const {
    if (rows() != cols()) return false;
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
  }

  CMatrix operator+(const CMatrix& o) const { return binary(o, m_ + o.m_); }
  CMatrix operator-(const CMatrix& o) const { return binary(o, m_ - o.m_); }
  CMatrix operator*(const CMatrix& o) const {
    require(cols() == o.rows(), "shape mismatch: matrix product");
    CMatrix out(EMatrix(m_ * o.m_));
    if (row_ && o.col_) out.set_shapes(*row_, *o.col_);
    return out;
  }
  CMatrix operator*(Complex s) const {
    CMatrix out(EMatrix(m_ * s));
    out.row_ = row_;
    out.col_ = col_;
    return out;
  }
  friend CMatrix operator*(Complex s, const CMatrix& a) { return a * s; }

  static CMatrix zero(int rows, int cols) { return CMatrix(rows, cols); }

  static CMatrix identity(int d) { return CMatrix(EMatrix(EMatrix::Identity(d, d))); }

  static CMatrix identity(const SpaceShape& s) {
    CMatrix out(EMatrix(EMatrix::Identity(s.dim(), s.dim())));
    out.set_shapes(s, s);
    return out;
  }

  static CMatrix ket(int d, int i) {
    require(i >= 0 && i < d, "shape mismatch: basis index out of range");
    EMatrix v = EMatrix::Zero(d, 1);
    v(i, 0) = 1.0;
    return CMatrix(std::move(v));
  }

  static CMatrix ket(const SpaceShape& s, const std::vector<int>& multi) {
    CMatrix v = ket(s.dim(), static_cast<int>(s.index_of(multi)));
    v.set_shapes(s, SpaceShape::scalar());
    return v;
  }

  static CMatrix ketbra(int d, int i, int j) {
    EMatrix m = EMatrix::Zero(d, d);
    m(i, j) = 1.0;
    return CMatrix(std::move(m));
  }

  static CMatrix projector(const CMatrix& v) {
    require(v.cols() == 1, "shape mismatch: projector expects a column vector");
    CMatrix out(EMatrix(v.m_ * v.m_.adjoint()));
    if (v.row_) out.set_shapes(*v.row_, *v.row_);
    return out;
  }

 private:
  static void guard(long long r, long long c) {
    require(r >= 0 && c >= 0, "shape mismatch: negative dimensions");
    require(r * c <= limits::max_matrix_entries, "dimension cap exceeded: matrix too large");
  }
  CMatrix binary(const CMatrix& o, EMatrix result) const {
    require(rows() == o.rows() && cols() == o.cols(), "shape mismatch: elementwise op");
    CMatrix out(std::move(result));
    if (row_ && col_) {
      out.row_ = row_;
      out.col_ = col_;
    } else if (o.row_ && o.col_) {
      out.row_ = o.row_;
      out.col_ = o.col_;
    }
    return out;
  }

  EMatrix m_;
  std::optional<SpaceShape> row_, col_;
};

// Kronecker product; shapes concatenate when both operands carry them.
inline CMatrix tensor_product(const CMatrix& a, const CMatrix& b) {
  long long r = static_cast<long long>(a.rows()) * b.rows();
  long long c = static_cast<long long>(a.cols()) * b.cols();
  require(r * c <= limits::max_matrix_entries, "dimension cap exceeded: tensor product");
  EMatrix out(r, c);
  for (int ia = 0; ia < a.rows(); ++ia)
    for (int ja = 0; ja < a.cols(); ++ja)
      out.block(static_cast<long long>(ia) * b.rows(), static_cast<long long>(ja) * b.cols(),
                b.rows(), b.cols()) = a(ia, ja) * b.eigen();
  CMatrix res(std::move(out));
  if (a.row_shape() && b.row_shape() && a.col_shape() && b.col_shape())
    res.set_shapes(a.row_shape()->concat(*b.row_shape()), a.col_shape()->concat(*b.col_shape()));
  return res;
}

inline CMatrix tensor_product(const std::vector<CMatrix>& parts) {
  require(!parts.empty(), "shape mismatch: empty tensor product");
  CMatrix acc = parts.front();
  for (size_t i = 1; i < parts.size(); ++i) acc = tensor_product(acc, parts[i]);
  return acc;
}

namespace detail {
// Index remap sending each basis index of `shape` to its image under the
// one-line factor permutation (perm[i] = destination of factor i).
inline std::vector<long long> permutation_index_map(const SpaceShape& shape,
                                                    const std::vector<int>& perm) {
  SpaceShape out_shape = shape.permuted(perm);
  auto out_strides = out_shape.strides();
  long long d = shape.dim();
  std::vector<long long> map(static_cast<size_t>(d));
  for (long long idx = 0; idx < d; ++idx) {
    auto multi = shape.multi_of(idx);
    long long out = 0;
    for (size_t i = 0; i < multi.size(); ++i)
      out += static_cast<long long>(multi[i]) * out_strides[static_cast<size_t>(perm[i])];
    map[static_cast<size_t>(idx)] = out;
  }
  return map;
}
}  // namespace detail

// Reorders tensor factors: factor i moves to position perm[i]. Operators
// (square, equal shapes) have rows and columns permuted together; kets
// only their rows. Applying perm and then its inverse is an exact identity
// because entries are moved, never recombined.
inline CMatrix permute_factors(const CMatrix& a, const std::vector<int>& perm) {
  require(a.row_shape().has_value(), "shape mismatch: permute_factors needs a row shape");
  const SpaceShape& rs = *a.row_shape();
  auto row_map = detail::permutation_index_map(rs, perm);
  SpaceShape new_rs = rs.permuted(perm);

  if (a.cols() == 1) {
    EMatrix out = EMatrix::Zero(a.rows(), 1);
    for (int r = 0; r < a.rows(); ++r) out(row_map[static_cast<size_t>(r)], 0) = a(r, 0);
    CMatrix res(std::move(out));
    res.set_shapes(new_rs, a.col_shape() ? *a.col_shape() : SpaceShape::scalar());
    return res;
  }

  require(a.col_shape().has_value() && a.col_shape()->dims_equal(rs),
          "shape mismatch: permute_factors expects an operator or a ket");
  EMatrix out = EMatrix::Zero(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      out(row_map[static_cast<size_t>(r)], row_map[static_cast<size_t>(c)]) = a(r, c);
  CMatrix res(std::move(out));
  res.set_shapes(new_rs, a.col_shape()->permuted(perm));
  return res;
}

// Partial trace keeping the listed factors (any order given; the result
// keeps them in ascending position order). Requires an operator.
inline CMatrix partial_trace(const CMatrix& a, const std::vector<int>& keep_positions) {
  const SpaceShape& s = a.operator_shape();
  std::vector<int> keep = keep_positions;
  std::sort(keep.begin(), keep.end());
  for (size_t i = 0; i + 1 < keep.size(); ++i)
    require(keep[i] != keep[i + 1], "shape mismatch: repeated factor in partial trace");
  std::vector<int> traced;
  {
    std::vector<bool> kept(static_cast<size_t>(s.factor_count()), false);
    for (int p : keep) {
      require(p >= 0 && p < s.factor_count(), "shape mismatch: partial trace factor index");
      kept[static_cast<size_t>(p)] = true;
    }
    for (int i = 0; i < s.factor_count(); ++i)
      if (!kept[static_cast<size_t>(i)]) traced.push_back(i);
  }

  SpaceShape keep_shape = s.subset(keep);
  SpaceShape trace_shape = s.subset(traced);
  long long dk = keep_shape.dim();
  long long dt = trace_shape.dim();
  auto strides = s.strides();

  auto full_index = [&](long long ki, long long ti) {
    auto km = keep_shape.multi_of(ki);
    auto tm = trace_shape.multi_of(ti);
    long long idx = 0;
    for (size_t i = 0; i < keep.size(); ++i)
      idx += static_cast<long long>(km[i]) * strides[static_cast<size_t>(keep[i])];
    for (size_t i = 0; i < traced.size(); ++i)
      idx += static_cast<long long>(tm[i]) * strides[static_cast<size_t>(traced[i])];
    return idx;
  };

  EMatrix out = EMatrix::Zero(dk, dk);
  for (long long r = 0; r < dk; ++r)
    for (long long c = 0; c < dk; ++c) {
      Complex acc = 0.0;
      for (long long t = 0; t < dt; ++t) acc += a(static_cast<int>(full_index(r, t)),
                                                  static_cast<int>(full_index(c, t)));
      out(r, c) = acc;
    }
  CMatrix res(std::move(out));
  res.set_shapes(keep_shape, keep_shape);
  return res;
}

// <b|_f a |b>_f : contracts one factor against a computational basis state,
// removing it from the shape. Works on operators.
inline CMatrix project_factor(const CMatrix& a, int factor, int basis_index) {
  const SpaceShape& s = a.operator_shape();
  require(factor >= 0 && factor < s.factor_count(), "shape mismatch: project_factor index");
  const Factor& f = s.factor(factor);
  require(basis_index >= 0 && basis_index < f.dim, "shape mismatch: project_factor basis index");

  std::vector<int> rest;
  for (int i = 0; i < s.factor_count(); ++i)
    if (i != factor) rest.push_back(i);
  SpaceShape rest_shape = s.subset(rest);
  auto strides = s.strides();
  long long dr = rest_shape.dim();

  auto full_index = [&](long long ri) {
    auto rm = rest_shape.multi_of(ri);
    long long idx = static_cast<long long>(basis_index) * strides[static_cast<size_t>(factor)];
    for (size_t i = 0; i < rest.size(); ++i)
      idx += static_cast<long long>(rm[i]) * strides[static_cast<size_t>(rest[i])];
    return idx;
  };

  EMatrix out = EMatrix::Zero(dr, dr);
  for (long long r = 0; r < dr; ++r)
    for (long long c = 0; c < dr; ++c)
      out(r, c) = a(static_cast<int>(full_index(r)), static_cast<int>(full_index(c)));
  CMatrix res(std::move(out));
  res.set_shapes(rest_shape, rest_shape);
  return res;
}

}  // namespace qte
