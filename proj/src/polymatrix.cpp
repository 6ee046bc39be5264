#include "pnil/polymatrix.hpp"

#include <stdexcept>

namespace pnil {

PolyMatrix::PolyMatrix(FieldSpecPtr spec, int n, int rows, int cols)
    : spec_(std::move(spec)), n_(n), rows_(rows), cols_(cols) {
  if (!spec_) throw std::invalid_argument("PolyMatrix: null spec");
  data_.assign(static_cast<size_t>(rows) * cols, MultiPoly::zero(spec_, n));
}

PolyMatrix PolyMatrix::identity(const FieldSpecPtr& spec, int n, int m) {
  PolyMatrix out(spec, n, m, m);
  for (int i = 0; i < m; ++i)
    out.set(i, i, MultiPoly::constant(spec, n, FieldElem::one(spec)));
  return out;
}

PolyMatrix PolyMatrix::from_scalar(const Matrix& m, int n) {
  PolyMatrix out(m.spec(), n, m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!m.at(i, j).is_zero()) out.set(i, j, MultiPoly::constant(m.spec(), n, m.at(i, j)));
  return out;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& b) const {
  if (cols_ != b.rows_) throw std::domain_error("PolyMatrix: shape mismatch in product");
  PolyMatrix out(spec_, n_, rows_, b.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const MultiPoly& aik = at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j) {
        const MultiPoly& bkj = b.at(k, j);
        if (bkj.is_zero()) continue;
        out.set(i, j, out.at(i, j) + aik * bkj);
      }
    }
  return out;
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_)
    throw std::domain_error("PolyMatrix: shape mismatch in sum");
  PolyMatrix out(spec_, n_, rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + b.data_[i];
  return out;
}

PolyMatrix PolyMatrix::operator-(const PolyMatrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_)
    throw std::domain_error("PolyMatrix: shape mismatch in difference");
  PolyMatrix out(spec_, n_, rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - b.data_[i];
  return out;
}

PolyVec PolyMatrix::apply(const PolyVec& v) const {
  if (static_cast<int>(v.size()) != cols_)
    throw std::domain_error("PolyMatrix::apply: dimension mismatch");
  PolyVec out = poly_vec_zero(spec_, n_, rows_);
  for (int j = 0; j < cols_; ++j) {
    if (v[j].is_zero()) continue;
    for (int i = 0; i < rows_; ++i) {
      const MultiPoly& aij = at(i, j);
      if (!aij.is_zero()) out[i] = out[i] + aij * v[j];
    }
  }
  return out;
}

PolyMatrix PolyMatrix::pow(int e) const {
  if (rows_ != cols_) throw std::domain_error("PolyMatrix::pow: non-square");
  PolyMatrix r = identity(spec_, n_, rows_);
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

bool PolyMatrix::is_zero() const {
  for (const auto& f : data_)
    if (!f.is_zero()) return false;
  return true;
}

bool PolyMatrix::operator==(const PolyMatrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) return false;
  for (size_t i = 0; i < data_.size(); ++i)
    if (!(data_[i] == b.data_[i])) return false;
  return true;
}

Matrix PolyMatrix::eval(const std::vector<FieldElem>& point) const {
  FieldSpecPtr tgt = point.empty() ? spec_ : point[0].spec();
  Matrix out(tgt, rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (!at(i, j).is_zero()) out.set(i, j, at(i, j).eval(point));
  return out;
}

Matrix PolyMatrix::eval_zero() const {
  Matrix out(spec_, rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(i, j, at(i, j).constant_term());
  return out;
}

PolyMatrix PolyMatrix::submatrix(int r0, int c0, int nrows, int ncols) const {
  if (r0 < 0 || c0 < 0 || r0 + nrows > rows_ || c0 + ncols > cols_)
    throw std::invalid_argument("PolyMatrix::submatrix: out of range");
  PolyMatrix out(spec_, n_, nrows, ncols);
  for (int i = 0; i < nrows; ++i)
    for (int j = 0; j < ncols; ++j) out.set(i, j, at(r0 + i, c0 + j));
  return out;
}

PolyVec poly_vec_zero(const FieldSpecPtr& spec, int n, int len) {
  return PolyVec(static_cast<size_t>(len), MultiPoly::zero(spec, n));
}

}  // namespace pnil
