#pragma once

#include <vector>

#include "pnil/matrix.hpp"
#include "pnil/poly.hpp"

namespace pnil {

using PolyVec = std::vector<MultiPoly>;

/// Dense matrix with multivariate polynomial entries; the representation of
/// p-differentials and certificate candidates.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(FieldSpecPtr spec, int n, int rows, int cols);

  static PolyMatrix identity(const FieldSpecPtr& spec, int n, int m);
  static PolyMatrix from_scalar(const Matrix& m, int n);  // constants

  const FieldSpecPtr& spec() const { return spec_; }
  int nvars() const { return n_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const MultiPoly& at(int i, int j) const { return data_[i * cols_ + j]; }
  void set(int i, int j, const MultiPoly& f) { data_[i * cols_ + j] = f; }

  PolyMatrix operator*(const PolyMatrix& b) const;
  PolyMatrix operator+(const PolyMatrix& b) const;
  PolyMatrix operator-(const PolyMatrix& b) const;
  PolyVec apply(const PolyVec& v) const;
  PolyMatrix pow(int e) const;
  bool is_zero() const;
  bool operator==(const PolyMatrix& b) const;

  /// Entrywise evaluation; the point may live in an extension field.
  Matrix eval(const std::vector<FieldElem>& point) const;
  /// Constant parts (evaluation at 0).
  Matrix eval_zero() const;

  PolyMatrix submatrix(int r0, int c0, int nrows, int ncols) const;

 private:
  FieldSpecPtr spec_;
  int n_ = 0, rows_ = 0, cols_ = 0;
  std::vector<MultiPoly> data_;
};

PolyVec poly_vec_zero(const FieldSpecPtr& spec, int n, int len);

}  // namespace pnil
