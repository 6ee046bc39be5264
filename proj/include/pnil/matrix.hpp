#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pnil/field.hpp"

namespace pnil {

/// Dense matrix over F_{p^m}. Row-major; zero-row and zero-column shapes are
/// legal (they appear constantly as empty graded pieces).
class Matrix {
 public:
  Matrix() = default;
  Matrix(FieldSpecPtr spec, int rows, int cols);

  static Matrix identity(const FieldSpecPtr& spec, int n);
  static Matrix zero(const FieldSpecPtr& spec, int rows, int cols) {
    return Matrix(spec, rows, cols);
  }
  static Matrix from_columns(const FieldSpecPtr& spec, int rows,
                             const std::vector<std::vector<FieldElem>>& cols);

  const FieldSpecPtr& spec() const { return spec_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const FieldElem& at(int i, int j) const { return data_[i * cols_ + j]; }
  void set(int i, int j, const FieldElem& v) { data_[i * cols_ + j] = v; }

  std::vector<FieldElem> column(int j) const;
  std::vector<FieldElem> row(int i) const;
  void set_column(int j, const std::vector<FieldElem>& v);

  Matrix operator*(const Matrix& b) const;
  Matrix operator+(const Matrix& b) const;
  Matrix operator-(const Matrix& b) const;
  Matrix scaled(const FieldElem& c) const;
  std::vector<FieldElem> apply(const std::vector<FieldElem>& v) const;
  Matrix transpose() const;
  Matrix pow(int e) const;  // square matrices

  bool is_zero() const;
  bool operator==(const Matrix& b) const;
  bool operator!=(const Matrix& b) const { return !(*this == b); }

  Matrix hstack(const Matrix& b) const;
  Matrix submatrix(int r0, int c0, int nrows, int ncols) const;

  int rank() const;
  /// Columns spanning the right kernel, in reduced echelon form.
  Matrix kernel_basis() const;
  /// Reduced column-echelon basis of the column space (deterministic:
  /// pivots chosen topmost, scanned left to right, normalized to 1).
  Matrix image_basis() const;
  Matrix inverse() const;  // throws std::domain_error when singular

  /// One solution of A x = b, or nullopt when inconsistent.
  std::optional<std::vector<FieldElem>> solve(const std::vector<FieldElem>& b) const;

  std::string str() const;

 private:
  FieldSpecPtr spec_;
  int rows_ = 0, cols_ = 0;
  std::vector<FieldElem> data_;

  void check_same(const Matrix& b) const;
};

/// Reduced column echelon data: the echelon matrix plus, per column, its
/// pivot row. Supports deterministic membership tests and coordinates.
struct ColumnEchelon {
  Matrix basis;             // rows x k, k = rank, unit pivots, pivot rows strictly increasing per column order
  std::vector<int> pivots;  // pivot row of each basis column

  int dim() const { return basis.cols(); }
  /// Reduces v against the echelon columns; returns the residual and, when
  /// coords is non-null, the coefficients used per basis column.
  std::vector<FieldElem> reduce(std::vector<FieldElem> v,
                                std::vector<FieldElem>* coords = nullptr) const;
  bool contains(const std::vector<FieldElem>& v) const;
};

ColumnEchelon column_echelon(const Matrix& a);

/// Subquotient ker/im of a based vector space: a deterministic basis of
/// representatives together with projection of arbitrary kernel vectors onto
/// quotient coordinates. im must be contained in ker.
class Subquotient {
 public:
  Subquotient() = default;
  /// ker_basis, im_basis: columns spanning the two subspaces of F^ambient.
  Subquotient(const Matrix& ker_basis, const Matrix& im_basis);

  int dim() const { return reps_.dim(); }
  int ambient() const { return ambient_; }
  const Matrix& representatives() const { return reps_.basis; }

  /// Quotient coordinates of a vector lying in ker. Throws std::domain_error
  /// if the vector is not in ker + im span.
  std::vector<FieldElem> project(const std::vector<FieldElem>& v) const;

  /// Matrix of a linear map on quotients: columns are project(map * rep_j).
  Matrix induced_map(const Matrix& map, const Subquotient& target) const;

 private:
  int ambient_ = 0;
  ColumnEchelon im_;
  ColumnEchelon reps_;
  FieldSpecPtr spec_;
};

}  // namespace pnil
