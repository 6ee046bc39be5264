#include "pnil/matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace pnil {

Matrix::Matrix(FieldSpecPtr spec, int rows, int cols)
    : spec_(std::move(spec)), rows_(rows), cols_(cols) {
  if (!spec_) throw std::invalid_argument("Matrix: null spec");
  if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative shape");
  data_.assign(static_cast<size_t>(rows) * cols, FieldElem::zero(spec_));
}

Matrix Matrix::identity(const FieldSpecPtr& spec, int n) {
  Matrix m(spec, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, FieldElem::one(spec));
  return m;
}

Matrix Matrix::from_columns(const FieldSpecPtr& spec, int rows,
                            const std::vector<std::vector<FieldElem>>& cols) {
  Matrix m(spec, rows, static_cast<int>(cols.size()));
  for (int j = 0; j < m.cols_; ++j) {
    if (static_cast<int>(cols[j].size()) != rows)
      throw std::invalid_argument("Matrix::from_columns: column length mismatch");
    for (int i = 0; i < rows; ++i) m.set(i, j, cols[j][i]);
  }
  return m;
}

std::vector<FieldElem> Matrix::column(int j) const {
  std::vector<FieldElem> v;
  v.reserve(rows_);
  for (int i = 0; i < rows_; ++i) v.push_back(at(i, j));
  return v;
}

std::vector<FieldElem> Matrix::row(int i) const {
  std::vector<FieldElem> v;
  v.reserve(cols_);
  for (int j = 0; j < cols_; ++j) v.push_back(at(i, j));
  return v;
}

void Matrix::set_column(int j, const std::vector<FieldElem>& v) {
  if (static_cast<int>(v.size()) != rows_)
    throw std::invalid_argument("Matrix::set_column: length mismatch");
  for (int i = 0; i < rows_; ++i) set(i, j, v[i]);
}

void Matrix::check_same(const Matrix& b) const {
  if (!spec_ || !b.spec_) throw std::invalid_argument("Matrix: uninitialized");
  if (spec_ != b.spec_ && !(*spec_ == *b.spec_))
    throw std::domain_error("Matrix: mixed field specs");
}

Matrix Matrix::operator*(const Matrix& b) const {
  check_same(b);
  if (cols_ != b.rows_) throw std::domain_error("Matrix: shape mismatch in product");
  Matrix out(spec_, rows_, b.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const FieldElem& aik = at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j) {
        const FieldElem& bkj = b.at(k, j);
        if (bkj.is_zero()) continue;
        out.set(i, j, out.at(i, j) + aik * bkj);
      }
    }
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& b) const {
  check_same(b);
  if (rows_ != b.rows_ || cols_ != b.cols_) throw std::domain_error("Matrix: shape mismatch in sum");
  Matrix out(spec_, rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + b.data_[i];
  return out;
}

Matrix Matrix::operator-(const Matrix& b) const {
  check_same(b);
  if (rows_ != b.rows_ || cols_ != b.cols_) throw std::domain_error("Matrix: shape mismatch in difference");
  Matrix out(spec_, rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - b.data_[i];
  return out;
}

Matrix Matrix::scaled(const FieldElem& c) const {
  Matrix out(spec_, rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * c;
  return out;
}

std::vector<FieldElem> Matrix::apply(const std::vector<FieldElem>& v) const {
  if (static_cast<int>(v.size()) != cols_)
    throw std::domain_error("Matrix::apply: dimension mismatch");
  std::vector<FieldElem> out(rows_, FieldElem::zero(spec_));
  for (int j = 0; j < cols_; ++j) {
    if (v[j].is_zero()) continue;
    for (int i = 0; i < rows_; ++i) {
      const FieldElem& aij = at(i, j);
      if (!aij.is_zero()) out[i] = out[i] + aij * v[j];
    }
  }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(spec_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(j, i, at(i, j));
  return out;
}

Matrix Matrix::pow(int e) const {
  if (rows_ != cols_) throw std::domain_error("Matrix::pow: non-square");
  if (e < 0) throw std::invalid_argument("Matrix::pow: negative exponent");
  Matrix r = identity(spec_, rows_);
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

bool Matrix::operator==(const Matrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) return false;
  for (size_t i = 0; i < data_.size(); ++i)
    if (!(data_[i] == b.data_[i])) return false;
  return true;
}

Matrix Matrix::hstack(const Matrix& b) const {
  check_same(b);
  if (rows_ != b.rows_) throw std::domain_error("Matrix::hstack: row mismatch");
  Matrix out(spec_, rows_, cols_ + b.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) out.set(i, j, at(i, j));
    for (int j = 0; j < b.cols_; ++j) out.set(i, cols_ + j, b.at(i, j));
  }
  return out;
}

Matrix Matrix::submatrix(int r0, int c0, int nrows, int ncols) const {
  if (r0 < 0 || c0 < 0 || r0 + nrows > rows_ || c0 + ncols > cols_)
    throw std::invalid_argument("Matrix::submatrix: out of range");
  Matrix out(spec_, nrows, ncols);
  for (int i = 0; i < nrows; ++i)
    for (int j = 0; j < ncols; ++j) out.set(i, j, at(r0 + i, c0 + j));
  return out;
}

namespace {

// Shared column-elimination core. Processes columns left to right; each new
// pivot is the topmost nonzero row not yet used. Produces reduced echelon
// columns (pivot entries 1, zero elsewhere in the pivot row).
struct Elim {
  Matrix work;                 // rows x cols, mutated
  std::vector<int> pivot_row;  // per echelon column
  std::vector<int> pivot_col;  // original column index of each pivot column
  Matrix record;               // optional companion matrix receiving the same column ops

  explicit Elim(const Matrix& a, bool with_record = false)
      : work(a), record(with_record ? Matrix::identity(a.spec(), a.cols()) : Matrix()) {}

  void run() {
    const int rows = work.rows(), cols = work.cols();
    bool with_record = record.rows() > 0;
    int next = 0;  // next echelon slot (also count of pivots found)
    for (int j = 0; j < cols; ++j) {
      // reduce column j by existing pivots
      for (size_t t = 0; t < pivot_row.size(); ++t) {
        const FieldElem& c = work.at(pivot_row[t], j);
        if (c.is_zero()) continue;
        FieldElem f = c;  // pivot entries are 1
        for (int i = 0; i < rows; ++i)
          work.set(i, j, work.at(i, j) - work.at(i, static_cast<int>(t)) * f);
        if (with_record)
          for (int i = 0; i < record.rows(); ++i)
            record.set(i, j, record.at(i, j) - record.at(i, static_cast<int>(t)) * f);
      }
      int pr = -1;
      for (int i = 0; i < rows; ++i)
        if (!work.at(i, j).is_zero()) {
          pr = i;
          break;
        }
      if (pr < 0) continue;
      // normalize and move into slot `next`
      FieldElem inv = work.at(pr, j).inv();
      for (int i = 0; i < rows; ++i) work.set(i, j, work.at(i, j) * inv);
      if (with_record)
        for (int i = 0; i < record.rows(); ++i) record.set(i, j, record.at(i, j) * inv);
      if (j != next) {
        for (int i = 0; i < rows; ++i) {
          FieldElem tmp = work.at(i, next);
          work.set(i, next, work.at(i, j));
          work.set(i, j, tmp);
        }
        if (with_record)
          for (int i = 0; i < record.rows(); ++i) {
            FieldElem tmp = record.at(i, next);
            record.set(i, next, record.at(i, j));
            record.set(i, j, tmp);
          }
      }
      // back-substitute into earlier pivot columns so the echelon is reduced
      for (size_t t = 0; t < pivot_row.size(); ++t) {
        const FieldElem& c = work.at(pr, static_cast<int>(t));
        if (c.is_zero()) continue;
        FieldElem f = c;
        for (int i = 0; i < rows; ++i)
          work.set(i, static_cast<int>(t), work.at(i, static_cast<int>(t)) - work.at(i, next) * f);
        if (with_record)
          for (int i = 0; i < record.rows(); ++i)
            record.set(i, static_cast<int>(t), record.at(i, static_cast<int>(t)) - record.at(i, next) * f);
      }
      pivot_row.push_back(pr);
      pivot_col.push_back(j);
      ++next;
    }
  }
};

}  // namespace

int Matrix::rank() const {
  Elim e(*this);
  e.run();
  return static_cast<int>(e.pivot_row.size());
}

Matrix Matrix::image_basis() const {
  Elim e(*this);
  e.run();
  int r = static_cast<int>(e.pivot_row.size());
  return e.work.submatrix(0, 0, rows_, r);
}

Matrix Matrix::kernel_basis() const {
  Elim e(*this, /*with_record=*/true);
  e.run();
  int r = static_cast<int>(e.pivot_row.size());
  // columns r.. of work are zero; the matching record columns span the kernel
  Matrix ker = e.record.submatrix(0, r, cols_, cols_ - r);
  // tidy to reduced echelon for determinism
  Elim tidy(ker);
  tidy.run();
  return tidy.work.submatrix(0, 0, cols_, static_cast<int>(tidy.pivot_row.size()));
}

Matrix Matrix::inverse() const {
  if (rows_ != cols_) throw std::domain_error("Matrix::inverse: non-square");
  Elim e(*this, /*with_record=*/true);
  e.run();
  if (static_cast<int>(e.pivot_row.size()) != rows_)
    throw std::domain_error("Matrix::inverse: singular matrix");
  // work = this * record is reduced echelon with unit pivots; permute columns
  // so work becomes the identity, then record is the inverse.
  Matrix inv(spec_, rows_, cols_);
  for (int t = 0; t < rows_; ++t) {
    int pr = e.pivot_row[t];
    for (int i = 0; i < rows_; ++i) inv.set(i, pr, e.record.at(i, t));
  }
  return inv;
}

std::optional<std::vector<FieldElem>> Matrix::solve(const std::vector<FieldElem>& b) const {
  if (static_cast<int>(b.size()) != rows_) throw std::domain_error("Matrix::solve: length mismatch");
  Elim e(*this, /*with_record=*/true);
  e.run();
  std::vector<FieldElem> residual = b;
  std::vector<FieldElem> coords(e.pivot_row.size(), FieldElem::zero(spec_));
  for (size_t t = 0; t < e.pivot_row.size(); ++t) {
    const FieldElem c = residual[e.pivot_row[t]];  // copy: residual mutates below
    if (c.is_zero()) continue;
    coords[t] = c;
    for (int i = 0; i < rows_; ++i)
      residual[i] = residual[i] - e.work.at(i, static_cast<int>(t)) * c;
  }
  for (const auto& x : residual)
    if (!x.is_zero()) return std::nullopt;
  // x = record[:, 0..r) * coords
  std::vector<FieldElem> x(cols_, FieldElem::zero(spec_));
  for (size_t t = 0; t < coords.size(); ++t) {
    if (coords[t].is_zero()) continue;
    for (int i = 0; i < cols_; ++i)
      x[i] = x[i] + e.record.at(i, static_cast<int>(t)) * coords[t];
  }
  return x;
}

std::string Matrix::str() const {
  std::ostringstream os;
  for (int i = 0; i < rows_; ++i) {
    os << (i == 0 ? "[" : " ");
    for (int j = 0; j < cols_; ++j) os << (j ? " " : "[") << at(i, j).str();
    os << "]" << (i + 1 == rows_ ? "]" : "\n");
  }
  if (rows_ == 0) os << "[[]]";
  return os.str();
}

ColumnEchelon column_echelon(const Matrix& a) {
  Elim e(a);
  e.run();
  ColumnEchelon out;
  out.basis = e.work.submatrix(0, 0, a.rows(), static_cast<int>(e.pivot_row.size()));
  out.pivots = e.pivot_row;
  return out;
}

std::vector<FieldElem> ColumnEchelon::reduce(std::vector<FieldElem> v,
                                             std::vector<FieldElem>* coords) const {
  if (coords) coords->assign(pivots.size(), FieldElem::zero(basis.spec()));
  for (size_t t = 0; t < pivots.size(); ++t) {
    const FieldElem c = v[pivots[t]];  // copy: v mutates below
    if (c.is_zero()) continue;
    if (coords) (*coords)[t] = c;
    for (int i = 0; i < basis.rows(); ++i)
      v[i] = v[i] - basis.at(i, static_cast<int>(t)) * c;
  }
  return v;
}

bool ColumnEchelon::contains(const std::vector<FieldElem>& v) const {
  auto r = reduce(v);
  for (const auto& x : r)
    if (!x.is_zero()) return false;
  return true;
}

Subquotient::Subquotient(const Matrix& ker_basis, const Matrix& im_basis) {
  ambient_ = ker_basis.rows();
  spec_ = ker_basis.spec();
  if (im_basis.rows() != ambient_) throw std::domain_error("Subquotient: ambient mismatch");
  im_ = column_echelon(im_basis);
  // sanity: im must sit inside ker
  ColumnEchelon ker = column_echelon(ker_basis);
  for (int j = 0; j < im_.basis.cols(); ++j)
    if (!ker.contains(im_.basis.column(j)))
      throw std::domain_error("Subquotient: image not contained in kernel");
  // reduce kernel columns by the image, then echelonize the residuals
  Matrix resid(spec_, ambient_, ker.basis.cols());
  for (int j = 0; j < ker.basis.cols(); ++j)
    resid.set_column(j, im_.reduce(ker.basis.column(j)));
  reps_ = column_echelon(resid);
}

std::vector<FieldElem> Subquotient::project(const std::vector<FieldElem>& v) const {
  if (static_cast<int>(v.size()) != ambient_)
    throw std::domain_error("Subquotient::project: dimension mismatch");
  std::vector<FieldElem> after_im = im_.reduce(v);
  std::vector<FieldElem> coords;
  std::vector<FieldElem> residual = reps_.reduce(after_im, &coords);
  for (const auto& x : residual)
    if (!x.is_zero())
      throw std::domain_error("Subquotient::project: vector not in kernel + image span");
  return coords;
}

Matrix Subquotient::induced_map(const Matrix& map, const Subquotient& target) const {
  Matrix out(map.spec(), target.dim(), dim());
  for (int j = 0; j < dim(); ++j) {
    auto img = map.apply(reps_.basis.column(j));
    out.set_column(j, target.project(img));
  }
  return out;
}

}  // namespace pnil
