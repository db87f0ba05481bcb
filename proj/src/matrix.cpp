#include "spectra/matrix.hpp"

#include <algorithm>
#include <string>

#include "spectra/error.hpp"

namespace spectra {

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}

Matrix Matrix::identity(Field field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
  return m;
}

Matrix Matrix::from_columns(Field field, std::size_t rows, std::span<const Vector> columns) {
  Matrix m(field, rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw InputError("column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

Vector Matrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Vector Matrix::row(std::size_t r) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
}

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw InputError("matrix product dimension mismatch");
  Matrix out(field_, rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) {
        const Scalar b = rhs(k, j);
        if (b.is_zero()) continue;
        out(i, j) = field_.add(out(i, j), field_.mul(a, b));
      }
    }
  return out;
}

Vector Matrix::apply(std::span<const Scalar> v) const {
  if (v.size() != cols_) throw InputError("matrix-vector dimension mismatch");
  Vector out(rows_, field_.zero());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar a = (*this)(i, k);
      if (a.is_zero() || v[k].is_zero()) continue;
      out[i] = field_.add(out[i], field_.mul(a, v[k]));
    }
  return out;
}

Matrix Matrix::hconcat(const Matrix& rhs) const {
  if (rows_ != rhs.rows_) throw InputError("hconcat row mismatch");
  Matrix out(field_, rows_, cols_ + rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c);
    for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, cols_ + c) = rhs(r, c);
  }
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

EchelonForm rref(Matrix m) {
  const Field& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m(sel, col).is_zero()) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(sel, c), m(row, c));
    const Scalar inv = f.inv(m(row, col));
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) = f.mul(m(row, c), inv);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      const Scalar factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c)
        if (!m(row, c).is_zero()) m(r, c) = f.sub(m(r, c), f.mul(factor, m(row, c)));
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

bool is_surjective(const Matrix& m) { return rank(m) == m.rows(); }

std::optional<Matrix> solve_right(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows())
    throw InputError("solve_right: a has " + std::to_string(a.rows()) + " rows, b has " +
                     std::to_string(b.rows()));
  const Field& f = a.field();
  const std::size_t n = a.cols();
  auto [red, pivots] = rref(a.hconcat(b));
  Matrix x(f, n, b.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] >= n) return std::nullopt;  // pivot in the augmented block
    for (std::size_t c = 0; c < b.cols(); ++c) x(pivots[r], c) = red(r, n + c);
  }
  return x;
}

Matrix kernel(const Matrix& m) {
  const Field& f = m.field();
  auto [red, pivots] = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols(), f.zero());
    v[free] = f.one();
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = f.neg(red(r, free));
    basis.push_back(std::move(v));
  }
  return Matrix::from_columns(f, m.cols(), basis);
}

SubspaceBuilder::SubspaceBuilder(Field field, std::size_t ambient_dim) : field_(field), n_(ambient_dim) {}

Vector SubspaceBuilder::reduce(std::span<const Scalar> v) const {
  if (v.size() != n_) throw InputError("subspace ambient dimension mismatch");
  Vector r(v.begin(), v.end());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Scalar c = r[pivots_[i]];
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j < n_; ++j)
      if (!rows_[i][j].is_zero()) r[j] = field_.sub(r[j], field_.mul(c, rows_[i][j]));
  }
  return r;
}

bool SubspaceBuilder::contains(std::span<const Scalar> v) const { return is_zero(reduce(v)); }

bool SubspaceBuilder::insert(std::span<const Scalar> v) {
  Vector r = reduce(v);
  auto it = std::find_if(r.begin(), r.end(), [](const Scalar& s) { return !s.is_zero(); });
  if (it == r.end()) return false;
  const std::size_t piv = static_cast<std::size_t>(it - r.begin());
  const Scalar inv = field_.inv(r[piv]);
  for (auto& s : r) s = field_.mul(s, inv);
  // keep the basis fully reduced
  for (auto& row : rows_) {
    const Scalar c = row[piv];
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j < n_; ++j)
      if (!r[j].is_zero()) row[j] = field_.sub(row[j], field_.mul(c, r[j]));
  }
  rows_.push_back(std::move(r));
  pivots_.push_back(piv);
  return true;
}

std::vector<Vector> SubspaceBuilder::basis() const {
  std::vector<std::size_t> order(rows_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pivots_[a] < pivots_[b]; });
  std::vector<Vector> out;
  out.reserve(order.size());
  for (auto i : order) out.push_back(rows_[i]);
  return out;
}

Vector zero_vector(const Field& f, std::size_t n) { return Vector(n, f.zero()); }

bool is_zero(std::span<const Scalar> v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

}  // namespace spectra
