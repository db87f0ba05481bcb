#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "spectra/field.hpp"

namespace spectra {

using Vector = std::vector<Scalar>;

// Dense row-major matrix over an exact field.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Field field, std::size_t rows, std::size_t cols);

  static Matrix identity(Field field, std::size_t n);
  // Builds a matrix whose columns are the given vectors (each of length rows).
  static Matrix from_columns(Field field, std::size_t rows, std::span<const Vector> columns);

  const Field& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vector column(std::size_t c) const;
  Vector row(std::size_t r) const;
  bool is_zero() const;

  Matrix transpose() const;
  Matrix operator*(const Matrix& rhs) const;
  Vector apply(std::span<const Scalar> v) const;

  // Horizontal concatenation [*this | rhs]; row counts must agree.
  Matrix hconcat(const Matrix& rhs) const;

  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  Field field_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

struct EchelonForm {
  Matrix reduced;                   // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
};

EchelonForm rref(Matrix m);
std::size_t rank(const Matrix& m);
// Interpreted as a map into a space of dimension rows().
bool is_surjective(const Matrix& m);
// Some x with a*x == b, free variables set to zero; nullopt when insolvable.
// Throws InputError when a.rows() != b.rows().
std::optional<Matrix> solve_right(const Matrix& a, const Matrix& b);
// Columns form a basis of the right null space, one per free column.
Matrix kernel(const Matrix& m);

// Incrementally maintained echelon basis of a subspace of F^n.
class SubspaceBuilder {
 public:
  SubspaceBuilder(Field field, std::size_t ambient_dim);

  std::size_t ambient_dim() const { return n_; }
  std::size_t dim() const { return rows_.size(); }

  // Residue of v after elimination against the current basis.
  Vector reduce(std::span<const Scalar> v) const;
  bool contains(std::span<const Scalar> v) const;
  // Adds v; returns false when v was already in the span.
  bool insert(std::span<const Scalar> v);

  // Reduced row echelon basis (sorted by pivot).
  std::vector<Vector> basis() const;

 private:
  Field field_;
  std::size_t n_;
  std::vector<Vector> rows_;  // each normalized with 1 at pivot
  std::vector<std::size_t> pivots_;
};

Vector zero_vector(const Field& f, std::size_t n);
bool is_zero(std::span<const Scalar> v);

}  // namespace spectra
