#pragma once

#include <vector>

#include "spectra/datum.hpp"

namespace spectra {

// The category algebra: direct sum of all hom spaces, product u·v = u o v
// when composable and zero otherwise. Block (x,y) holds hom(x,y).
class CategoryAlgebra {
 public:
  explicit CategoryAlgebra(const CategoryDatum& d);

  const CategoryDatum& datum() const { return *d_; }
  std::size_t dim() const { return dim_; }
  std::size_t offset(PointIndex x, PointIndex y) const { return offsets_[x * d_->point_count() + y]; }

  Vector unit() const;                       // sum of the e_x
  Vector idempotent(PointIndex x) const;     // e_x = id_x
  Vector embed(PointIndex x, PointIndex y, const Vector& h) const;
  Vector block(const Vector& u, PointIndex x, PointIndex y) const;
  Vector basis_element(std::size_t k) const;
  Vector multiply(const Vector& u, const Vector& v) const;

 private:
  const CategoryDatum* d_;
  std::size_t dim_ = 0;
  std::vector<std::size_t> offsets_;
};

CategoryAlgebra build_algebra(const CategoryDatum& d);

// A two-sided ideal of the category algebra stored blockwise:
// blocks[x * n + y] spans J ∩ hom(x,y).
struct BlockIdeal {
  std::size_t n = 0;
  std::vector<std::vector<Vector>> blocks;

  const std::vector<Vector>& at(PointIndex x, PointIndex y) const { return blocks[x * n + y]; }
  std::size_t dim() const;
  bool contains_identity(const CategoryDatum& d, PointIndex y) const;
  std::vector<Vector> global_basis(const CategoryAlgebra& alg) const;
  friend bool operator==(const BlockIdeal&, const BlockIdeal&) = default;
};

// The ideal generated by {e_x : x in pts}, closed under left and right
// multiplication by basis elements until the dimension stabilizes.
BlockIdeal idempotent_ideal(const CategoryDatum& d, const PointSet& pts);
std::vector<Vector> idempotent_ideal(const CategoryAlgebra& alg, const PointSet& pts);

}  // namespace spectra
