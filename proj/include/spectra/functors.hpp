#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "spectra/algebra.hpp"
#include "spectra/datum.hpp"

namespace spectra {

// F = coker Hom(-, g) for the presenting morphism g: A -> B.
struct FpFunctor {
  AddMorphism presentation;
};

// Hom(-, y), presented by the zero map 0 -> y.
FpFunctor representable(const CategoryDatum& d, PointIndex y);

std::size_t eval_dim(const CategoryDatum& d, const FpFunctor& f, PointIndex x);
bool in_sigma(const CategoryDatum& d, const FpFunctor& f, const PointSet& pts);

// Every basis morphism x -> y with x in pts, as one map A -> y.
AddMorphism add_approximation(const CategoryDatum& d, PointIndex y, const PointSet& pts);

// A map g: A -> y with A in add(pts) through which every morphism from pts
// to y factors, greedily pruned in basis order, and not split epi.
// nullopt when y is in pts or no such map exists.
std::optional<AddMorphism> exclusion_witness(const CategoryDatum& d, PointIndex y, const PointSet& pts);

struct RightAlmostSplitData {
  PointIndex target = 0;
  AddMorphism map;
  bool minimal = false;
};

// rad(x, m): all of hom(x, m) for x != m, the declared radical for x == m.
std::vector<Vector> radical_hom(const CategoryDatum& d, PointIndex x, PointIndex m);
RightAlmostSplitData right_almost_split(const CategoryDatum& d, PointIndex m);
// The simple functor at m: coker Hom(-, e) for the right almost split e.
FpFunctor simple_quotient(const CategoryDatum& d, PointIndex m);

// A finite-dimensional right module over the category algebra:
// M = ⊕ M(x), and a in hom(w, x) acts M(x) -> M(w).
class RightModule {
 public:
  RightModule(const CategoryDatum& d, std::vector<std::size_t> dims);

  const CategoryDatum& datum() const { return *d_; }
  std::size_t dim(PointIndex x) const { return dims_.at(x); }
  std::size_t total_dim() const;
  // Action of the i-th basis element of hom(w, x), a dim(w) x dim(x) matrix.
  const Matrix& action(PointIndex w, PointIndex x, std::size_t i) const;
  Matrix& action(PointIndex w, PointIndex x, std::size_t i);
  // Action of an arbitrary element h of hom(w, x).
  Matrix act(PointIndex w, PointIndex x, const Vector& h) const;

  bool annihilated_by(const BlockIdeal& j) const;  // M·J == 0
  bool generated_by(const BlockIdeal& j) const;    // M·J == M

  // Submodule generated by the given elements, as a basis of each M(x).
  std::vector<std::vector<Vector>> generated_submodule(
      const std::vector<std::pair<PointIndex, Vector>>& gens) const;
  RightModule submodule(const std::vector<std::vector<Vector>>& basis) const;
  RightModule quotient(const std::vector<std::vector<Vector>>& basis) const;

 private:
  const CategoryDatum* d_;
  std::vector<std::size_t> dims_;
  std::vector<std::vector<Matrix>> actions_;  // indexed [w * n + x][i]
};

RightModule module_of(const CategoryDatum& d, const FpFunctor& f);

// G in the left perpendicular of Σ(pts): G·J = G for J = idempotent_ideal(pts).
bool left_perp_member(const CategoryDatum& d, const FpFunctor& g, const PointSet& pts);
// F in (⊥Σ(pts))⊥: F·J = 0.
bool right_perp_member(const CategoryDatum& d, const FpFunctor& f, const PointSet& pts);

// Presentation with at most max_summands summands on each side and
// uniformly random blocks. Deterministic for a given generator state.
FpFunctor random_functor(const CategoryDatum& d, std::mt19937_64& rng, std::size_t max_summands = 2);
PointSet random_subset(std::size_t n, std::mt19937_64& rng);

// Representables, simples, and `random_count` random presentations.
std::vector<FpFunctor> functor_family(const CategoryDatum& d, std::size_t random_count, std::uint64_t seed);

}  // namespace spectra
