#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spectra/datum.hpp"

namespace spectra {

// A finite set with a closure operator. The Kuratowski axioms are checked
// by kuratowski_check, never assumed.
class ClosureSpace {
 public:
  virtual ~ClosureSpace() = default;
  virtual std::size_t size() const = 0;
  virtual std::string name(std::size_t i) const = 0;
  virtual PointSet closure(const PointSet& s) const = 0;

  PointSet empty_set() const { return PointSet(size()); }
  PointSet full_set() const { return ~PointSet(size()); }
  std::vector<std::string> names(const PointSet& s) const;
};

// Table-driven space: either the closure of every subset, or singleton
// closures extended to finite unions.
class TableSpace : public ClosureSpace {
 public:
  static constexpr std::size_t kMaxTablePoints = 12;

  TableSpace(std::vector<std::string> points, std::vector<PointSet> subset_closures);  // indexed by bitmask
  static TableSpace union_generated(std::vector<std::string> points, std::vector<PointSet> singleton_closures);

  std::size_t size() const override { return points_.size(); }
  std::string name(std::size_t i) const override { return points_.at(i); }
  PointSet closure(const PointSet& s) const override;
  bool is_union_generated() const { return union_generated_; }
  std::optional<std::size_t> find(const std::string& id) const;

 private:
  TableSpace() = default;
  std::vector<std::string> points_;
  std::vector<PointSet> table_;  // by bitmask, or by point when union-generated
  bool union_generated_ = false;
};

struct ClosureResult {
  PointSet closure;
  std::map<PointIndex, AddMorphism> witnesses;  // one per excluded point
};

// γ∘Σ(pts) computed by the idempotent-ideal route and the exclusion-witness
// route; throws InconsistencyError when they disagree.
ClosureResult closure_with_witnesses(const CategoryDatum& d, const PointSet& pts);
PointSet closure(const CategoryDatum& d, const PointSet& pts);
PointSet closure_by_ideal(const CategoryDatum& d, const PointSet& pts);
PointSet closure_by_witness(const CategoryDatum& d, const PointSet& pts);
bool is_closed(const CategoryDatum& d, const PointSet& pts);

// Datum-backed closure space (caches closures by subset).
class DatumSpace : public ClosureSpace {
 public:
  explicit DatumSpace(const CategoryDatum& d) : d_(&d) {}
  std::size_t size() const override { return d_->point_count(); }
  std::string name(std::size_t i) const override { return d_->point(i).id; }
  PointSet closure(const PointSet& s) const override;
  const CategoryDatum& datum() const { return *d_; }

 private:
  const CategoryDatum* d_;
  mutable std::map<PointSet, PointSet> cache_;
};

PointSet isolated_points(const ClosureSpace& space);
// Isolated points of the subspace `sub` under the induced closure.
PointSet isolated_in(const ClosureSpace& space, const PointSet& sub);

struct CBReport {
  std::vector<std::string> points;
  std::vector<std::optional<std::size_t>> ranks;  // nullopt = infinite
  std::optional<std::size_t> space_rank;          // nullopt = infinite
  std::vector<PointSet> derivative_chain;         // T(0) ⊋ T(1) ⊋ ...
};

CBReport cb_rank(const ClosureSpace& space);

struct AxiomViolation {
  std::string axiom;  // empty, extensive, union, idempotent, sigma_agreement
  PointSet x, y;
};

struct PropertyReport {
  bool passed = true;
  std::size_t checked = 0;
  std::vector<AxiomViolation> violations;  // first violation only for kuratowski
};

// Exhaustive over all subset pairs when `exhaustive`, else `samples`
// random pairs drawn from `seed`.
PropertyReport kuratowski_check(const ClosureSpace& space, std::size_t samples, std::uint64_t seed,
                                bool exhaustive = false);
// Adds Σ-membership agreement between pts and closure(pts) on sampled functors.
PropertyReport kuratowski_check(const CategoryDatum& d, std::size_t samples, std::uint64_t seed,
                                bool exhaustive = false);
PropertyReport t1_check(const ClosureSpace& space);

struct SerreReport {
  bool passed = true;
  std::size_t subsets = 0;
  std::size_t classes = 0;
  std::vector<std::string> failures;
};

SerreReport serre_correspondence_check(const CategoryDatum& d);
// Sampling mode: distinct random subsets, any point count.
SerreReport serre_correspondence_check(const CategoryDatum& d, std::size_t samples, std::uint64_t seed);

struct PerpReport {
  bool passed = true;
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  std::vector<std::string> failures;
};

// in_sigma ⟺ right_perp_member over every subset (or `samples` random
// subsets when the datum has more than `exhaustive_limit` points) and the
// functor family.
PerpReport perp_check(const CategoryDatum& d, std::size_t random_functors, std::uint64_t seed,
                      std::size_t samples = 0, std::size_t exhaustive_limit = 5);

struct FinitenessResult {
  bool contravariantly_finite = false;
  bool closed = false;
};

FinitenessResult contravariant_finiteness_check(const CategoryDatum& d, const PointSet& pts);

// Enumerate the subset with bit i set iff bit i of mask is set.
PointSet subset_from_mask(std::size_t n, std::uint64_t mask);

}  // namespace spectra
