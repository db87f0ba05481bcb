#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spectra/matrix.hpp"

namespace spectra {

using PointIndex = std::size_t;
using PointSet = boost::dynamic_bitset<>;

struct PointInfo {
  std::string id;
  bool locally_free = true;  // false: not locally free on the punctured spectrum
};

// A finite Hom-finite Krull-Schmidt category given by structure constants.
// compose(g, f) is "g after f" for f: x -> y, g: y -> z.
class CategoryDatum {
 public:
  CategoryDatum() = default;
  CategoryDatum(Field field, std::vector<PointInfo> points);

  const Field& field() const { return field_; }
  std::size_t point_count() const { return points_.size(); }
  const PointInfo& point(PointIndex x) const { return points_.at(x); }
  const std::vector<PointInfo>& points() const { return points_; }
  std::optional<PointIndex> find_point(const std::string& id) const;
  PointIndex point_index(const std::string& id) const;  // throws InputError
  PointSet empty_set() const { return PointSet(points_.size()); }
  PointSet full_set() const { return ~PointSet(points_.size()); }
  PointSet parse_set(const std::vector<std::string>& ids) const;
  std::vector<std::string> names(const PointSet& s) const;

  // Hom spaces. Basis names must be unique across the whole datum.
  void set_hom(PointIndex x, PointIndex y, std::vector<std::string> basis);
  std::size_t hom_dim(PointIndex x, PointIndex y) const { return dims_[x * n() + y]; }
  const std::vector<std::string>& hom_basis(PointIndex x, PointIndex y) const { return basis_[x * n() + y]; }

  struct BasisRef {
    PointIndex src, dst;
    std::size_t index;
  };
  std::optional<BasisRef> find_basis(const std::string& name) const;

  // Coefficients of g_j o f_i (f_i in hom(x,y), g_j in hom(y,z)) in hom(x,z).
  void set_compose(PointIndex x, PointIndex y, PointIndex z, std::size_t g_index, std::size_t f_index,
                   const Vector& result);
  Vector compose_basis(PointIndex x, PointIndex y, PointIndex z, std::size_t g_index, std::size_t f_index) const;
  // g o f for arbitrary elements g in hom(y,z), f in hom(x,y).
  Vector compose(PointIndex x, PointIndex y, PointIndex z, const Vector& g, const Vector& f) const;

  void set_identity(PointIndex x, Vector element);
  const Vector& identity(PointIndex x) const { return identities_.at(x); }
  void set_radical(PointIndex x, std::vector<Vector> basis);
  const std::vector<Vector>& radical(PointIndex x) const { return radicals_.at(x); }

  Vector basis_vector(PointIndex x, PointIndex y, std::size_t i) const;
  Vector zero(PointIndex x, PointIndex y) const { return zero_vector(field_, hom_dim(x, y)); }

  // Full subcategory on the given points, in their original order.
  CategoryDatum restrict_to(const std::vector<PointIndex>& keep) const;

 private:
  std::size_t n() const { return points_.size(); }
  std::size_t triple(PointIndex x, PointIndex y, PointIndex z) const { return (x * n() + y) * n() + z; }
  std::vector<Scalar>& tensor(PointIndex x, PointIndex y, PointIndex z);

  Field field_;
  std::vector<PointInfo> points_;
  std::vector<std::size_t> dims_;
  std::vector<std::vector<std::string>> basis_;
  std::map<std::string, BasisRef> basis_index_;
  // Per triple, laid out as [(j * dim(x,y) + i) * dim(x,z) + k].
  std::vector<std::vector<Scalar>> compose_;
  std::vector<Vector> identities_;
  std::vector<std::vector<Vector>> radicals_;
};

// A formal finite direct sum of points, as an ordered summand list.
struct AddObject {
  std::vector<PointIndex> summands;

  std::size_t size() const { return summands.size(); }
  std::map<PointIndex, std::size_t> multiplicities() const;
  static AddObject from_multiplicities(const std::map<PointIndex, std::size_t>& mult);
};

// blocks[t][s] is an element of hom(source.summands[s], target.summands[t]).
struct AddMorphism {
  AddObject source;
  AddObject target;
  std::vector<std::vector<Vector>> blocks;

  static AddMorphism zero(const CategoryDatum& d, AddObject source, AddObject target);
  static AddMorphism identity(const CategoryDatum& d, PointIndex y);
  void check(const CategoryDatum& d) const;  // throws InputError on shape mismatch
};

// g o h for h: A -> B, g: B -> C.
AddMorphism compose(const CategoryDatum& d, const AddMorphism& g, const AddMorphism& h);

struct Violation {
  std::string kind;  // associativity, identity, radical_not_ideal, ...
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> notes;
  bool valid() const { return violations.empty(); }
};

ValidationReport validate_datum(const CategoryDatum& d);

// Matrix of Hom(z, g): Hom(z, A) -> Hom(z, B) in the fixed hom bases.
Matrix hom_matrix(const CategoryDatum& d, PointIndex z, const AddMorphism& g);
bool is_split_epi(const CategoryDatum& d, const AddMorphism& g);

}  // namespace spectra
