#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <memory>
#include <string>
#include <vector>

#include "spectra/datum.hpp"
#include "spectra/tower.hpp"

namespace spectra {

// A ring-level model of a stable module category: module homomorphisms as
// coordinate vectors, together with the maps that factor through a free
// module. `reversed` flips every basis enumeration order.
class StableCategoryOracle {
 public:
  virtual ~StableCategoryOracle() = default;
  virtual Field field() const = 0;
  virtual std::vector<PointInfo> points() const = 0;
  virtual std::size_t ambient_dim(PointIndex x, PointIndex y) const = 0;
  virtual std::vector<Vector> hom_basis(PointIndex x, PointIndex y, bool reversed) const = 0;
  virtual std::vector<Vector> free_factoring(PointIndex x, PointIndex y, bool reversed) const = 0;
  // g o f for f: x -> y, g: y -> z, in ambient coordinates.
  virtual Vector compose(PointIndex x, PointIndex y, PointIndex z, const Vector& g, const Vector& f) const = 0;
  virtual Vector identity(PointIndex x) const = 0;
};

struct StablePair {
  std::vector<Vector> basis;      // representatives of the stable basis
  std::vector<Vector> free_span;  // independent spanning set of the free-factoring maps
  std::size_t hom_dim = 0;        // rank of the module Hom
  std::size_t ambient = 0;
};

struct StableBuild {
  CategoryDatum datum;
  std::vector<StablePair> pairs;  // indexed x * n + y
  std::map<std::string, Vector> representatives;

  const StablePair& pair(PointIndex x, PointIndex y) const { return pairs[x * datum.point_count() + y]; }
  // Stable coordinates of a module map, nullopt if it is not a homomorphism.
  std::optional<Vector> reduce(PointIndex x, PointIndex y, const Vector& map) const;
};

std::string basis_name(const std::string& x, const std::string& y, std::size_t i);

StableBuild build_stable_datum(const StableCategoryOracle& oracle, bool reversed = false);

// Radical of a local endomorphism algebra End(x) with residue field k, as a
// reduced echelon basis. Throws InconsistencyError if End(x) is not local.
std::vector<Vector> local_radical(const CategoryDatum& d, PointIndex x);

struct ArtinianRingSpec {
  std::size_t n = 1;  // the ring k[x]/(x^(n+1))
  FieldSpec field{};
};

// Cyclic modules k[x]/(x^i), i = 1..n; maps M_i -> M_j by the image of 1.
class TruncatedPolynomialOracle : public StableCategoryOracle {
 public:
  explicit TruncatedPolynomialOracle(ArtinianRingSpec spec);
  Field field() const override { return field_; }
  std::vector<PointInfo> points() const override;
  std::size_t ambient_dim(PointIndex x, PointIndex y) const override;
  std::vector<Vector> hom_basis(PointIndex x, PointIndex y, bool reversed) const override;
  std::vector<Vector> free_factoring(PointIndex x, PointIndex y, bool reversed) const override;
  Vector compose(PointIndex x, PointIndex y, PointIndex z, const Vector& g, const Vector& f) const override;
  Vector identity(PointIndex x) const override;

 private:
  std::size_t length(PointIndex x) const { return x + 1; }
  std::vector<Vector> module_homs(std::size_t src_len, std::size_t dst_len, bool reversed) const;
  ArtinianRingSpec spec_;
  Field field_;
};

// A term c·x^a·y^b of k[x,y]/(x^2).
struct Monomial {
  std::int64_t coeff = 1;
  int xexp = 0;
  int yexp = 0;
};

// Graded module over k[x,y]/(x^2): generators with degrees and relations,
// each a column of homogeneous ring elements (one entry per generator).
struct GradedModulePresentation {
  std::vector<int> gen_degrees;
  std::vector<std::vector<std::vector<Monomial>>> relations;  // [relation][generator] = sum of terms
  std::vector<int> rel_degrees;
};

GradedModulePresentation ideal_x();           // I = (x)
GradedModulePresentation ideal_x_yn(int n);   // I_n = (x, y^n)

// The modules I, I_1..I_L over the graded ring k[x,y]/(x^2), with hom and
// free-factoring spaces computed degree by degree in degrees <= T.
class GradedAInfOracle : public StableCategoryOracle {
 public:
  GradedAInfOracle(std::size_t levels, int ydeg, FieldSpec field);
  ~GradedAInfOracle() override;
  Field field() const override;
  std::vector<PointInfo> points() const override;
  std::size_t ambient_dim(PointIndex x, PointIndex y) const override;
  std::vector<Vector> hom_basis(PointIndex x, PointIndex y, bool reversed) const override;
  std::vector<Vector> free_factoring(PointIndex x, PointIndex y, bool reversed) const override;
  Vector compose(PointIndex x, PointIndex y, PointIndex z, const Vector& g, const Vector& f) const override;
  Vector identity(PointIndex x) const override;

  // dim of the degree-d stable hom for degrees lo..ydeg+extra.
  std::vector<std::pair<int, std::size_t>> stable_degree_dims(PointIndex x, PointIndex y, int extra) const;
  int ydeg() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

CategoryDatum gen_an_pack(const ArtinianRingSpec& spec);

struct StabilizationRow {
  std::string src, dst;
  bool truncated = false;  // both points not locally free: End grows with T
  std::vector<std::pair<int, std::size_t>> dims_t;   // per degree up to T
  std::vector<std::pair<int, std::size_t>> dims_t1;  // per degree up to T+1
};

struct PackManifest {
  std::string pack_id;
  std::string generator_version;
  std::string family;  // "an" or "ainf"
  std::size_t n = 0;   // an: ring parameter; ainf: levels
  int ydeg = 0;
  FieldSpec field{};
  std::map<std::string, std::string> hashes;  // file name -> fnv1a64
  std::map<std::string, Vector> representatives;
  std::vector<StabilizationRow> stabilization;
};

struct GeneratedPack {
  CategoryDatum datum;
  PackManifest manifest;
};

GeneratedPack generate_an_pack(const ArtinianRingSpec& spec);

struct GeneratedTower {
  TruncationTower tower;
  PackManifest manifest;
};

// Throws ResourceError when the degree window does not stabilize at T.
GeneratedTower gen_ainf_tower(std::size_t levels, int ydeg, FieldSpec field = FieldSpec{});

struct CertificationReport {
  bool passed = true;
  std::string first_divergence;
  std::size_t constants_checked = 0;
};

// Recomputes every structure constant with reversed enumeration order and
// compares through the base change given by the recorded representatives.
CertificationReport verify_pack(const CategoryDatum& d, const PackManifest& manifest);
// Same, against an already computed reversed-order build of the oracle.
CertificationReport verify_pack(const CategoryDatum& d, const PackManifest& manifest, const StableBuild& reversed);

std::unique_ptr<StableCategoryOracle> oracle_for(const PackManifest& manifest);

std::string fnv1a64(const std::string& bytes);

}  // namespace spectra
