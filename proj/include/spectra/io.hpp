#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "spectra/datum.hpp"
#include "spectra/functors.hpp"
#include "spectra/packs.hpp"
#include "spectra/topology.hpp"
#include "spectra/tower.hpp"

namespace spectra::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kDatumSchema = "stable-cat-datum/1";
inline constexpr const char* kFunctorSchema = "fp-functor/1";
inline constexpr const char* kSpaceSchema = "finite-top/1";
inline constexpr const char* kTowerSchema = "stable-cat-tower/1";
inline constexpr const char* kManifestSchema = "pack-manifest/1";

// All readers throw InputError with a location such as "a2.json: compose[3].g".
Json parse_file(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
// Two-space indented, trailing newline.
std::string dump(const Json& j);
std::string schema_of(const std::filesystem::path& path);  // "" for directories

Json field_to_json(const FieldSpec& f);
FieldSpec field_from_json(const Json& j, const std::string& where);

Json datum_to_json(const CategoryDatum& d);
CategoryDatum datum_from_json(const Json& j, const std::string& where);
CategoryDatum load_datum(const std::filesystem::path& path);

Json vector_to_json(const Field& f, const Vector& v);
Json element_to_json(const CategoryDatum& d, PointIndex x, PointIndex y, const Vector& v);  // [{basis, coeff}]
Json morphism_to_json(const CategoryDatum& d, const AddMorphism& g);

Json functor_to_json(const CategoryDatum& d, const FpFunctor& f);
FpFunctor functor_from_json(const CategoryDatum& d, const Json& j, const std::string& where);
FpFunctor load_functor(const CategoryDatum& d, const std::filesystem::path& path);

Json space_to_json(const TableSpace& s);
TableSpace space_from_json(const Json& j, const std::string& where);
TableSpace load_space(const std::filesystem::path& path);

Json manifest_to_json(const PackManifest& m);
PackManifest manifest_from_json(const Json& j, const std::string& where);
PackManifest load_manifest(const std::filesystem::path& path);

struct LoadedTower {
  TruncationTower tower;
  std::filesystem::path dir;
  std::filesystem::path manifest;  // empty when the tower file names none
};
// Accepts the tower file or a directory containing tower.json.
LoadedTower load_tower(const std::filesystem::path& path);

// Writes <stem>.json and <stem>.manifest.json into the directory of `datum_path`.
void write_pack(const std::filesystem::path& datum_path, const CategoryDatum& d, PackManifest m);
// Writes tower.json, level<N>.json and manifest.json into `dir`.
void write_tower(const std::filesystem::path& dir, const TruncationTower& t, PackManifest m);

// Report payloads.
Json validation_to_json(const ValidationReport& r);
Json set_to_json(const std::vector<std::string>& ids);
Json cb_to_json(const CBReport& r);
Json property_to_json(const ClosureSpace& space, const PropertyReport& r);
Json tower_report_to_json(const TowerReport& r);
Json limit_to_json(const CategoryDatum& top, const LimitClosureResult& r);
Json chain_to_json(const TruncationTower& t, const WitnessChain& c);
Json ar_to_json(const CategoryDatum& d, const RightAlmostSplitData& r);
Json ar_stabilization_to_json(const ArStabilization& r);
Json tower_cb_to_json(const TowerCBReport& r);
Json certification_to_json(const CertificationReport& r);

}  // namespace spectra::io
