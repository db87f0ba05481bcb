#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spectra/io.hpp"

#ifndef SPECTRA_PACKS_DIR
#error "SPECTRA_PACKS_DIR must point at the shipped packs"
#endif

namespace spectra::test {

inline std::filesystem::path packs_dir() { return SPECTRA_PACKS_DIR; }

inline CategoryDatum load_pack(const std::string& name) { return io::load_datum(packs_dir() / name); }

inline const TruncationTower& shipped_tower() {
  static const TruncationTower t = io::load_tower(packs_dir() / "ainf-tower").tower;
  return t;
}

// One point whose endomorphism ring is the field.
inline CategoryDatum single_point(const Field& f = Field(FieldSpec{})) {
  CategoryDatum d(f, {{"P", true}});
  d.set_hom(0, 0, {"p"});
  d.set_compose(0, 0, 0, 0, 0, {f.one()});
  d.set_identity(0, {f.one()});
  d.set_radical(0, {});
  return d;
}

// Points with End = k and no maps between distinct points.
inline CategoryDatum discrete(const std::vector<std::string>& ids, const Field& f = Field(FieldSpec{})) {
  std::vector<PointInfo> pts;
  for (const auto& id : ids) pts.push_back({id, true});
  CategoryDatum d(f, pts);
  for (PointIndex x = 0; x < ids.size(); ++x) {
    d.set_hom(x, x, {"e_" + ids[x]});
    d.set_compose(x, x, x, 0, 0, {f.one()});
    d.set_identity(x, {f.one()});
    d.set_radical(x, {});
  }
  return d;
}

inline PointSet set_of(const CategoryDatum& d, const std::vector<std::string>& ids) { return d.parse_set(ids); }

inline std::vector<std::string> ids_of(const CategoryDatum& d, const PointSet& s) { return d.names(s); }

inline Vector vec(const Field& f, std::initializer_list<std::int64_t> xs) {
  Vector v;
  for (auto x : xs) v.push_back(f.from_int(x));
  return v;
}

inline Matrix mat(const Field& f, std::vector<std::vector<std::int64_t>> rows) {
  Matrix m(f, rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = f.from_int(rows[r][c]);
  return m;
}

}  // namespace spectra::test
