#include <cstring>
#include <filesystem>
#include <functional>
#include <memory>
#include <sstream>

#include "spectra/error.hpp"
#include "spectra/io.hpp"
#include "spectra/spectra.h"

using namespace spectra;
using io::Json;
namespace fs = std::filesystem;

struct spk_datum {
  CategoryDatum d;
};
struct spk_space {
  TableSpace s;
};
struct spk_tower {
  TruncationTower t;
};

namespace {

thread_local std::string last_error;

spk_status fail(spk_status code, const std::string& msg) {
  last_error = msg;
  return code;
}

spk_status guard(const std::function<spk_status()>& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const InputError& e) {
    return fail(SPK_INPUT_ERROR, e.what());
  } catch (const ResourceError& e) {
    return fail(SPK_RESOURCE_ERROR, e.what());
  } catch (const InconsistencyError& e) {
    return fail(SPK_VIOLATION, e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(SPK_INPUT_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SPK_RESOURCE_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(SPK_INTERNAL_ERROR, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const Json& j) {
  if (!out) throw InputError("output pointer is null");
  *out = copy_string(io::dump(j));
}

template <class T>
const T& need(const T* p, const char* what) {
  if (!p) throw InputError(std::string(what) + " handle is null");
  return *p;
}

std::string need_str(const char* s, const char* what) {
  if (!s) throw InputError(std::string(what) + " is null");
  return s;
}

std::vector<std::string> id_list(const char* const* ids, std::size_t n) {
  if (n > 0 && !ids) throw InputError("point id array is null");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(need_str(ids[i], "point id"));
  return out;
}

Json datum_check(const CategoryDatum& d, const std::string& suite, std::size_t samples, std::uint64_t seed,
                 bool& passed) {
  const DatumSpace space(d);
  const bool exhaustive = d.point_count() <= 4;
  Json j{{"suite", suite}, {"seed", seed}, {"points", d.point_count()}, {"exhaustive", exhaustive}};
  Json results = Json::object();
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "kuratowski") {
    known = true;
    const auto r = kuratowski_check(d, samples, seed, exhaustive);
    results["kuratowski"] = io::property_to_json(space, r);
    passed = passed && r.passed;
  }
  if (all || suite == "t1") {
    known = true;
    const auto r = t1_check(space);
    results["t1"] = io::property_to_json(space, r);
    passed = passed && r.passed;
  }
  if (all || suite == "serre") {
    known = true;
    const auto r =
        exhaustive && d.point_count() <= 3 ? serre_correspondence_check(d) : serre_correspondence_check(d, samples, seed);
    results["serre"] =
        Json{{"passed", r.passed}, {"subsets", r.subsets}, {"classes", r.classes}, {"failures", r.failures}};
    passed = passed && r.passed;
  }
  if (all || suite == "perp") {
    known = true;
    const auto r = perp_check(d, 50, seed, exhaustive ? 0 : samples);
    results["perp"] = Json{
        {"passed", r.passed}, {"checked", r.checked}, {"mismatches", r.mismatches}, {"failures", r.failures}};
    passed = passed && r.passed;
  }
  if (all || suite == "routes") {
    known = true;
    std::size_t checked = 0, disagreements = 0;
    Json fails = Json::array();
    const std::size_t n = d.point_count();
    const bool full = n <= 12;
    std::mt19937_64 rng(seed);
    const std::size_t count = full ? (std::size_t{1} << n) : samples;
    for (std::size_t i = 0; i < count; ++i) {
      const PointSet s = full ? subset_from_mask(n, i) : random_subset(n, rng);
      ++checked;
      const PointSet a = closure_by_ideal(d, s), b = closure_by_witness(d, s);
      if (a != b) {
        ++disagreements;
        if (fails.size() < 5)
          fails.push_back(Json{{"set", d.names(s)}, {"ideal", d.names(a)}, {"witness", d.names(b)}});
      }
    }
    results["routes"] =
        Json{{"passed", disagreements == 0}, {"checked", checked}, {"disagreements", disagreements}, {"failures", fails}};
    passed = passed && disagreements == 0;
  }
  if (!known) throw InputError("unknown suite '" + suite + "'; expected kuratowski, t1, serre, perp, routes or all");
  j["passed"] = passed;
  j["results"] = results;
  return j;
}

Json ar_payload(const CategoryDatum& d, PointIndex m) { return io::ar_to_json(d, right_almost_split(d, m)); }

std::string ar_dot(const CategoryDatum& d) {
  std::ostringstream out;
  out << "digraph ar_quiver {\n";
  for (const auto& p : d.points()) out << "  \"" << p.id << "\";\n";
  for (PointIndex m = 0; m < d.point_count(); ++m) {
    const auto r = right_almost_split(d, m);
    for (const auto& [src, mult] : r.map.source.multiplicities()) {
      out << "  \"" << d.point(src).id << "\" -> \"" << d.point(m).id << "\"";
      if (mult > 1) out << " [label=\"" << mult << "\"]";
      out << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string stem_manifest(const fs::path& datum) {
  fs::path m = datum;
  m.replace_extension(".manifest.json");
  return m.string();
}

Json hash_check(const fs::path& dir, const PackManifest& m, bool& passed) {
  Json files = Json::object();
  for (const auto& [name, h] : m.hashes) {
    const fs::path p = dir / name;
    std::string status;
    if (!fs::exists(p))
      status = "missing";
    else
      status = fnv1a64(io::read_text(p)) == h ? "ok" : "mismatch";
    if (status != "ok") passed = false;
    files[name] = status;
  }
  return files;
}

}  // namespace

extern "C" {

const char* spk_version(void) { return "1.0.0"; }

const char* spk_last_error(void) { return last_error.c_str(); }

void spk_string_free(char* s) { std::free(s); }

spk_status spk_file_schema(const char* path, char** out_schema) {
  return guard([&] {
    if (!out_schema) throw InputError("output pointer is null");
    *out_schema = copy_string(io::schema_of(need_str(path, "path")));
    return SPK_OK;
  });
}

spk_status spk_datum_load(const char* path, spk_datum** out) {
  return guard([&] {
    if (!out) throw InputError("output pointer is null");
    *out = new spk_datum{io::load_datum(need_str(path, "path"))};
    return SPK_OK;
  });
}

void spk_datum_free(spk_datum* d) { delete d; }

size_t spk_datum_point_count(const spk_datum* d) { return d ? d->d.point_count() : 0; }

spk_status spk_space_load(const char* path, spk_space** out) {
  return guard([&] {
    if (!out) throw InputError("output pointer is null");
    *out = new spk_space{io::load_space(need_str(path, "path"))};
    return SPK_OK;
  });
}

void spk_space_free(spk_space* s) { delete s; }

spk_status spk_tower_load(const char* path, spk_tower** out) {
  return guard([&] {
    if (!out) throw InputError("output pointer is null");
    *out = new spk_tower{io::load_tower(need_str(path, "path")).tower};
    return SPK_OK;
  });
}

void spk_tower_free(spk_tower* t) { delete t; }

size_t spk_tower_height(const spk_tower* t) { return t ? t->t.height() : 0; }

spk_status spk_tower_truncate(spk_tower* t, size_t top) {
  return guard([&] {
    if (!t) throw InputError("tower handle is null");
    t->t = t->t.truncated(top);
    return SPK_OK;
  });
}

spk_status spk_validate(const spk_datum* d, char** out_json) {
  return guard([&] {
    const auto r = validate_datum(need(d, "datum").d);
    emit(out_json, io::validation_to_json(r));
    return r.valid() ? SPK_OK : SPK_VIOLATION;
  });
}

spk_status spk_closure(const spk_datum* dh, const char* const* ids, size_t n, char** out_json) {
  return guard([&] {
    const CategoryDatum& d = need(dh, "datum").d;
    const PointSet pts = d.parse_set(id_list(ids, n));
    const ClosureResult r = closure_with_witnesses(d, pts);
    const PointSet by_ideal = closure_by_ideal(d, pts);
    if (by_ideal != r.closure) {
      last_error = "closure routes disagree: ideal route gives {" +
                   [&] {
                     std::string s;
                     for (const auto& x : d.names(by_ideal)) s += (s.empty() ? "" : ",") + x;
                     return s;
                   }() +
                   "}";
      Json j{{"closure", d.names(r.closure)}, {"closure_by_ideal", d.names(by_ideal)}, {"routes_agree", false}};
      emit(out_json, j);
      return SPK_VIOLATION;
    }
    Json w = Json::object();
    for (const auto& [y, g] : r.witnesses) w[d.point(y).id] = io::morphism_to_json(d, g);
    emit(out_json, Json{{"closure", d.names(r.closure)}, {"witnesses", w}});
    return SPK_OK;
  });
}

spk_status spk_witness(const spk_datum* dh, const char* exclude, const char* const* from, size_t n,
                       char** out_json) {
  return guard([&] {
    const CategoryDatum& d = need(dh, "datum").d;
    const PointIndex y = d.point_index(need_str(exclude, "excluded point"));
    const PointSet pts = d.parse_set(id_list(from, n));
    if (pts.test(y)) throw InputError("excluded point " + d.point(y).id + " lies in the set");
    Json j{{"excluded", d.point(y).id}, {"from", d.names(pts)}};
    const auto w = exclusion_witness(d, y, pts);
    if (!w) {
      j["witness"] = nullptr;
      j["in_closure"] = true;
    } else {
      j["witness"] = io::morphism_to_json(d, *w);
      j["in_closure"] = false;
      const FpFunctor f{*w};
      Json values = Json::object();
      for (PointIndex x = 0; x < d.point_count(); ++x)
        if (pts.test(x) || x == y) values[d.point(x).id] = eval_dim(d, f, x);
      j["cokernel_dims"] = values;
    }
    emit(out_json, j);
    return SPK_OK;
  });
}

spk_status spk_sigma(const spk_datum* dh, const char* functor_path, const char* const* ids, size_t n,
                     char** out_json) {
  return guard([&] {
    const CategoryDatum& d = need(dh, "datum").d;
    const FpFunctor f = io::load_functor(d, need_str(functor_path, "functor path"));
    const PointSet pts = d.parse_set(id_list(ids, n));
    Json dims = Json::object();
    for (PointIndex x = 0; x < d.point_count(); ++x) dims[d.point(x).id] = eval_dim(d, f, x);
    emit(out_json, Json{{"set", d.names(pts)}, {"in_sigma", in_sigma(d, f, pts)}, {"values", dims}});
    return SPK_OK;
  });
}

spk_status spk_isolated_datum(const spk_datum* d, char** out_json) {
  return guard([&] {
    const DatumSpace s(need(d, "datum").d);
    emit(out_json, Json{{"isolated", s.names(isolated_points(s))}});
    return SPK_OK;
  });
}

spk_status spk_isolated_space(const spk_space* s, char** out_json) {
  return guard([&] {
    const TableSpace& sp = need(s, "space").s;
    emit(out_json, Json{{"isolated", sp.names(isolated_points(sp))}});
    return SPK_OK;
  });
}

spk_status spk_cb_rank_datum(const spk_datum* d, char** out_json) {
  return guard([&] {
    emit(out_json, io::cb_to_json(cb_rank(DatumSpace(need(d, "datum").d))));
    return SPK_OK;
  });
}

spk_status spk_cb_rank_space(const spk_space* s, char** out_json) {
  return guard([&] {
    emit(out_json, io::cb_to_json(cb_rank(need(s, "space").s)));
    return SPK_OK;
  });
}

spk_status spk_cb_rank_tower(const spk_tower* t, size_t bound, char** out_json) {
  return guard([&] {
    const auto r = tower_cb_rank(need(t, "tower").t, bound);
    emit(out_json, io::tower_cb_to_json(r));
    for (const auto& w : r.warnings)
      if (w.kind == "conflict") return SPK_VIOLATION;
    return SPK_OK;
  });
}

spk_status spk_check_datum(const spk_datum* d, const char* suite, size_t samples, uint64_t seed, char** out_json) {
  return guard([&] {
    bool passed = true;
    emit(out_json, datum_check(need(d, "datum").d, need_str(suite, "suite"), samples, seed, passed));
    return passed ? SPK_OK : SPK_VIOLATION;
  });
}

spk_status spk_check_space(const spk_space* sh, const char* suite_c, size_t samples, uint64_t seed,
                           char** out_json) {
  return guard([&] {
    const TableSpace& s = need(sh, "space").s;
    const std::string suite = need_str(suite_c, "suite");
    const bool exhaustive = s.size() <= 12;
    Json results = Json::object();
    bool passed = true, known = suite == "all";
    if (suite == "all" || suite == "kuratowski") {
      known = true;
      const auto r = kuratowski_check(s, samples, seed, exhaustive);
      results["kuratowski"] = io::property_to_json(s, r);
      passed = passed && r.passed;
    }
    if (suite == "all" || suite == "t1") {
      known = true;
      const auto r = t1_check(s);
      results["t1"] = io::property_to_json(s, r);
      passed = passed && r.passed;
    }
    if (!known) throw InputError("unknown suite '" + suite + "' for a space; expected kuratowski, t1 or all");
    emit(out_json, Json{{"suite", suite},
                        {"seed", seed},
                        {"points", s.size()},
                        {"exhaustive", exhaustive},
                        {"passed", passed},
                        {"results", results}});
    return passed ? SPK_OK : SPK_VIOLATION;
  });
}

spk_status spk_gen_pack_an(size_t n, uint32_t p, const char* out_path, char** out_json) {
  return guard([&] {
    const fs::path path = need_str(out_path, "output path");
    ArtinianRingSpec spec{n, p == 0 ? FieldSpec{} : FieldSpec::prime(p)};
    GeneratedPack g = generate_an_pack(spec);
    const auto v = validate_datum(g.datum);
    if (!v.valid()) throw InconsistencyError("generated datum fails validation: " + v.violations.front().detail);
    io::write_pack(path, g.datum, g.manifest);
    emit(out_json, Json{{"pack_id", g.manifest.pack_id},
                        {"points", g.datum.point_count()},
                        {"datum", path.string()},
                        {"manifest", stem_manifest(path)}});
    return SPK_OK;
  });
}

spk_status spk_gen_tower_ainf(size_t levels, int ydeg, uint32_t p, const char* out_dir, char** out_json) {
  return guard([&] {
    const fs::path dir = need_str(out_dir, "output directory");
    GeneratedTower g = gen_ainf_tower(levels, ydeg, p == 0 ? FieldSpec{} : FieldSpec::prime(p));
    const auto r = verify_tower(g.tower);
    if (!r.passed) throw InconsistencyError("generated tower fails verification: " + r.detail);
    io::write_tower(dir, g.tower, g.manifest);
    Json pts = Json::array();
    for (const auto& q : g.tower.points) pts.push_back(q.id);
    emit(out_json, Json{{"pack_id", g.manifest.pack_id},
                        {"levels", g.tower.height()},
                        {"ydeg", ydeg},
                        {"points", pts},
                        {"dir", dir.string()}});
    return SPK_OK;
  });
}

spk_status spk_tower_verify(const spk_tower* t, char** out_json) {
  return guard([&] {
    const auto r = verify_tower(need(t, "tower").t);
    emit(out_json, io::tower_report_to_json(r));
    return r.passed ? SPK_OK : SPK_VIOLATION;
  });
}

spk_status spk_tower_chain(const spk_tower* th, const char* exclude, int fixed, char** out_json) {
  return guard([&] {
    const TruncationTower& t = need(th, "tower").t;
    const std::string y = need_str(exclude, "excluded point");
    t.meta(y);
    std::vector<std::size_t> levels;
    for (std::size_t n = 1; n <= t.height(); ++n) levels.push_back(n);
    const auto c = witness_failure_chain(t, y, levels, fixed == 0);
    Json j = io::chain_to_json(t, c);
    j["ar_stabilization"] = io::ar_stabilization_to_json(ar_stabilization(t, y));
    emit(out_json, j);
    return SPK_OK;
  });
}

spk_status spk_limit_closure(const spk_tower* th, const char* y, const char* const* family, size_t n,
                             int include_core, size_t bound, char** out_json) {
  return guard([&] {
    const TruncationTower& t = need(th, "tower").t;
    FamilyDescription fam;
    if (family) {
      fam.kind = FamilyDescription::Kind::Finite;
      fam.ids = id_list(family, n);
    } else {
      fam.kind = FamilyDescription::Kind::AllFamily;
      fam.include_core = include_core != 0;
    }
    emit(out_json, io::limit_to_json(t.top(), closure_in_limit(t, need_str(y, "point"), fam, bound)));
    return SPK_OK;
  });
}

spk_status spk_ar_datum(const spk_datum* dh, const char* point, char** out_json, char** out_dot) {
  return guard([&] {
    const CategoryDatum& d = need(dh, "datum").d;
    emit(out_json, ar_payload(d, d.point_index(need_str(point, "point"))));
    if (out_dot) *out_dot = copy_string(ar_dot(d));
    return SPK_OK;
  });
}

spk_status spk_ar_tower(const spk_tower* th, const char* point, char** out_json, char** out_dot) {
  return guard([&] {
    const TruncationTower& t = need(th, "tower").t;
    const std::string m = need_str(point, "point");
    Json j = ar_payload(t.top(), t.top().point_index(m));
    j["stabilization"] = io::ar_stabilization_to_json(ar_stabilization(t, m));
    emit(out_json, j);
    if (out_dot) *out_dot = copy_string(ar_dot(t.top()));
    return SPK_OK;
  });
}

spk_status spk_verify_pack(const char* path_c, char** out_json) {
  return guard([&] {
    const fs::path path = need_str(path_c, "path");
    const std::string schema = io::schema_of(path);
    Json j;
    bool passed = true;
    if (schema.empty() || schema == io::kTowerSchema) {
      const auto lt = io::load_tower(path);
      if (lt.manifest.empty()) throw InputError(path.string() + ": tower names no manifest");
      const PackManifest m = io::load_manifest(lt.manifest);
      j["pack_id"] = m.pack_id;
      j["files"] = hash_check(lt.dir, m, passed);
      const auto tr = verify_tower(lt.tower);
      j["tower"] = io::tower_report_to_json(tr);
      passed = passed && tr.passed;
      const auto oracle = oracle_for(m);
      const StableBuild rev = build_stable_datum(*oracle, true);
      Json levels = Json::array();
      for (std::size_t n = 1; n <= lt.tower.height(); ++n) {
        const auto r = verify_pack(lt.tower.level(n), m, rev);
        Json e = io::certification_to_json(r);
        e["level"] = n;
        levels.push_back(e);
        if (!r.passed) {
          if (passed) last_error = "level " + std::to_string(n) + ": " + r.first_divergence;
          passed = false;
        }
      }
      j["levels"] = levels;
    } else {
      fs::path datum_path = path, manifest_path;
      if (schema == io::kManifestSchema) {
        manifest_path = path;
        const PackManifest m = io::load_manifest(path);
        if (m.hashes.size() != 1) throw InputError(path.string() + ": expected a single-file pack manifest");
        datum_path = path.parent_path() / m.hashes.begin()->first;
      } else if (schema == io::kDatumSchema) {
        manifest_path = stem_manifest(path);
      } else {
        throw InputError(path.string() + ": not a pack (schema '" + schema + "')");
      }
      const PackManifest m = io::load_manifest(manifest_path);
      j["pack_id"] = m.pack_id;
      j["files"] = hash_check(datum_path.parent_path(), m, passed);
      const CategoryDatum d = io::load_datum(datum_path);
      const auto v = validate_datum(d);
      j["validation"] = io::validation_to_json(v);
      passed = passed && v.valid();
      const auto r = verify_pack(d, m);
      j["certification"] = io::certification_to_json(r);
      if (!r.passed) last_error = r.first_divergence;
      passed = passed && r.passed;
    }
    j["passed"] = passed;
    emit(out_json, j);
    return passed ? SPK_OK : SPK_VIOLATION;
  });
}

}  // extern "C"
