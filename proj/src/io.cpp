#include "spectra/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "spectra/error.hpp"

namespace spectra::io {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) { throw InputError(where + ": " + what); }

std::string at(const std::string& where, const std::string& key) { return where + "." + key; }
std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

void expect_object(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(where, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) bad(where, "unknown field '" + it.key() + "'");
}

const Json& need(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing field '") + key + "'");
  return *it;
}

const Json& need_array(const Json& j, const char* key, const std::string& where) {
  const Json& v = need(j, key, where);
  if (!v.is_array()) bad(at(where, key), "expected an array");
  return v;
}

std::string need_string(const Json& j, const char* key, const std::string& where) {
  const Json& v = need(j, key, where);
  if (!v.is_string()) bad(at(where, key), "expected a string");
  return v.get<std::string>();
}

std::size_t need_count(const Json& j, const char* key, const std::string& where) {
  const Json& v = need(j, key, where);
  if (!v.is_number_unsigned()) bad(at(where, key), "expected a nonnegative integer");
  return v.get<std::size_t>();
}

bool need_bool(const Json& j, const char* key, const std::string& where) {
  const Json& v = need(j, key, where);
  if (!v.is_boolean()) bad(at(where, key), "expected a boolean");
  return v.get<bool>();
}

void check_schema(const Json& j, const char* schema, const std::string& where) {
  const std::string s = need_string(j, "schema", where);
  if (s != schema) bad(at(where, "schema"), "expected '" + std::string(schema) + "', found '" + s + "'");
}

Scalar parse_scalar(const Field& f, const Json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "coefficients are strings");
  try {
    return f.parse(j.get<std::string>());
  } catch (const InputError& e) {
    bad(where, e.what());
  }
}

Vector parse_vector(const Field& f, const Json& j, std::size_t len, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array of coefficients");
  if (j.size() != len) bad(where, "expected " + std::to_string(len) + " coefficients, found " + std::to_string(j.size()));
  Vector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(parse_scalar(f, j[i], at(where, i)));
  return v;
}

// [{basis, coeff}] terms of an element of hom(x, y).
Vector parse_terms(const CategoryDatum& d, PointIndex x, PointIndex y, const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array of terms");
  Vector v = d.zero(x, y);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = at(where, i);
    expect_object(j[i], w, {"basis", "coeff"});
    const std::string name = need_string(j[i], "basis", w);
    auto ref = d.find_basis(name);
    if (!ref) bad(at(w, "basis"), "unknown basis element '" + name + "'");
    if (ref->src != x || ref->dst != y)
      bad(at(w, "basis"), "'" + name + "' is not in hom(" + d.point(x).id + ", " + d.point(y).id + ")");
    v[ref->index] = d.field().add(v[ref->index], parse_scalar(d.field(), need(j[i], "coeff", w), at(w, "coeff")));
  }
  return v;
}

Json sparse_vector(const Field& f, const Vector& v) {
  Json entries = Json::array();
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!v[k].is_zero()) entries.push_back(Json::array({k, f.format(v[k])}));
  return Json{{"length", v.size()}, {"entries", entries}};
}

Vector sparse_from_json(const Field& f, const Json& j, const std::string& where) {
  expect_object(j, where, {"length", "entries"});
  Vector v = zero_vector(f, need_count(j, "length", where));
  const Json& e = need_array(j, "entries", where);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::string w = at(at(where, "entries"), i);
    if (!e[i].is_array() || e[i].size() != 2 || !e[i][0].is_number_unsigned()) bad(w, "expected [index, coeff]");
    const std::size_t k = e[i][0].get<std::size_t>();
    if (k >= v.size()) bad(w, "index out of range");
    v[k] = parse_scalar(f, e[i][1], w);
  }
  return v;
}

}  // namespace

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path.string() + ": cannot write");
  out << text;
}

Json parse_file(const fs::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string schema_of(const fs::path& path) {
  if (fs::is_directory(path)) return "";
  const Json j = parse_file(path);
  if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string())
    throw InputError(path.string() + ": missing field 'schema'");
  return j["schema"].get<std::string>();
}

Json field_to_json(const FieldSpec& f) {
  if (f.kind == FieldKind::Rational) return Json{{"kind", "rational"}};
  return Json{{"kind", "prime"}, {"p", f.p}};
}

FieldSpec field_from_json(const Json& j, const std::string& where) {
  expect_object(j, where, {"kind", "p"});
  const std::string kind = need_string(j, "kind", where);
  if (kind == "rational") {
    if (j.contains("p")) bad(where, "rational field carries no modulus");
    return FieldSpec::rational();
  }
  if (kind != "prime") bad(at(where, "kind"), "expected 'prime' or 'rational'");
  const std::size_t p = need_count(j, "p", where);
  if (p > 0xffffffffULL) bad(at(where, "p"), "modulus too large");
  try {
    return FieldSpec::prime(static_cast<std::uint32_t>(p));
  } catch (const InputError& e) {
    bad(at(where, "p"), e.what());
  }
}

Json vector_to_json(const Field& f, const Vector& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(f.format(s));
  return a;
}

Json element_to_json(const CategoryDatum& d, PointIndex x, PointIndex y, const Vector& v) {
  Json a = Json::array();
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!v[k].is_zero()) a.push_back(Json{{"basis", d.hom_basis(x, y)[k]}, {"coeff", d.field().format(v[k])}});
  return a;
}

Json datum_to_json(const CategoryDatum& d) {
  const std::size_t n = d.point_count();
  Json j;
  j["schema"] = kDatumSchema;
  j["field"] = field_to_json(d.field().spec());
  Json pts = Json::array();
  for (const auto& p : d.points()) pts.push_back(Json{{"id", p.id}, {"locally_free", p.locally_free}});
  j["points"] = pts;
  Json hom = Json::array();
  for (PointIndex x = 0; x < n; ++x)
    for (PointIndex y = 0; y < n; ++y)
      hom.push_back(Json{{"src", d.point(x).id}, {"dst", d.point(y).id}, {"dim", d.hom_dim(x, y)},
                         {"basis", d.hom_basis(x, y)}});
  j["hom"] = hom;
  Json comp = Json::array();
  for (PointIndex x = 0; x < n; ++x)
    for (PointIndex y = 0; y < n; ++y)
      for (PointIndex z = 0; z < n; ++z)
        for (std::size_t gi = 0; gi < d.hom_dim(y, z); ++gi)
          for (std::size_t fi = 0; fi < d.hom_dim(x, y); ++fi) {
            const Vector r = d.compose_basis(x, y, z, gi, fi);
            if (is_zero(r)) continue;
            comp.push_back(Json{{"g", d.hom_basis(y, z)[gi]},
                                {"f", d.hom_basis(x, y)[fi]},
                                {"result", element_to_json(d, x, z, r)}});
          }
  j["compose"] = comp;
  Json ids = Json::array();
  for (PointIndex x = 0; x < n; ++x)
    ids.push_back(Json{{"point", d.point(x).id}, {"element", vector_to_json(d.field(), d.identity(x))}});
  j["identities"] = ids;
  Json rad = Json::array();
  for (PointIndex x = 0; x < n; ++x) {
    Json basis = Json::array();
    for (const auto& r : d.radical(x)) basis.push_back(vector_to_json(d.field(), r));
    rad.push_back(Json{{"point", d.point(x).id}, {"basis_elements", basis}});
  }
  j["radical"] = rad;
  return j;
}

CategoryDatum datum_from_json(const Json& j, const std::string& where) {
  expect_object(j, where, {"schema", "field", "points", "hom", "compose", "identities", "radical"});
  check_schema(j, kDatumSchema, where);
  const Field f(field_from_json(need(j, "field", where), at(where, "field")));
  std::vector<PointInfo> pts;
  const Json& jp = need_array(j, "points", where);
  for (std::size_t i = 0; i < jp.size(); ++i) {
    const std::string w = at(at(where, "points"), i);
    expect_object(jp[i], w, {"id", "locally_free"});
    PointInfo p{need_string(jp[i], "id", w), true};
    if (jp[i].contains("locally_free")) p.locally_free = need_bool(jp[i], "locally_free", w);
    pts.push_back(p);
  }
  CategoryDatum d;
  try {
    d = CategoryDatum(f, pts);
  } catch (const InputError& e) {
    bad(at(where, "points"), e.what());
  }
  auto point = [&](const Json& obj, const char* key, const std::string& w) {
    const std::string id = need_string(obj, key, w);
    auto idx = d.find_point(id);
    if (!idx) bad(at(w, key), "unknown point '" + id + "'");
    return *idx;
  };
  const Json& jh = need_array(j, "hom", where);
  std::set<std::pair<PointIndex, PointIndex>> seen;
  for (std::size_t i = 0; i < jh.size(); ++i) {
    const std::string w = at(at(where, "hom"), i);
    expect_object(jh[i], w, {"src", "dst", "dim", "basis"});
    const PointIndex x = point(jh[i], "src", w), y = point(jh[i], "dst", w);
    if (!seen.insert({x, y}).second) bad(w, "hom(" + d.point(x).id + ", " + d.point(y).id + ") given twice");
    const std::size_t dim = need_count(jh[i], "dim", w);
    const Json& jb = need_array(jh[i], "basis", w);
    if (jb.size() != dim) bad(at(w, "basis"), "expected " + std::to_string(dim) + " basis names");
    std::vector<std::string> names;
    for (std::size_t k = 0; k < jb.size(); ++k) {
      if (!jb[k].is_string()) bad(at(at(w, "basis"), k), "expected a string");
      names.push_back(jb[k].get<std::string>());
    }
    try {
      d.set_hom(x, y, names);
    } catch (const InputError& e) {
      bad(at(w, "basis"), e.what());
    }
  }
  if (j.contains("compose")) {
    const Json& jc = need_array(j, "compose", where);
    std::set<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 0; i < jc.size(); ++i) {
      const std::string w = at(at(where, "compose"), i);
      expect_object(jc[i], w, {"g", "f", "result"});
      const std::string gname = need_string(jc[i], "g", w), fname = need_string(jc[i], "f", w);
      auto g = d.find_basis(gname);
      auto fr = d.find_basis(fname);
      if (!g) bad(at(w, "g"), "unknown basis element '" + gname + "'");
      if (!fr) bad(at(w, "f"), "unknown basis element '" + fname + "'");
      if (fr->dst != g->src) bad(w, "'" + gname + "' cannot follow '" + fname + "'");
      if (!pairs.insert({gname, fname}).second) bad(w, "composite given twice");
      const Vector r = parse_terms(d, fr->src, g->dst, need(jc[i], "result", w), at(w, "result"));
      d.set_compose(fr->src, fr->dst, g->dst, g->index, fr->index, r);
    }
  }
  std::vector<bool> has_id(d.point_count(), false);
  const Json& ji = need_array(j, "identities", where);
  for (std::size_t i = 0; i < ji.size(); ++i) {
    const std::string w = at(at(where, "identities"), i);
    expect_object(ji[i], w, {"point", "element"});
    const PointIndex x = point(ji[i], "point", w);
    if (has_id[x]) bad(w, "identity of " + d.point(x).id + " given twice");
    has_id[x] = true;
    d.set_identity(x, parse_vector(f, need(ji[i], "element", w), d.hom_dim(x, x), at(w, "element")));
  }
  for (PointIndex x = 0; x < d.point_count(); ++x)
    if (!has_id[x]) bad(at(where, "identities"), "no identity for " + d.point(x).id);
  if (j.contains("radical")) {
    const Json& jr = need_array(j, "radical", where);
    std::vector<bool> has_rad(d.point_count(), false);
    for (std::size_t i = 0; i < jr.size(); ++i) {
      const std::string w = at(at(where, "radical"), i);
      expect_object(jr[i], w, {"point", "basis_elements"});
      const PointIndex x = point(jr[i], "point", w);
      if (has_rad[x]) bad(w, "radical of " + d.point(x).id + " given twice");
      has_rad[x] = true;
      const Json& jb = need_array(jr[i], "basis_elements", w);
      std::vector<Vector> basis;
      for (std::size_t k = 0; k < jb.size(); ++k)
        basis.push_back(parse_vector(f, jb[k], d.hom_dim(x, x), at(at(w, "basis_elements"), k)));
      d.set_radical(x, basis);
    }
  }
  return d;
}

CategoryDatum load_datum(const fs::path& path) { return datum_from_json(parse_file(path), path.filename().string()); }

Json morphism_to_json(const CategoryDatum& d, const AddMorphism& g) {
  Json src = Json::array(), dst = Json::array(), blocks = Json::array();
  for (auto s : g.source.summands) src.push_back(d.point(s).id);
  for (auto t : g.target.summands) dst.push_back(d.point(t).id);
  for (std::size_t t = 0; t < g.target.size(); ++t)
    for (std::size_t s = 0; s < g.source.size(); ++s) {
      Json e = element_to_json(d, g.source.summands[s], g.target.summands[t], g.blocks[t][s]);
      if (e.empty()) continue;
      blocks.push_back(Json{{"source_index", s}, {"target_index", t}, {"element", e}});
    }
  return Json{{"source", src}, {"target", dst}, {"blocks", blocks}};
}

Json functor_to_json(const CategoryDatum& d, const FpFunctor& f) {
  const AddMorphism& g = f.presentation;
  auto mult = [&](const AddObject& o) {
    Json m = Json::object();
    for (const auto& [p, c] : o.multiplicities()) m[d.point(p).id] = c;
    return m;
  };
  Json j;
  j["schema"] = kFunctorSchema;
  j["source"] = mult(g.source);
  j["target"] = mult(g.target);
  j["blocks"] = morphism_to_json(d, g)["blocks"];
  return j;
}

FpFunctor functor_from_json(const CategoryDatum& d, const Json& j, const std::string& where) {
  expect_object(j, where, {"schema", "source", "target", "blocks"});
  check_schema(j, kFunctorSchema, where);
  auto obj = [&](const char* key) {
    const Json& m = need(j, key, where);
    if (!m.is_object()) bad(at(where, key), "expected a map from point to multiplicity");
    std::map<PointIndex, std::size_t> mult;
    for (auto it = m.begin(); it != m.end(); ++it) {
      auto p = d.find_point(it.key());
      if (!p) bad(at(where, key), "unknown point '" + it.key() + "'");
      if (!it.value().is_number_unsigned()) bad(at(at(where, key), it.key()), "expected a nonnegative integer");
      mult[*p] = it.value().get<std::size_t>();
    }
    return AddObject::from_multiplicities(mult);
  };
  AddMorphism g = AddMorphism::zero(d, obj("source"), obj("target"));
  const Json& jb = need_array(j, "blocks", where);
  for (std::size_t i = 0; i < jb.size(); ++i) {
    const std::string w = at(at(where, "blocks"), i);
    expect_object(jb[i], w, {"source_index", "target_index", "element"});
    const std::size_t s = need_count(jb[i], "source_index", w), t = need_count(jb[i], "target_index", w);
    if (s >= g.source.size()) bad(at(w, "source_index"), "out of range");
    if (t >= g.target.size()) bad(at(w, "target_index"), "out of range");
    g.blocks[t][s] = parse_terms(d, g.source.summands[s], g.target.summands[t], need(jb[i], "element", w),
                                 at(w, "element"));
  }
  return {std::move(g)};
}

FpFunctor load_functor(const CategoryDatum& d, const fs::path& path) {
  return functor_from_json(d, parse_file(path), path.filename().string());
}

Json space_to_json(const TableSpace& s) {
  Json j;
  j["schema"] = kSpaceSchema;
  std::vector<std::string> pts;
  for (std::size_t i = 0; i < s.size(); ++i) pts.push_back(s.name(i));
  j["points"] = pts;
  j["union_generated"] = s.is_union_generated();
  Json cl = Json::array();
  if (s.is_union_generated()) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      PointSet one = s.empty_set();
      one.set(i);
      cl.push_back(Json{{"set", s.names(one)}, {"closure", s.names(s.closure(one))}});
    }
  } else {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << s.size()); ++m) {
      const PointSet sub = subset_from_mask(s.size(), m);
      cl.push_back(Json{{"set", s.names(sub)}, {"closure", s.names(s.closure(sub))}});
    }
  }
  j["closures"] = cl;
  return j;
}

TableSpace space_from_json(const Json& j, const std::string& where) {
  expect_object(j, where, {"schema", "points", "union_generated", "closures"});
  check_schema(j, kSpaceSchema, where);
  std::vector<std::string> pts;
  const Json& jp = need_array(j, "points", where);
  for (std::size_t i = 0; i < jp.size(); ++i) {
    if (!jp[i].is_string()) bad(at(at(where, "points"), i), "expected a string");
    pts.push_back(jp[i].get<std::string>());
  }
  const std::size_t n = pts.size();
  if (std::set<std::string>(pts.begin(), pts.end()).size() != n) bad(at(where, "points"), "duplicate point");
  const bool ug = j.contains("union_generated") && need_bool(j, "union_generated", where);
  if (!ug && n > TableSpace::kMaxTablePoints)
    bad(at(where, "points"), "full closure tables are limited to " + std::to_string(TableSpace::kMaxTablePoints) +
                                 " points; use union_generated");
  auto parse_set = [&](const Json& a, const std::string& w) {
    if (!a.is_array()) bad(w, "expected an array of point ids");
    PointSet s(n);
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (!a[k].is_string()) bad(at(w, k), "expected a string");
      auto it = std::find(pts.begin(), pts.end(), a[k].get<std::string>());
      if (it == pts.end()) bad(at(w, k), "unknown point '" + a[k].get<std::string>() + "'");
      s.set(static_cast<std::size_t>(it - pts.begin()));
    }
    return s;
  };
  const Json& jc = need_array(j, "closures", where);
  std::map<PointSet, PointSet> table;
  for (std::size_t i = 0; i < jc.size(); ++i) {
    const std::string w = at(at(where, "closures"), i);
    expect_object(jc[i], w, {"set", "closure"});
    const PointSet s = parse_set(need(jc[i], "set", w), at(w, "set"));
    if (table.count(s)) bad(w, "closure of this set given twice");
    table[s] = parse_set(need(jc[i], "closure", w), at(w, "closure"));
  }
  if (ug) {
    std::vector<PointSet> singles;
    for (std::size_t i = 0; i < n; ++i) {
      PointSet one(n);
      one.set(i);
      auto it = table.find(one);
      if (it == table.end()) bad(at(where, "closures"), "no closure for {" + pts[i] + "}");
      singles.push_back(it->second);
    }
    for (const auto& [s, c] : table)
      if (s.count() != 1) bad(at(where, "closures"), "union-generated tables list singletons only");
    return TableSpace::union_generated(pts, singles);
  }
  std::vector<PointSet> full;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    auto it = table.find(subset_from_mask(n, m));
    if (it == table.end()) bad(at(where, "closures"), "closure table is missing a subset");
    full.push_back(it->second);
  }
  return TableSpace(pts, full);
}

TableSpace load_space(const fs::path& path) { return space_from_json(parse_file(path), path.filename().string()); }

Json manifest_to_json(const PackManifest& m) {
  Json j;
  j["schema"] = kManifestSchema;
  j["pack_id"] = m.pack_id;
  j["generator_version"] = m.generator_version;
  j["family"] = m.family;
  j["n"] = m.n;
  if (m.family == "ainf") {
    j["ydeg"] = m.ydeg;
    j["model"] = "graded k[x,y]/(x^2); End(I) truncated to degrees <= ydeg";
  }
  j["field"] = field_to_json(m.field);
  j["files"] = Json::object();
  for (const auto& [name, h] : m.hashes) j["files"][name] = h;
  const Field f(m.field);
  Json reps = Json::object();
  for (const auto& [name, v] : m.representatives) reps[name] = sparse_vector(f, v);
  j["representatives"] = reps;
  Json stab = Json::array();
  for (const auto& r : m.stabilization) {
    auto dims = [](const std::vector<std::pair<int, std::size_t>>& v) {
      Json a = Json::array();
      for (const auto& [d, c] : v) a.push_back(Json::array({d, c}));
      return a;
    };
    stab.push_back(Json{{"src", r.src},
                        {"dst", r.dst},
                        {"truncated", r.truncated},
                        {"dims_t", dims(r.dims_t)},
                        {"dims_t1", dims(r.dims_t1)}});
  }
  j["stabilization"] = stab;
  return j;
}

PackManifest manifest_from_json(const Json& j, const std::string& where) {
  expect_object(j, where, {"schema", "pack_id", "generator_version", "family", "n", "ydeg", "model", "field", "files",
                           "representatives", "stabilization"});
  check_schema(j, kManifestSchema, where);
  PackManifest m;
  m.pack_id = need_string(j, "pack_id", where);
  m.generator_version = need_string(j, "generator_version", where);
  m.family = need_string(j, "family", where);
  m.n = need_count(j, "n", where);
  if (j.contains("ydeg")) {
    if (!j["ydeg"].is_number_integer()) bad(at(where, "ydeg"), "expected an integer");
    m.ydeg = j["ydeg"].get<int>();
  }
  m.field = field_from_json(need(j, "field", where), at(where, "field"));
  const Json& files = need(j, "files", where);
  if (!files.is_object()) bad(at(where, "files"), "expected an object");
  for (auto it = files.begin(); it != files.end(); ++it) {
    if (!it.value().is_string()) bad(at(at(where, "files"), it.key()), "expected a hash string");
    m.hashes[it.key()] = it.value().get<std::string>();
  }
  const Field f(m.field);
  const Json& reps = need(j, "representatives", where);
  if (!reps.is_object()) bad(at(where, "representatives"), "expected an object");
  for (auto it = reps.begin(); it != reps.end(); ++it)
    m.representatives[it.key()] = sparse_from_json(f, it.value(), at(at(where, "representatives"), it.key()));
  if (j.contains("stabilization")) {
    const Json& st = need_array(j, "stabilization", where);
    for (std::size_t i = 0; i < st.size(); ++i) {
      const std::string w = at(at(where, "stabilization"), i);
      expect_object(st[i], w, {"src", "dst", "truncated", "dims_t", "dims_t1"});
      StabilizationRow r;
      r.src = need_string(st[i], "src", w);
      r.dst = need_string(st[i], "dst", w);
      r.truncated = need_bool(st[i], "truncated", w);
      auto dims = [&](const char* key) {
        std::vector<std::pair<int, std::size_t>> out;
        for (const auto& e : need_array(st[i], key, w)) {
          if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_unsigned())
            bad(at(w, key), "expected [degree, dim] pairs");
          out.emplace_back(e[0].get<int>(), e[1].get<std::size_t>());
        }
        return out;
      };
      r.dims_t = dims("dims_t");
      r.dims_t1 = dims("dims_t1");
      m.stabilization.push_back(std::move(r));
    }
  }
  return m;
}

PackManifest load_manifest(const fs::path& path) {
  return manifest_from_json(parse_file(path), path.filename().string());
}

LoadedTower load_tower(const fs::path& path) {
  LoadedTower out;
  fs::path file = path;
  if (fs::is_directory(path)) file = path / "tower.json";
  out.dir = file.parent_path();
  const std::string where = file.filename().string();
  const Json j = parse_file(file);
  expect_object(j, where, {"schema", "levels", "embeddings", "points", "manifest"});
  check_schema(j, kTowerSchema, where);
  const Json& lv = need_array(j, "levels", where);
  if (lv.empty()) bad(at(where, "levels"), "a tower needs at least one level");
  for (std::size_t i = 0; i < lv.size(); ++i) {
    if (!lv[i].is_string()) bad(at(at(where, "levels"), i), "expected a file name");
    out.tower.levels.push_back(load_datum(out.dir / lv[i].get<std::string>()));
  }
  const Json& em = need_array(j, "embeddings", where);
  if (em.size() + 1 != lv.size()) bad(at(where, "embeddings"), "expected one map per consecutive level pair");
  for (std::size_t i = 0; i < em.size(); ++i) {
    const std::string w = at(at(where, "embeddings"), i);
    if (!em[i].is_array()) bad(w, "expected an array of indices");
    std::vector<PointIndex> e;
    for (std::size_t k = 0; k < em[i].size(); ++k) {
      if (!em[i][k].is_number_unsigned()) bad(at(w, k), "expected a point index");
      e.push_back(em[i][k].get<std::size_t>());
    }
    out.tower.embeddings.push_back(std::move(e));
  }
  const Json& jp = need_array(j, "points", where);
  for (std::size_t i = 0; i < jp.size(); ++i) {
    const std::string w = at(at(where, "points"), i);
    expect_object(jp[i], w, {"id", "locally_free", "appears_at_level", "stabilizes_at_level"});
    TowerPoint p;
    p.id = need_string(jp[i], "id", w);
    p.locally_free = need_bool(jp[i], "locally_free", w);
    p.appears_at_level = need_count(jp[i], "appears_at_level", w);
    p.stabilizes_at_level = need_count(jp[i], "stabilizes_at_level", w);
    out.tower.points.push_back(p);
  }
  if (j.contains("manifest")) out.manifest = out.dir / need_string(j, "manifest", where);
  return out;
}

void write_pack(const fs::path& datum_path, const CategoryDatum& d, PackManifest m) {
  const std::string text = dump(datum_to_json(d));
  write_text(datum_path, text);
  m.hashes.clear();
  m.hashes[datum_path.filename().string()] = fnv1a64(text);
  fs::path man = datum_path;
  man.replace_extension(".manifest.json");
  write_text(man, dump(manifest_to_json(m)));
}

void write_tower(const fs::path& dir, const TruncationTower& t, PackManifest m) {
  fs::create_directories(dir);
  m.hashes.clear();
  Json j;
  j["schema"] = kTowerSchema;
  Json levels = Json::array();
  for (std::size_t n = 1; n <= t.height(); ++n) {
    const std::string name = "level" + std::to_string(n) + ".json";
    const std::string text = dump(datum_to_json(t.level(n)));
    write_text(dir / name, text);
    m.hashes[name] = fnv1a64(text);
    levels.push_back(name);
  }
  j["levels"] = levels;
  j["embeddings"] = t.embeddings;
  Json pts = Json::array();
  for (const auto& p : t.points)
    pts.push_back(Json{{"id", p.id},
                       {"locally_free", p.locally_free},
                       {"appears_at_level", p.appears_at_level},
                       {"stabilizes_at_level", p.stabilizes_at_level}});
  j["points"] = pts;
  j["manifest"] = "manifest.json";
  const std::string tower_text = dump(j);
  write_text(dir / "tower.json", tower_text);
  m.hashes["tower.json"] = fnv1a64(tower_text);
  write_text(dir / "manifest.json", dump(manifest_to_json(m)));
}

Json validation_to_json(const ValidationReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations) v.push_back(Json{{"kind", x.kind}, {"detail", x.detail}});
  return Json{{"valid", r.valid()}, {"violations", v}, {"notes", r.notes}};
}

Json set_to_json(const std::vector<std::string>& ids) { return Json(ids); }

namespace {
Json rank_json(const std::optional<std::size_t>& r) { return r ? Json(*r) : Json("infinity"); }
}  // namespace

Json cb_to_json(const CBReport& r) {
  Json ranks = Json::object();
  for (std::size_t i = 0; i < r.points.size(); ++i) ranks[r.points[i]] = rank_json(r.ranks[i]);
  Json chain = Json::array();
  for (const auto& s : r.derivative_chain) {
    Json step = Json::array();
    for (std::size_t i = 0; i < r.points.size(); ++i)
      if (s.test(i)) step.push_back(r.points[i]);
    chain.push_back(step);
  }
  return Json{{"space_rank", rank_json(r.space_rank)}, {"ranks", ranks}, {"derivative_chain", chain}};
}

Json property_to_json(const ClosureSpace& space, const PropertyReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations) {
    Json e{{"axiom", x.axiom}, {"x", space.names(x.x)}};
    if (x.y.size() == space.size()) e["y"] = space.names(x.y);
    v.push_back(e);
  }
  return Json{{"passed", r.passed}, {"checked", r.checked}, {"violations", v}};
}

Json tower_report_to_json(const TowerReport& r) {
  Json j{{"passed", r.passed}};
  j["failed_level"] = r.failed_level ? Json(*r.failed_level) : Json(nullptr);
  j["detail"] = r.detail;
  j["notes"] = r.notes;
  return j;
}

Json limit_to_json(const CategoryDatum& top, const LimitClosureResult& r) {
  static const char* kinds[] = {"excluded", "no_witness_up_to", "in_set"};
  Json j{{"verdict", kinds[static_cast<int>(r.kind)]}, {"bound", r.bound}, {"candidates_tried", r.candidates_tried}};
  if (r.witness) {
    j["witness"] = morphism_to_json(top, r.witness->map);
    j["verified_from_level"] = r.witness->verified_from_level;
  }
  return j;
}

Json chain_to_json(const TruncationTower& t, const WitnessChain& c) {
  Json entries = Json::array();
  for (const auto& e : c.entries) {
    Json j{{"prefix_level", e.prefix_level}, {"family", e.family}};
    if (e.witness) {
      const std::size_t at_level =
          std::max<std::size_t>({e.prefix_level, t.meta(c.excluded).appears_at_level, std::size_t{1}});
      j["witness"] = morphism_to_json(t.level(at_level), *e.witness);
      j["source"] = e.source;
      if (e.fails_at) {
        j["fails_at"] = *e.fails_at;
        j["failing_point"] = e.failing_point;
      } else {
        j["fails_at"] = "persists_to_top";
      }
    } else {
      j["witness"] = nullptr;
    }
    entries.push_back(j);
  }
  return Json{{"excluded", c.excluded}, {"mode", c.growing ? "growing" : "fixed"}, {"entries", entries}};
}

Json ar_to_json(const CategoryDatum& d, const RightAlmostSplitData& r) {
  return Json{{"target", d.point(r.target).id}, {"minimal", r.minimal}, {"map", morphism_to_json(d, r.map)}};
}

Json ar_stabilization_to_json(const ArStabilization& r) {
  Json lv = Json::array();
  for (const auto& l : r.per_level) lv.push_back(Json{{"level", l.level}, {"source", l.source}, {"blocks", l.blocks}});
  const bool stable = r.kind == ArStabilization::Kind::Stable;
  return Json{{"verdict", stable ? "stable" : "growing_up_to"}, {"level", r.level}, {"per_level", lv}};
}

Json tower_cb_to_json(const TowerCBReport& r) {
  Json j = cb_to_json(r.report);
  Json w = Json::array();
  for (const auto& x : r.warnings) w.push_back(Json{{"point", x.point}, {"kind", x.kind}, {"detail", x.detail}});
  j["warnings"] = w;
  return j;
}

Json certification_to_json(const CertificationReport& r) {
  Json j{{"passed", r.passed}, {"constants_checked", r.constants_checked}};
  if (!r.passed) j["first_divergence"] = r.first_divergence;
  return j;
}

}  // namespace spectra::io
