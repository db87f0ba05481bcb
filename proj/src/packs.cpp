#include "spectra/packs.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "spectra/error.hpp"

namespace spectra {

namespace {

Vector unit_vector(const Field& f, std::size_t n, std::size_t k) {
  Vector e = zero_vector(f, n);
  e[k] = f.one();
  return e;
}

Vector axpy(const Field& f, Vector acc, Scalar a, const Vector& v) {
  for (std::size_t k = 0; k < v.size(); ++k) acc[k] = f.add(acc[k], f.mul(a, v[k]));
  return acc;
}

std::vector<Vector> columns_of(const Matrix& m) {
  std::vector<Vector> out;
  for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(m.column(c));
  return out;
}

template <class T>
std::vector<T> maybe_reversed(std::vector<T> v, bool reversed) {
  if (reversed) std::reverse(v.begin(), v.end());
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Stable category assembly

std::string basis_name(const std::string& x, const std::string& y, std::size_t i) {
  return x + ">" + y + "." + std::to_string(i);
}

std::optional<Vector> StableBuild::reduce(PointIndex x, PointIndex y, const Vector& map) const {
  const StablePair& p = pair(x, y);
  std::vector<Vector> cols = p.basis;
  cols.insert(cols.end(), p.free_span.begin(), p.free_span.end());
  const Field& f = datum.field();
  if (cols.empty()) {
    if (!is_zero(map)) return std::nullopt;
    return Vector{};
  }
  Matrix b(f, map.size(), 1);
  for (std::size_t r = 0; r < map.size(); ++r) b(r, 0) = map[r];
  auto sol = solve_right(Matrix::from_columns(f, map.size(), cols), b);
  if (!sol) return std::nullopt;
  Vector out(p.basis.size());
  for (std::size_t k = 0; k < p.basis.size(); ++k) out[k] = (*sol)(k, 0);
  return out;
}

std::vector<Vector> local_radical(const CategoryDatum& d, PointIndex x) {
  const Field& f = d.field();
  const std::size_t m = d.hom_dim(x, x);
  const Vector& id = d.identity(x);
  if (m == 0) throw InconsistencyError("endomorphism ring of " + d.point(x).id + " is zero");
  auto left_mult = [&](std::size_t i) {
    Matrix l(f, m, m);
    for (std::size_t k = 0; k < m; ++k) {
      const Vector c = d.compose_basis(x, x, x, i, k);
      for (std::size_t r = 0; r < m; ++r) l(r, k) = c[r];
    }
    return l;
  };
  const bool trace_route = !f.is_prime() || m % f.characteristic() != 0;
  if (!trace_route && f.characteristic() > 10007)
    throw ResourceError("radical of " + d.point(x).id + ": characteristic divides the endomorphism dimension");
  SubspaceBuilder rad(f, m);
  for (std::size_t i = 0; i < m; ++i) {
    const Matrix l = left_mult(i);
    Scalar lambda = f.zero();
    if (trace_route) {
      Scalar tr = f.zero();
      for (std::size_t k = 0; k < m; ++k) tr = f.add(tr, l(k, k));
      lambda = f.div(tr, f.from_int(static_cast<std::int64_t>(m)));
    } else {
      bool found = false;
      for (std::uint32_t c = 0; c < f.characteristic() && !found; ++c) {
        Matrix shifted = l;
        for (std::size_t k = 0; k < m; ++k) shifted(k, k) = f.sub(shifted(k, k), f.from_int(c));
        if (rank(shifted) < m) {
          lambda = f.from_int(c);
          found = true;
        }
      }
      if (!found) throw InconsistencyError("endomorphism ring of " + d.point(x).id + " has no residue value");
    }
    rad.insert(axpy(f, d.basis_vector(x, x, i), f.neg(lambda), id));
  }
  if (rad.dim() + 1 != m)
    throw InconsistencyError("endomorphism ring of " + d.point(x).id + " is not local with residue field k");
  return rad.basis();
}

StableBuild build_stable_datum(const StableCategoryOracle& oracle, bool reversed) {
  const Field f = oracle.field();
  const auto pts = oracle.points();
  const std::size_t n = pts.size();
  StableBuild out;
  out.datum = CategoryDatum(f, pts);
  out.pairs.resize(n * n);
  for (PointIndex x = 0; x < n; ++x)
    for (PointIndex y = 0; y < n; ++y) {
      const std::size_t amb = oracle.ambient_dim(x, y);
      const auto homs = oracle.hom_basis(x, y, reversed);
      const auto frees = oracle.free_factoring(x, y, reversed);
      StablePair& p = out.pairs[x * n + y];
      p.ambient = amb;
      SubspaceBuilder hom_span(f, amb);
      for (const auto& h : homs) hom_span.insert(h);
      p.hom_dim = hom_span.dim();
      SubspaceBuilder acc(f, amb);
      for (const auto& v : frees) {
        if (!hom_span.contains(v))
          throw InconsistencyError("free-factoring map " + pts[x].id + " -> " + pts[y].id + " is not a homomorphism");
        if (acc.insert(v)) p.free_span.push_back(v);
      }
      for (const auto& h : homs)
        if (acc.insert(h)) p.basis.push_back(h);
      if (p.basis.size() + p.free_span.size() != p.hom_dim)
        throw InconsistencyError("stable dimension mismatch for " + pts[x].id + " -> " + pts[y].id);
      std::vector<std::string> names;
      for (std::size_t i = 0; i < p.basis.size(); ++i) {
        names.push_back(basis_name(pts[x].id, pts[y].id, i));
        out.representatives[names.back()] = p.basis[i];
      }
      out.datum.set_hom(x, y, std::move(names));
    }
  for (PointIndex x = 0; x < n; ++x)
    for (PointIndex y = 0; y < n; ++y)
      for (PointIndex z = 0; z < n; ++z) {
        const auto& fb = out.pair(x, y).basis;
        const auto& gb = out.pair(y, z).basis;
        for (std::size_t j = 0; j < gb.size(); ++j)
          for (std::size_t i = 0; i < fb.size(); ++i) {
            auto c = out.reduce(x, z, oracle.compose(x, y, z, gb[j], fb[i]));
            if (!c) throw InconsistencyError("composite is not a homomorphism");
            out.datum.set_compose(x, y, z, j, i, *c);
          }
      }
  for (PointIndex x = 0; x < n; ++x) {
    auto id = out.reduce(x, x, oracle.identity(x));
    if (!id) throw InconsistencyError("identity of " + pts[x].id + " is not a homomorphism");
    out.datum.set_identity(x, *id);
  }
  for (PointIndex x = 0; x < n; ++x) out.datum.set_radical(x, local_radical(out.datum, x));
  return out;
}

// ---------------------------------------------------------------------------
// k[x]/(x^(n+1))

TruncatedPolynomialOracle::TruncatedPolynomialOracle(ArtinianRingSpec spec) : spec_(spec), field_(spec.field) {
  if (spec.n < 1) throw InputError("ring parameter n must be at least 1");
}

std::vector<PointInfo> TruncatedPolynomialOracle::points() const {
  std::vector<PointInfo> out;
  for (std::size_t i = 1; i <= spec_.n; ++i) out.push_back({"M" + std::to_string(i), true});
  return out;
}

std::size_t TruncatedPolynomialOracle::ambient_dim(PointIndex, PointIndex y) const { return length(y); }

// Images of 1 in k[x]/(x^dst_len) killed by x^src_len.
std::vector<Vector> TruncatedPolynomialOracle::module_homs(std::size_t src_len, std::size_t dst_len,
                                                           bool reversed) const {
  Matrix mult(field_, dst_len, dst_len);
  for (std::size_t k = 0; k + src_len < dst_len; ++k) mult(k + src_len, k) = field_.one();
  return maybe_reversed(columns_of(kernel(mult)), reversed);
}

std::vector<Vector> TruncatedPolynomialOracle::hom_basis(PointIndex x, PointIndex y, bool reversed) const {
  return module_homs(length(x), length(y), reversed);
}

std::vector<Vector> TruncatedPolynomialOracle::free_factoring(PointIndex x, PointIndex y, bool reversed) const {
  const std::size_t ring_len = spec_.n + 1;
  const std::size_t ly = length(y);
  std::vector<Vector> out;
  for (const auto& u : module_homs(length(x), ring_len, false))
    for (std::size_t b = 0; b < ly; ++b) {
      Vector w = unit_vector(field_, ly, b);
      Vector prod = zero_vector(field_, ly);
      for (std::size_t a = 0; a < u.size(); ++a)
        for (std::size_t c = 0; a + c < ly; ++c) prod[a + c] = field_.add(prod[a + c], field_.mul(u[a], w[c]));
      out.push_back(std::move(prod));
    }
  return maybe_reversed(std::move(out), reversed);
}

Vector TruncatedPolynomialOracle::compose(PointIndex, PointIndex, PointIndex z, const Vector& g,
                                          const Vector& f) const {
  const std::size_t lz = length(z);
  Vector out = zero_vector(field_, lz);
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < g.size() && a + b < lz; ++b) out[a + b] = field_.add(out[a + b], field_.mul(f[a], g[b]));
  return out;
}

Vector TruncatedPolynomialOracle::identity(PointIndex x) const { return unit_vector(field_, length(x), 0); }

// ---------------------------------------------------------------------------
// Graded modules over S = k[x,y]/(x^2). S_e has basis y^e, x*y^(e-1).

GradedModulePresentation ideal_x() {
  GradedModulePresentation p;
  p.gen_degrees = {1};
  p.relations = {{{Monomial{1, 1, 0}}}};
  p.rel_degrees = {2};
  return p;
}

GradedModulePresentation ideal_x_yn(int n) {
  if (n < 1) throw InputError("ideal (x, y^n) needs n >= 1");
  GradedModulePresentation p;
  p.gen_degrees = {1, n};
  p.relations = {{{Monomial{1, 1, 0}}, {}}, {{Monomial{1, 0, n}}, {Monomial{-1, 1, 0}}}};
  p.rel_degrees = {2, n + 1};
  return p;
}

namespace {

std::size_t sdim(int e) { return e < 0 ? 0 : (e == 0 ? 1 : 2); }

Vector ring_mul(const Field& f, const Vector& a, int da, const Vector& b, int db) {
  Vector out = zero_vector(f, sdim(da + db));
  if (out.empty() || a.empty() || b.empty()) return out;
  out[0] = f.mul(a[0], b[0]);
  if (out.size() > 1) {
    Scalar xs = f.zero();
    if (b.size() > 1) xs = f.add(xs, f.mul(a[0], b[1]));
    if (a.size() > 1) xs = f.add(xs, f.mul(a[1], b[0]));
    out[1] = xs;
  }
  return out;
}

class GradedModule {
 public:
  GradedModule(Field f, GradedModulePresentation pres, bool drop_relations = false)
      : f_(f), pres_(std::move(pres)) {
    if (drop_relations) {
      pres_.relations.clear();
      pres_.rel_degrees.clear();
    }
  }

  const std::vector<int>& gens() const { return pres_.gen_degrees; }
  std::size_t relation_count() const { return pres_.relations.size(); }
  int rel_degree(std::size_t j) const { return pres_.rel_degrees[j]; }
  int min_gen() const { return *std::min_element(gens().begin(), gens().end()); }
  int max_gen() const { return *std::max_element(gens().begin(), gens().end()); }

  // Coefficient of relation j on generator i, an element of S_(r_j - g_i).
  Vector rel_entry(std::size_t j, std::size_t i) const {
    const int deg = pres_.rel_degrees[j] - gens()[i];
    Vector out = zero_vector(f_, sdim(deg));
    if (i >= pres_.relations[j].size()) return out;
    for (const auto& mono : pres_.relations[j][i]) {
      if (mono.xexp >= 2 || mono.coeff == 0) continue;
      if (mono.xexp + mono.yexp != deg) throw InputError("relation entry is not homogeneous");
      const std::size_t slot = mono.xexp == 0 ? 0 : 1;
      out[slot] = f_.add(out[slot], f_.from_int(mono.coeff));
    }
    return out;
  }

  std::size_t fdim(int e) const {
    std::size_t s = 0;
    for (int g : gens()) s += sdim(e - g);
    return s;
  }
  std::size_t offset(int e, std::size_t k) const {
    std::size_t s = 0;
    for (std::size_t i = 0; i < k; ++i) s += sdim(e - gens()[i]);
    return s;
  }
  Vector component(int e, const Vector& v, std::size_t k) const {
    const std::size_t o = offset(e, k);
    return Vector(v.begin() + static_cast<std::ptrdiff_t>(o),
                  v.begin() + static_cast<std::ptrdiff_t>(o + sdim(e - gens()[k])));
  }
  // s * v for s in S_ds, v in F_e.
  Vector scale(const Vector& s, int ds, int e, const Vector& v) const {
    Vector out = zero_vector(f_, fdim(e + ds));
    for (std::size_t k = 0; k < gens().size(); ++k) {
      const Vector c = ring_mul(f_, s, ds, component(e, v, k), e - gens()[k]);
      const std::size_t o = offset(e + ds, k);
      for (std::size_t t = 0; t < c.size(); ++t) out[o + t] = c[t];
    }
    return out;
  }

  std::size_t dim(int e) const { return slice(e).normal.size(); }
  Vector reduce(int e, const Vector& v) const {
    const Slice& s = slice(e);
    const Vector r = s.relations.reduce(v);
    Vector out(s.normal.size());
    for (std::size_t k = 0; k < s.normal.size(); ++k) out[k] = r[s.normal[k]];
    return out;
  }
  Vector lift(int e, const Vector& nf) const {
    const Slice& s = slice(e);
    Vector out = zero_vector(f_, fdim(e));
    for (std::size_t k = 0; k < s.normal.size(); ++k) out[s.normal[k]] = nf[k];
    return out;
  }
  // Generator k as an element of F_(g_k).
  Vector generator(std::size_t k) const {
    const int e = gens()[k];
    Vector v = zero_vector(f_, fdim(e));
    v[offset(e, k)] = f_.one();
    return v;
  }

 private:
  struct Slice {
    SubspaceBuilder relations;
    std::vector<std::size_t> normal;  // coordinates of F_e spanning a complement
  };

  const Slice& slice(int e) const {
    auto it = slices_.find(e);
    if (it != slices_.end()) return it->second;
    const std::size_t n = fdim(e);
    SubspaceBuilder rel(f_, n);
    for (std::size_t j = 0; j < relation_count(); ++j) {
      const int rd = rel_degree(j);
      if (e < rd) continue;
      Vector col = zero_vector(f_, fdim(rd));
      for (std::size_t i = 0; i < gens().size(); ++i) {
        const Vector c = rel_entry(j, i);
        const std::size_t o = offset(rd, i);
        for (std::size_t t = 0; t < c.size(); ++t) col[o + t] = c[t];
      }
      for (std::size_t m = 0; m < sdim(e - rd); ++m) rel.insert(scale(unit_vector(f_, sdim(e - rd), m), e - rd, rd, col));
    }
    std::vector<bool> pivot(n, false);
    for (const auto& row : rel.basis())
      for (std::size_t k = 0; k < n; ++k)
        if (!row[k].is_zero()) {
          pivot[k] = true;
          break;
        }
    std::vector<std::size_t> normal;
    for (std::size_t k = 0; k < n; ++k)
      if (!pivot[k]) normal.push_back(k);
    return slices_.emplace(e, Slice{std::move(rel), std::move(normal)}).first->second;
  }

  Field f_;
  GradedModulePresentation pres_;
  mutable std::map<int, Slice> slices_;
};

// Degree-d homomorphisms M -> N, as images of M's generators in normal form.
struct HomSlice {
  int degree = 0;
  std::vector<std::size_t> var_offset;  // per generator of M
  std::size_t vdim = 0;
  std::vector<Vector> basis;
  std::vector<Vector> free;  // spanning set of maps through the free cover of N
};

std::vector<std::size_t> var_offsets(const GradedModule& m, const GradedModule& n, int d, std::size_t& total) {
  std::vector<std::size_t> off;
  total = 0;
  for (int g : m.gens()) {
    off.push_back(total);
    total += n.dim(g + d);
  }
  return off;
}

std::vector<Vector> hom_kernel(const Field& f, const GradedModule& m, const GradedModule& n, int d) {
  std::size_t vdim = 0;
  const auto off = var_offsets(m, n, d, vdim);
  std::size_t rows = 0;
  std::vector<std::size_t> row_off;
  for (std::size_t j = 0; j < m.relation_count(); ++j) {
    row_off.push_back(rows);
    rows += n.dim(m.rel_degree(j) + d);
  }
  Matrix c(f, rows, vdim);
  for (std::size_t i = 0; i < m.gens().size(); ++i) {
    const int e = m.gens()[i] + d;
    for (std::size_t v = 0; v < n.dim(e); ++v) {
      const Vector lifted = n.lift(e, unit_vector(f, n.dim(e), v));
      for (std::size_t j = 0; j < m.relation_count(); ++j) {
        const int rd = m.rel_degree(j);
        const Vector img = n.reduce(rd + d, n.scale(m.rel_entry(j, i), rd - m.gens()[i], e, lifted));
        for (std::size_t t = 0; t < img.size(); ++t) c(row_off[j] + t, off[i] + v) = img[t];
      }
    }
  }
  if (vdim == 0) return {};
  return columns_of(kernel(c));
}

}  // namespace

struct GradedAInfOracle::Impl {
  Field field;
  int ydeg = 0;
  std::vector<PointInfo> pts;
  std::vector<GradedModule> modules;
  std::vector<GradedModule> covers;  // free module on the same generators
  struct PairData {
    int dlo = 0;
    std::vector<HomSlice> slices;  // degrees dlo..ydeg
    std::size_t ambient = 0;
    std::vector<std::size_t> slice_offset;
  };
  mutable std::map<std::pair<PointIndex, PointIndex>, PairData> cache;

  int dlo(PointIndex x, PointIndex y) const { return modules[y].min_gen() - modules[x].max_gen(); }

  HomSlice compute_slice(PointIndex x, PointIndex y, int d) const {
    HomSlice s;
    s.degree = d;
    s.var_offset = var_offsets(modules[x], modules[y], d, s.vdim);
    s.basis = hom_kernel(field, modules[x], modules[y], d);
    const auto& m = modules[x];
    for (const auto& psi : hom_kernel(field, m, covers[y], d)) {
      std::size_t cover_dim = 0;
      const auto cover_off = var_offsets(m, covers[y], d, cover_dim);
      Vector v = zero_vector(field, s.vdim);
      for (std::size_t i = 0; i < m.gens().size(); ++i) {
        const int e = m.gens()[i] + d;
        const Vector part(psi.begin() + static_cast<std::ptrdiff_t>(cover_off[i]),
                          psi.begin() + static_cast<std::ptrdiff_t>(cover_off[i] + covers[y].dim(e)));
        const Vector img = modules[y].reduce(e, covers[y].lift(e, part));
        for (std::size_t t = 0; t < img.size(); ++t) v[s.var_offset[i] + t] = img[t];
      }
      s.free.push_back(std::move(v));
    }
    return s;
  }

  const PairData& pair(PointIndex x, PointIndex y) const {
    auto key = std::make_pair(x, y);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    PairData p;
    p.dlo = dlo(x, y);
    for (int d = p.dlo; d <= ydeg; ++d) {
      p.slice_offset.push_back(p.ambient);
      p.slices.push_back(compute_slice(x, y, d));
      p.ambient += p.slices.back().vdim;
    }
    return cache.emplace(key, std::move(p)).first->second;
  }

  std::vector<Vector> embed(const PairData& p, bool use_free, bool reversed) const {
    std::vector<Vector> out;
    for (std::size_t k = 0; k < p.slices.size(); ++k)
      for (const auto& v : use_free ? p.slices[k].free : p.slices[k].basis) {
        Vector full = zero_vector(field, p.ambient);
        std::copy(v.begin(), v.end(), full.begin() + static_cast<std::ptrdiff_t>(p.slice_offset[k]));
        out.push_back(std::move(full));
      }
    return maybe_reversed(std::move(out), reversed);
  }
};

GradedAInfOracle::GradedAInfOracle(std::size_t levels, int ydeg, FieldSpec field) : impl_(std::make_unique<Impl>()) {
  if (levels < 1) throw InputError("tower needs at least one level");
  if (field.kind == FieldKind::Prime && field.p == 2) throw InputError("characteristic 2 is refused for this model");
  impl_->field = Field(field);
  impl_->ydeg = ydeg;
  impl_->pts.push_back({"I", false});
  impl_->modules.emplace_back(impl_->field, ideal_x());
  impl_->covers.emplace_back(impl_->field, ideal_x(), true);
  for (std::size_t n = 1; n <= levels; ++n) {
    impl_->pts.push_back({"I" + std::to_string(n), true});
    impl_->modules.emplace_back(impl_->field, ideal_x_yn(static_cast<int>(n)));
    impl_->covers.emplace_back(impl_->field, ideal_x_yn(static_cast<int>(n)), true);
  }
}

GradedAInfOracle::~GradedAInfOracle() = default;

Field GradedAInfOracle::field() const { return impl_->field; }
std::vector<PointInfo> GradedAInfOracle::points() const { return impl_->pts; }
int GradedAInfOracle::ydeg() const { return impl_->ydeg; }

std::size_t GradedAInfOracle::ambient_dim(PointIndex x, PointIndex y) const { return impl_->pair(x, y).ambient; }

std::vector<Vector> GradedAInfOracle::hom_basis(PointIndex x, PointIndex y, bool reversed) const {
  return impl_->embed(impl_->pair(x, y), false, reversed);
}

std::vector<Vector> GradedAInfOracle::free_factoring(PointIndex x, PointIndex y, bool reversed) const {
  return impl_->embed(impl_->pair(x, y), true, reversed);
}

Vector GradedAInfOracle::compose(PointIndex x, PointIndex y, PointIndex z, const Vector& g, const Vector& f) const {
  const Impl& im = *impl_;
  const Field& k = im.field;
  const auto& pf = im.pair(x, y);
  const auto& pg = im.pair(y, z);
  const auto& ph = im.pair(x, z);
  const GradedModule& m = im.modules[x];
  const GradedModule& n = im.modules[y];
  const GradedModule& q = im.modules[z];
  Vector out = zero_vector(k, ph.ambient);
  for (std::size_t a = 0; a < pf.slices.size(); ++a) {
    const int d1 = pf.slices[a].degree;
    const Vector fs(f.begin() + static_cast<std::ptrdiff_t>(pf.slice_offset[a]),
                    f.begin() + static_cast<std::ptrdiff_t>(pf.slice_offset[a] + pf.slices[a].vdim));
    if (is_zero(fs)) continue;
    for (std::size_t b = 0; b < pg.slices.size(); ++b) {
      const int d2 = pg.slices[b].degree;
      const int d = d1 + d2;
      if (d < ph.dlo || d > im.ydeg) continue;
      const Vector gs(g.begin() + static_cast<std::ptrdiff_t>(pg.slice_offset[b]),
                      g.begin() + static_cast<std::ptrdiff_t>(pg.slice_offset[b] + pg.slices[b].vdim));
      if (is_zero(gs)) continue;
      const std::size_t hs = static_cast<std::size_t>(d - ph.dlo);
      const auto& hslice = ph.slices[hs];
      // lifts of g(generator_k of N) in the free cover of Q
      std::vector<Vector> g_lifts;
      for (std::size_t t = 0; t < n.gens().size(); ++t) {
        const int e = n.gens()[t] + d2;
        const Vector part(gs.begin() + static_cast<std::ptrdiff_t>(pg.slices[b].var_offset[t]),
                          gs.begin() + static_cast<std::ptrdiff_t>(pg.slices[b].var_offset[t] + q.dim(e)));
        g_lifts.push_back(q.lift(e, part));
      }
      for (std::size_t i = 0; i < m.gens().size(); ++i) {
        const int e1 = m.gens()[i] + d1;
        const Vector part(fs.begin() + static_cast<std::ptrdiff_t>(pf.slices[a].var_offset[i]),
                          fs.begin() + static_cast<std::ptrdiff_t>(pf.slices[a].var_offset[i] + n.dim(e1)));
        const Vector lifted = n.lift(e1, part);
        const int e = e1 + d2;
        Vector acc = zero_vector(k, q.fdim(e));
        for (std::size_t t = 0; t < n.gens().size(); ++t) {
          const Vector coeff = n.component(e1, lifted, t);
          const int cd = e1 - n.gens()[t];
          acc = axpy(k, std::move(acc), k.one(), q.scale(coeff, cd, n.gens()[t] + d2, g_lifts[t]));
        }
        const Vector img = q.reduce(e, acc);
        const std::size_t o = ph.slice_offset[hs] + hslice.var_offset[i];
        for (std::size_t t = 0; t < img.size(); ++t) out[o + t] = k.add(out[o + t], img[t]);
      }
    }
  }
  return out;
}

Vector GradedAInfOracle::identity(PointIndex x) const {
  const Impl& im = *impl_;
  const auto& p = im.pair(x, x);
  const GradedModule& m = im.modules[x];
  Vector out = zero_vector(im.field, p.ambient);
  const std::size_t s = static_cast<std::size_t>(0 - p.dlo);
  for (std::size_t i = 0; i < m.gens().size(); ++i) {
    const Vector img = m.reduce(m.gens()[i], m.generator(i));
    const std::size_t o = p.slice_offset[s] + p.slices[s].var_offset[i];
    for (std::size_t t = 0; t < img.size(); ++t) out[o + t] = img[t];
  }
  return out;
}

std::vector<std::pair<int, std::size_t>> GradedAInfOracle::stable_degree_dims(PointIndex x, PointIndex y,
                                                                              int extra) const {
  std::vector<std::pair<int, std::size_t>> out;
  const Impl& im = *impl_;
  for (int d = im.dlo(x, y); d <= im.ydeg + extra; ++d) {
    const HomSlice s = im.compute_slice(x, y, d);
    SubspaceBuilder fr(im.field, s.vdim);
    for (const auto& v : s.free) fr.insert(v);
    out.emplace_back(d, s.basis.size() - fr.dim());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pack generation

CategoryDatum gen_an_pack(const ArtinianRingSpec& spec) { return generate_an_pack(spec).datum; }

GeneratedPack generate_an_pack(const ArtinianRingSpec& spec) {
  TruncatedPolynomialOracle oracle(spec);
  StableBuild b = build_stable_datum(oracle);
  const auto rep = validate_datum(b.datum);
  if (!rep.valid()) throw InconsistencyError("generated pack fails validation: " + rep.violations.front().detail);
  GeneratedPack out;
  out.manifest.pack_id = "a" + std::to_string(spec.n);
  out.manifest.generator_version = "1";
  out.manifest.family = "an";
  out.manifest.n = spec.n;
  out.manifest.field = spec.field;
  out.manifest.representatives = std::move(b.representatives);
  out.datum = std::move(b.datum);
  return out;
}

GeneratedTower gen_ainf_tower(std::size_t levels, int ydeg, FieldSpec field) {
  if (levels < 1) throw InputError("tower needs at least one level");
  if (ydeg < static_cast<int>(3 * levels))
    throw InputError("truncation degree must be at least 3 x levels (" + std::to_string(3 * levels) + ")");
  GradedAInfOracle oracle(levels, ydeg, field);
  StableBuild b = build_stable_datum(oracle);
  const auto rep = validate_datum(b.datum);
  if (!rep.valid()) throw InconsistencyError("generated tower top fails validation: " + rep.violations.front().detail);

  GeneratedTower out;
  PackManifest& man = out.manifest;
  man.pack_id = "ainf-tower";
  man.generator_version = "1";
  man.family = "ainf";
  man.n = levels;
  man.ydeg = ydeg;
  man.field = field;
  const auto pts = oracle.points();
  for (PointIndex x = 0; x < pts.size(); ++x)
    for (PointIndex y = 0; y < pts.size(); ++y) {
      StabilizationRow row;
      row.src = pts[x].id;
      row.dst = pts[y].id;
      row.truncated = !pts[x].locally_free && !pts[y].locally_free;
      row.dims_t1 = oracle.stable_degree_dims(x, y, 1);
      row.dims_t.assign(row.dims_t1.begin(), row.dims_t1.end() - 1);
      if (!row.truncated && row.dims_t1.back().second != 0)
        throw ResourceError("stable homs " + row.src + " -> " + row.dst + " do not vanish in degree " +
                            std::to_string(ydeg + 1) + "; increase the truncation degree");
      man.stabilization.push_back(std::move(row));
    }
  man.representatives = std::move(b.representatives);

  TruncationTower& t = out.tower;
  for (std::size_t n = 1; n <= levels; ++n) {
    std::vector<PointIndex> keep;
    for (PointIndex i = 0; i <= n; ++i) keep.push_back(i);
    t.levels.push_back(b.datum.restrict_to(keep));
    if (n > 1) {
      std::vector<PointIndex> emb;
      for (PointIndex i = 0; i < n; ++i) emb.push_back(i);
      t.embeddings.push_back(std::move(emb));
    }
  }
  t.points.push_back({"I", false, 1, 1});
  for (std::size_t n = 1; n <= levels; ++n) t.points.push_back({"I" + std::to_string(n), true, n, n});
  return out;
}

std::unique_ptr<StableCategoryOracle> oracle_for(const PackManifest& manifest) {
  if (manifest.family == "an")
    return std::make_unique<TruncatedPolynomialOracle>(ArtinianRingSpec{manifest.n, manifest.field});
  if (manifest.family == "ainf") return std::make_unique<GradedAInfOracle>(manifest.n, manifest.ydeg, manifest.field);
  throw InputError("unknown pack family '" + manifest.family + "'");
}

CertificationReport verify_pack(const CategoryDatum& d, const PackManifest& manifest) {
  const auto oracle = oracle_for(manifest);
  return verify_pack(d, manifest, build_stable_datum(*oracle, true));
}

CertificationReport verify_pack(const CategoryDatum& d, const PackManifest& manifest, const StableBuild& rev) {
  CertificationReport rep;
  const Field& f = d.field();
  auto fail = [&](std::string why) {
    rep.passed = false;
    rep.first_divergence = std::move(why);
    return rep;
  };
  if (!(f == rev.datum.field())) return fail("field differs from the manifest");
  const std::size_t n = d.point_count();
  std::vector<PointIndex> o(n);
  for (PointIndex x = 0; x < n; ++x) {
    auto idx = rev.datum.find_point(d.point(x).id);
    if (!idx) return fail("point " + d.point(x).id + " is not produced by the oracle");
    o[x] = *idx;
  }
  // base change: columns are reversed-build coordinates of the recorded representatives
  std::vector<Matrix> change(n * n);
  for (PointIndex x = 0; x < n; ++x)
    for (PointIndex y = 0; y < n; ++y) {
      const auto& names = d.hom_basis(x, y);
      const std::size_t dim = rev.datum.hom_dim(o[x], o[y]);
      const std::string pair = d.point(x).id + " -> " + d.point(y).id;
      if (names.size() != dim)
        return fail("hom " + pair + ": dimension " + std::to_string(names.size()) + ", recomputed " +
                    std::to_string(dim));
      std::vector<Vector> cols;
      for (const auto& name : names) {
        auto it = manifest.representatives.find(name);
        if (it == manifest.representatives.end()) return fail("no representative recorded for " + name);
        if (it->second.size() != rev.pair(o[x], o[y]).ambient)
          return fail("representative of " + name + " has the wrong length");
        const auto c = rev.reduce(o[x], o[y], it->second);
        if (!c) return fail("representative of " + name + " is not a homomorphism");
        cols.push_back(*c);
      }
      Matrix m = Matrix::from_columns(f, dim, cols);
      if (rank(m) != dim) return fail("representatives of hom " + pair + " are not a stable basis");
      change[x * n + y] = std::move(m);
    }
  auto C = [&](PointIndex x, PointIndex y) -> const Matrix& { return change[x * n + y]; };

  for (PointIndex x = 0; x < n; ++x) {
    ++rep.constants_checked;
    if (C(x, x).apply(d.identity(x)) != rev.datum.identity(o[x])) return fail("identity of " + d.point(x).id);
  }
  for (PointIndex x = 0; x < n; ++x)
    for (PointIndex y = 0; y < n; ++y)
      for (PointIndex z = 0; z < n; ++z) {
        if (d.hom_dim(x, y) == 0 || d.hom_dim(y, z) == 0) continue;
        for (std::size_t j = 0; j < d.hom_dim(y, z); ++j)
          for (std::size_t i = 0; i < d.hom_dim(x, y); ++i) {
            const Vector rhs = rev.datum.compose(o[x], o[y], o[z], C(y, z).column(j), C(x, y).column(i));
            const Vector have = d.compose_basis(x, y, z, j, i);
            Vector want;
            if (d.hom_dim(x, z) > 0) {
              Matrix b(f, rhs.size(), 1);
              for (std::size_t r = 0; r < rhs.size(); ++r) b(r, 0) = rhs[r];
              want = solve_right(C(x, z), b)->column(0);
            }
            for (std::size_t k = 0; k < have.size(); ++k) {
              ++rep.constants_checked;
              if (have[k] != want[k])
                return fail("compose g=" + d.hom_basis(y, z)[j] + " f=" + d.hom_basis(x, y)[i] + " coefficient of " +
                            d.hom_basis(x, z)[k] + ": file has " + f.format(have[k]) + ", recomputed " +
                            f.format(want[k]));
            }
          }
      }
  for (PointIndex x = 0; x < n; ++x) {
    SubspaceBuilder mine(f, d.hom_dim(x, x)), theirs(f, d.hom_dim(x, x));
    for (const auto& r : d.radical(x)) mine.insert(C(x, x).apply(r));
    for (const auto& r : rev.datum.radical(o[x])) theirs.insert(r);
    ++rep.constants_checked;
    if (mine.basis() != theirs.basis()) return fail("radical of " + d.point(x).id);
  }
  return rep;
}

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace spectra
