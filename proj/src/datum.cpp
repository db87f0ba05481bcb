#include "spectra/datum.hpp"

#include <random>
#include <sstream>

#include "spectra/error.hpp"

namespace spectra {

CategoryDatum::CategoryDatum(Field field, std::vector<PointInfo> points)
    : field_(field), points_(std::move(points)) {
  const std::size_t m = points_.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (points_[i].id == points_[j].id) throw InputError("duplicate point id '" + points_[i].id + "'");
  dims_.assign(m * m, 0);
  basis_.assign(m * m, {});
  compose_.assign(m * m * m, {});
  identities_.assign(m, {});
  radicals_.assign(m, {});
}

std::optional<PointIndex> CategoryDatum::find_point(const std::string& id) const {
  for (PointIndex i = 0; i < points_.size(); ++i)
    if (points_[i].id == id) return i;
  return std::nullopt;
}

PointIndex CategoryDatum::point_index(const std::string& id) const {
  if (auto p = find_point(id)) return *p;
  throw InputError("unknown point '" + id + "'");
}

PointSet CategoryDatum::parse_set(const std::vector<std::string>& ids) const {
  PointSet s = empty_set();
  for (const auto& id : ids) s.set(point_index(id));
  return s;
}

std::vector<std::string> CategoryDatum::names(const PointSet& s) const {
  std::vector<std::string> out;
  for (PointIndex i = 0; i < points_.size(); ++i)
    if (s.test(i)) out.push_back(points_[i].id);
  return out;
}

void CategoryDatum::set_hom(PointIndex x, PointIndex y, std::vector<std::string> basis) {
  if (x >= n() || y >= n()) throw InputError("hom index out of range");
  for (const auto& name : basis_[x * n() + y]) basis_index_.erase(name);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis_index_.count(basis[i])) throw InputError("duplicate basis name '" + basis[i] + "'");
    basis_index_[basis[i]] = {x, y, i};
  }
  dims_[x * n() + y] = basis.size();
  basis_[x * n() + y] = std::move(basis);
  // invalidate tensors touching (x,y)
  for (PointIndex z = 0; z < n(); ++z) {
    compose_[triple(x, y, z)].clear();
    compose_[triple(z, x, y)].clear();
    compose_[triple(x, z, y)].clear();
  }
}

std::optional<CategoryDatum::BasisRef> CategoryDatum::find_basis(const std::string& name) const {
  auto it = basis_index_.find(name);
  if (it == basis_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Scalar>& CategoryDatum::tensor(PointIndex x, PointIndex y, PointIndex z) {
  auto& t = compose_[triple(x, y, z)];
  const std::size_t size = hom_dim(y, z) * hom_dim(x, y) * hom_dim(x, z);
  if (t.size() != size) t.assign(size, field_.zero());
  return t;
}

void CategoryDatum::set_compose(PointIndex x, PointIndex y, PointIndex z, std::size_t g_index,
                                std::size_t f_index, const Vector& result) {
  if (g_index >= hom_dim(y, z) || f_index >= hom_dim(x, y) || result.size() != hom_dim(x, z))
    throw InputError("composition entry out of range");
  auto& t = tensor(x, y, z);
  const std::size_t dxz = hom_dim(x, z);
  const std::size_t base = (g_index * hom_dim(x, y) + f_index) * dxz;
  for (std::size_t k = 0; k < dxz; ++k) t[base + k] = result[k];
}

Vector CategoryDatum::compose_basis(PointIndex x, PointIndex y, PointIndex z, std::size_t g_index,
                                   std::size_t f_index) const {
  const std::size_t dxz = hom_dim(x, z);
  Vector out(dxz, field_.zero());
  const auto& t = compose_[triple(x, y, z)];
  if (t.empty()) return out;
  const std::size_t base = (g_index * hom_dim(x, y) + f_index) * dxz;
  for (std::size_t k = 0; k < dxz; ++k) out[k] = t[base + k];
  return out;
}

Vector CategoryDatum::compose(PointIndex x, PointIndex y, PointIndex z, const Vector& g, const Vector& f) const {
  const std::size_t dxy = hom_dim(x, y), dyz = hom_dim(y, z), dxz = hom_dim(x, z);
  if (g.size() != dyz || f.size() != dxy) throw InputError("compose: element dimension mismatch");
  Vector out(dxz, field_.zero());
  const auto& t = compose_[triple(x, y, z)];
  if (t.empty() || dxz == 0) return out;
  for (std::size_t j = 0; j < dyz; ++j) {
    if (g[j].is_zero()) continue;
    for (std::size_t i = 0; i < dxy; ++i) {
      if (f[i].is_zero()) continue;
      const Scalar c = field_.mul(g[j], f[i]);
      const std::size_t base = (j * dxy + i) * dxz;
      for (std::size_t k = 0; k < dxz; ++k)
        if (!t[base + k].is_zero()) out[k] = field_.add(out[k], field_.mul(c, t[base + k]));
    }
  }
  return out;
}

void CategoryDatum::set_identity(PointIndex x, Vector element) {
  if (element.size() != hom_dim(x, x)) throw InputError("identity of '" + points_.at(x).id + "' has wrong length");
  identities_.at(x) = std::move(element);
}

void CategoryDatum::set_radical(PointIndex x, std::vector<Vector> basis) {
  for (const auto& v : basis)
    if (v.size() != hom_dim(x, x)) throw InputError("radical element of '" + points_.at(x).id + "' has wrong length");
  radicals_.at(x) = std::move(basis);
}

Vector CategoryDatum::basis_vector(PointIndex x, PointIndex y, std::size_t i) const {
  Vector v = zero(x, y);
  v.at(i) = field_.one();
  return v;
}

CategoryDatum CategoryDatum::restrict_to(const std::vector<PointIndex>& keep) const {
  std::vector<PointInfo> pts;
  for (auto k : keep) pts.push_back(points_.at(k));
  CategoryDatum out(field_, pts);
  const std::size_t m = keep.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) out.set_hom(a, b, hom_basis(keep[a], keep[b]));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c) {
        const auto& t = compose_[triple(keep[a], keep[b], keep[c])];
        if (!t.empty()) out.tensor(a, b, c) = t;
      }
  for (std::size_t a = 0; a < m; ++a) {
    out.identities_[a] = identities_.at(keep[a]);
    out.radicals_[a] = radicals_.at(keep[a]);
  }
  return out;
}

std::map<PointIndex, std::size_t> AddObject::multiplicities() const {
  std::map<PointIndex, std::size_t> m;
  for (auto p : summands) ++m[p];
  return m;
}

AddObject AddObject::from_multiplicities(const std::map<PointIndex, std::size_t>& mult) {
  AddObject a;
  for (const auto& [p, k] : mult)
    for (std::size_t i = 0; i < k; ++i) a.summands.push_back(p);
  return a;
}

AddMorphism AddMorphism::zero(const CategoryDatum& d, AddObject source, AddObject target) {
  AddMorphism g{std::move(source), std::move(target), {}};
  g.blocks.resize(g.target.size());
  for (std::size_t t = 0; t < g.target.size(); ++t)
    for (std::size_t s = 0; s < g.source.size(); ++s)
      g.blocks[t].push_back(d.zero(g.source.summands[s], g.target.summands[t]));
  return g;
}

AddMorphism AddMorphism::identity(const CategoryDatum& d, PointIndex y) {
  AddMorphism g = zero(d, AddObject{{y}}, AddObject{{y}});
  g.blocks[0][0] = d.identity(y);
  return g;
}

void AddMorphism::check(const CategoryDatum& d) const {
  if (blocks.size() != target.size()) throw InputError("morphism block rows do not match target");
  for (std::size_t t = 0; t < target.size(); ++t) {
    if (blocks[t].size() != source.size()) throw InputError("morphism block columns do not match source");
    for (std::size_t s = 0; s < source.size(); ++s)
      if (blocks[t][s].size() != d.hom_dim(source.summands[s], target.summands[t]))
        throw InputError("morphism block has wrong hom dimension");
  }
  for (auto p : source.summands)
    if (p >= d.point_count()) throw InputError("morphism source references unknown point");
  for (auto p : target.summands)
    if (p >= d.point_count()) throw InputError("morphism target references unknown point");
}

AddMorphism compose(const CategoryDatum& d, const AddMorphism& g, const AddMorphism& h) {
  if (g.source.summands != h.target.summands) throw InputError("compose: middle objects differ");
  const Field& f = d.field();
  AddMorphism out = AddMorphism::zero(d, h.source, g.target);
  for (std::size_t t = 0; t < g.target.size(); ++t)
    for (std::size_t s = 0; s < h.source.size(); ++s) {
      Vector acc = d.zero(h.source.summands[s], g.target.summands[t]);
      for (std::size_t m = 0; m < h.target.size(); ++m) {
        Vector part = d.compose(h.source.summands[s], h.target.summands[m], g.target.summands[t], g.blocks[t][m],
                                h.blocks[m][s]);
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] = f.add(acc[k], part[k]);
      }
      out.blocks[t][s] = std::move(acc);
    }
  return out;
}

namespace {

std::string name_of(const CategoryDatum& d, PointIndex x, PointIndex y, std::size_t i) {
  return d.hom_basis(x, y).at(i);
}

// Matrix of left multiplication by u on End(x), columns indexed by the basis.
Matrix left_multiplication(const CategoryDatum& d, PointIndex x, const Vector& u) {
  const std::size_t dim = d.hom_dim(x, x);
  std::vector<Vector> cols;
  for (std::size_t b = 0; b < dim; ++b) cols.push_back(d.compose(x, x, x, u, d.basis_vector(x, x, b)));
  return Matrix::from_columns(d.field(), dim, cols);
}

void check_identities(const CategoryDatum& d, ValidationReport& rep) {
  const std::size_t n = d.point_count();
  for (PointIndex x = 0; x < n; ++x)
    for (PointIndex y = 0; y < n; ++y)
      for (std::size_t i = 0; i < d.hom_dim(x, y); ++i) {
        const Vector f = d.basis_vector(x, y, i);
        if (d.compose(x, y, y, d.identity(y), f) != f)
          rep.violations.push_back({"identity", "id_" + d.point(y).id + " o " + name_of(d, x, y, i) + " != " +
                                                    name_of(d, x, y, i)});
        if (d.compose(x, x, y, f, d.identity(x)) != f)
          rep.violations.push_back({"identity", name_of(d, x, y, i) + " o id_" + d.point(x).id + " != " +
                                                    name_of(d, x, y, i)});
      }
}

void check_associativity(const CategoryDatum& d, ValidationReport& rep) {
  const std::size_t n = d.point_count();
  for (PointIndex w = 0; w < n; ++w)
    for (PointIndex x = 0; x < n; ++x) {
      const std::size_t dwx = d.hom_dim(w, x);
      if (dwx == 0) continue;
      for (PointIndex y = 0; y < n; ++y) {
        const std::size_t dxy = d.hom_dim(x, y);
        if (dxy == 0) continue;
        // g o f for all basis pairs, reused across z
        std::vector<Vector> gf(dxy * dwx);
        for (std::size_t j = 0; j < dxy; ++j)
          for (std::size_t i = 0; i < dwx; ++i) gf[j * dwx + i] = d.compose_basis(w, x, y, j, i);
        for (PointIndex z = 0; z < n; ++z) {
          const std::size_t dyz = d.hom_dim(y, z);
          for (std::size_t l = 0; l < dyz; ++l) {
            const Vector h = d.basis_vector(y, z, l);
            for (std::size_t j = 0; j < dxy; ++j) {
              const Vector hg = d.compose_basis(x, y, z, l, j);
              for (std::size_t i = 0; i < dwx; ++i) {
                const Vector left = d.compose(w, x, z, hg, d.basis_vector(w, x, i));
                const Vector right = d.compose(w, y, z, h, gf[j * dwx + i]);
                if (left != right)
                  rep.violations.push_back({"associativity", "(" + name_of(d, y, z, l) + ", " + name_of(d, x, y, j) +
                                                                 ", " + name_of(d, w, x, i) + ")"});
              }
            }
          }
        }
      }
    }
}

void check_radical(const CategoryDatum& d, PointIndex x, ValidationReport& rep) {
  const Field& f = d.field();
  const std::size_t dim = d.hom_dim(x, x);
  const std::string& id = d.point(x).id;
  SubspaceBuilder rad(f, dim);
  for (const auto& r : d.radical(x)) rad.insert(r);
  if (rad.dim() != d.radical(x).size())
    rep.violations.push_back({"radical_dependent", "radical basis of " + id + " is linearly dependent"});

  bool ideal = true;
  for (const auto& r : rad.basis())
    for (std::size_t b = 0; b < dim && ideal; ++b) {
      const Vector e = d.basis_vector(x, x, b);
      if (!rad.contains(d.compose(x, x, x, r, e)) || !rad.contains(d.compose(x, x, x, e, r))) {
        rep.violations.push_back({"radical_not_ideal", "radical of " + id + " is not closed under " +
                                                           d.hom_basis(x, x)[b]});
        ideal = false;
      }
    }
  if (!ideal) return;

  // nilpotency: rad^k -> 0
  std::vector<Vector> power = rad.basis();
  for (std::size_t step = 0; !power.empty(); ++step) {
    if (step > dim + 1) {
      rep.violations.push_back({"radical_not_nilpotent", "radical of " + id + " is not nilpotent"});
      return;
    }
    SubspaceBuilder next(f, dim);
    for (const auto& a : power)
      for (const auto& b : rad.basis()) next.insert(d.compose(x, x, x, a, b));
    if (next.dim() == power.size()) {
      rep.violations.push_back({"radical_not_nilpotent", "radical of " + id + " is not nilpotent"});
      return;
    }
    power = next.basis();
  }

  // End/rad is a division algebra: every nonzero coset is a unit.
  std::vector<Vector> complement;
  SubspaceBuilder span = rad;
  for (std::size_t b = 0; b < dim; ++b) {
    Vector e = d.basis_vector(x, x, b);
    if (span.insert(e)) complement.push_back(std::move(e));
  }
  const std::size_t q = complement.size();
  if (q == 0) {
    rep.violations.push_back({"quotient_not_division", "End(" + id + ")/rad is zero"});
    return;
  }
  if (q == 1) {
    // End/rad = k·[id] whenever id is outside rad
    if (rad.contains(d.identity(x)))
      rep.violations.push_back({"quotient_not_division", "identity of " + id + " lies in its radical"});
    return;
  }
  auto is_unit = [&](const Vector& u) { return rank(left_multiplication(d, x, u)) == dim; };
  auto combo = [&](const std::vector<Scalar>& c) {
    Vector u = d.zero(x, x);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t k = 0; k < dim; ++k) u[k] = f.add(u[k], f.mul(c[i], complement[i][k]));
    return u;
  };
  double cosets = 1;
  if (f.is_prime())
    for (std::size_t i = 0; i < q; ++i) cosets *= f.spec().p;
  if (f.is_prime() && cosets <= 1e4) {
    std::vector<Scalar> c(q, f.zero());
    const std::int64_t p = f.spec().p;
    for (std::size_t count = 1; count < static_cast<std::size_t>(cosets); ++count) {
      std::size_t rest = count;
      for (std::size_t i = 0; i < q; ++i) {
        c[i] = f.from_int(static_cast<std::int64_t>(rest % static_cast<std::size_t>(p)));
        rest /= static_cast<std::size_t>(p);
      }
      if (!is_unit(combo(c))) {
        rep.violations.push_back({"quotient_not_division", "End(" + id + ")/rad has a nonzero non-unit coset"});
        return;
      }
    }
    return;
  }
  rep.notes.push_back("End(" + id + ")/rad division check sampled (" + std::to_string(q) + "-dim quotient)");
  std::mt19937_64 rng(0x5eed0000 + x);
  std::uniform_int_distribution<std::int64_t> dist(f.is_prime() ? 0 : -5, f.is_prime() ? f.spec().p - 1 : 5);
  for (int s = 0; s < 2000; ++s) {
    std::vector<Scalar> c(q);
    bool nonzero = false;
    for (auto& ci : c) {
      ci = f.from_int(dist(rng));
      nonzero = nonzero || !ci.is_zero();
    }
    if (nonzero && !is_unit(combo(c))) {
      rep.violations.push_back({"quotient_not_division", "End(" + id + ")/rad has a nonzero non-unit coset"});
      return;
    }
  }
}

// With local endomorphism rings, x and y are isomorphic iff some basis
// composite g o f : x -> y -> x leaves the radical of End(x).
void check_non_isomorphic(const CategoryDatum& d, ValidationReport& rep) {
  const std::size_t n = d.point_count();
  for (PointIndex x = 0; x < n; ++x) {
    SubspaceBuilder rad(d.field(), d.hom_dim(x, x));
    for (const auto& r : d.radical(x)) rad.insert(r);
    for (PointIndex y = 0; y < n; ++y) {
      if (y == x) continue;
      bool found = false;
      for (std::size_t i = 0; i < d.hom_dim(x, y) && !found; ++i)
        for (std::size_t j = 0; j < d.hom_dim(y, x) && !found; ++j)
          if (!rad.contains(d.compose_basis(x, y, x, j, i))) {
            rep.violations.push_back({"isomorphic_points", d.point(x).id + " ~ " + d.point(y).id + " via (" +
                                                               name_of(d, x, y, i) + ", " + name_of(d, y, x, j) +
                                                               ")"});
            found = true;
          }
    }
  }
}

}  // namespace

ValidationReport validate_datum(const CategoryDatum& d) {
  ValidationReport rep;
  for (PointIndex x = 0; x < d.point_count(); ++x) {
    if (d.identity(x).size() != d.hom_dim(x, x))
      throw InputError("point '" + d.point(x).id + "' has no identity element");
    if (d.hom_dim(x, x) == 0) throw InputError("point '" + d.point(x).id + "' has zero endomorphism space");
  }
  check_identities(d, rep);
  check_associativity(d, rep);
  const std::size_t before = rep.violations.size();
  for (PointIndex x = 0; x < d.point_count(); ++x) check_radical(d, x, rep);
  if (rep.violations.size() == before) check_non_isomorphic(d, rep);
  return rep;
}

Matrix hom_matrix(const CategoryDatum& d, PointIndex z, const AddMorphism& g) {
  if (z >= d.point_count()) throw InputError("hom_matrix: unknown point");
  g.check(d);
  std::vector<std::size_t> row_off, col_off;
  std::size_t rows = 0, cols = 0;
  for (auto b : g.target.summands) {
    row_off.push_back(rows);
    rows += d.hom_dim(z, b);
  }
  for (auto a : g.source.summands) {
    col_off.push_back(cols);
    cols += d.hom_dim(z, a);
  }
  Matrix m(d.field(), rows, cols);
  for (std::size_t s = 0; s < g.source.size(); ++s) {
    const PointIndex a = g.source.summands[s];
    for (std::size_t i = 0; i < d.hom_dim(z, a); ++i) {
      const Vector h = d.basis_vector(z, a, i);
      for (std::size_t t = 0; t < g.target.size(); ++t) {
        const Vector img = d.compose(z, a, g.target.summands[t], g.blocks[t][s], h);
        for (std::size_t k = 0; k < img.size(); ++k) m(row_off[t] + k, col_off[s] + i) = img[k];
      }
    }
  }
  return m;
}

bool is_split_epi(const CategoryDatum& d, const AddMorphism& g) {
  g.check(d);
  // g o s = id_B is solvable iff for each summand B_j the inclusion
  // B_j -> B lies in the image of Hom(B_j, g).
  for (std::size_t j = 0; j < g.target.size(); ++j) {
    const PointIndex bj = g.target.summands[j];
    const Matrix m = hom_matrix(d, bj, g);
    Matrix rhs(d.field(), m.rows(), 1);
    std::size_t off = 0;
    for (std::size_t t = 0; t < g.target.size(); ++t) {
      if (t == j)
        for (std::size_t k = 0; k < d.hom_dim(bj, bj); ++k) rhs(off + k, 0) = d.identity(bj)[k];
      off += d.hom_dim(bj, g.target.summands[t]);
    }
    if (!solve_right(m, rhs)) return false;
  }
  return true;
}

}  // namespace spectra
