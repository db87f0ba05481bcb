#include "spectra/functors.hpp"

#include "spectra/error.hpp"

namespace spectra {

namespace {

struct Candidate {
  PointIndex src;
  Vector element;  // in hom(src, y)
};

AddMorphism assemble(const CategoryDatum& d, PointIndex y, const std::vector<Candidate>& cands,
                     const std::vector<bool>& active) {
  AddMorphism g;
  g.target.summands = {y};
  g.blocks.resize(1);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!active[i]) continue;
    g.source.summands.push_back(cands[i].src);
    g.blocks[0].push_back(cands[i].element);
  }
  (void)d;
  return g;
}

SubspaceBuilder image_at(const CategoryDatum& d, PointIndex x, PointIndex y, const std::vector<Candidate>& cands,
                         const std::vector<bool>& active) {
  SubspaceBuilder img(d.field(), d.hom_dim(x, y));
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!active[i]) continue;
    const PointIndex a = cands[i].src;
    for (std::size_t b = 0; b < d.hom_dim(x, a); ++b) img.insert(d.compose(x, a, y, cands[i].element, d.basis_vector(x, a, b)));
  }
  return img;
}

template <class Condition>
void prune(std::vector<bool>& active, Condition&& ok) {
  for (std::size_t i = 0; i < active.size(); ++i) {
    active[i] = false;
    if (!ok()) active[i] = true;
  }
}

std::vector<Candidate> approximation_candidates(const CategoryDatum& d, PointIndex y, const PointSet& pts) {
  std::vector<Candidate> cands;
  for (PointIndex x = 0; x < d.point_count(); ++x) {
    if (!pts.test(x)) continue;
    for (std::size_t i = 0; i < d.hom_dim(x, y); ++i) cands.push_back({x, d.basis_vector(x, y, i)});
  }
  return cands;
}

// Columns of a complement to span(sub) inside F^n, chosen from unit vectors in order.
std::vector<std::size_t> complement_units(const Field& f, std::size_t n, const std::vector<Vector>& sub) {
  SubspaceBuilder sb(f, n);
  for (const auto& v : sub) sb.insert(v);
  std::vector<std::size_t> units;
  for (std::size_t k = 0; k < n; ++k) {
    Vector e = zero_vector(f, n);
    e[k] = f.one();
    if (sb.insert(e)) units.push_back(k);
  }
  return units;
}

// Coordinates of a vector modulo span(sub) with respect to the chosen units.
class QuotientMap {
 public:
  QuotientMap(const Field& f, std::size_t n, const std::vector<Vector>& sub) : f_(f), n_(n) {
    units_ = complement_units(f, n, sub);
    std::vector<Vector> cols;
    for (auto k : units_) {
      Vector e = zero_vector(f, n);
      e[k] = f.one();
      cols.push_back(std::move(e));
    }
    for (const auto& v : sub) cols.push_back(v);
    SubspaceBuilder indep(f, n);
    std::vector<Vector> basis_cols;
    for (auto& c : cols)
      if (indep.insert(c)) basis_cols.push_back(c);
    const Matrix m = Matrix::from_columns(f, n, basis_cols);
    auto inv = solve_right(m, Matrix::identity(f, n));
    if (!inv) throw InconsistencyError("quotient basis is not invertible");
    proj_ = Matrix(f, units_.size(), n);
    for (std::size_t r = 0; r < units_.size(); ++r)
      for (std::size_t c = 0; c < n; ++c) proj_(r, c) = (*inv)(r, c);
  }
  std::size_t dim() const { return units_.size(); }
  Vector project(const Vector& v) const { return proj_.apply(v); }
  Vector lift(std::size_t k) const {
    Vector e = zero_vector(f_, n_);
    e[units_[k]] = f_.one();
    return e;
  }

 private:
  Field f_;
  std::size_t n_;
  std::vector<std::size_t> units_;
  Matrix proj_;
};

}  // namespace

FpFunctor representable(const CategoryDatum& d, PointIndex y) {
  if (y >= d.point_count()) throw InputError("representable: unknown point");
  return {AddMorphism::zero(d, AddObject{}, AddObject{{y}})};
}

std::size_t eval_dim(const CategoryDatum& d, const FpFunctor& f, PointIndex x) {
  const Matrix m = hom_matrix(d, x, f.presentation);
  return m.rows() - rank(m);
}

bool in_sigma(const CategoryDatum& d, const FpFunctor& f, const PointSet& pts) {
  for (PointIndex x = 0; x < d.point_count(); ++x)
    if (pts.test(x) && eval_dim(d, f, x) != 0) return false;
  return true;
}

AddMorphism add_approximation(const CategoryDatum& d, PointIndex y, const PointSet& pts) {
  auto cands = approximation_candidates(d, y, pts);
  return assemble(d, y, cands, std::vector<bool>(cands.size(), true));
}

std::optional<AddMorphism> exclusion_witness(const CategoryDatum& d, PointIndex y, const PointSet& pts) {
  if (y >= d.point_count()) throw InputError("exclusion_witness: unknown point");
  if (pts.test(y)) return std::nullopt;
  auto cands = approximation_candidates(d, y, pts);
  std::vector<bool> active(cands.size(), true);
  auto complete = [&] {
    for (PointIndex x = 0; x < d.point_count(); ++x)
      if (pts.test(x) && image_at(d, x, y, cands, active).dim() != d.hom_dim(x, y)) return false;
    return true;
  };
  prune(active, complete);
  AddMorphism g = assemble(d, y, cands, active);
  if (is_split_epi(d, g)) return std::nullopt;
  return g;
}

std::vector<Vector> radical_hom(const CategoryDatum& d, PointIndex x, PointIndex m) {
  if (x == m) return d.radical(m);
  std::vector<Vector> all;
  for (std::size_t i = 0; i < d.hom_dim(x, m); ++i) all.push_back(d.basis_vector(x, m, i));
  return all;
}

RightAlmostSplitData right_almost_split(const CategoryDatum& d, PointIndex m) {
  if (m >= d.point_count()) throw InputError("right_almost_split: unknown point");
  std::vector<Candidate> cands;
  for (PointIndex x = 0; x < d.point_count(); ++x)
    for (const auto& r : radical_hom(d, x, m)) cands.push_back({x, r});
  std::vector<bool> active(cands.size(), true);
  auto exact = [&] {
    for (PointIndex x = 0; x < d.point_count(); ++x) {
      const auto rad = radical_hom(d, x, m);
      const auto img = image_at(d, x, m, cands, active);
      if (img.dim() != rad.size()) return false;
      for (const auto& r : rad)
        if (!img.contains(r)) return false;
    }
    return true;
  };
  if (!exact()) throw InconsistencyError("radical of " + d.point(m).id + " is not generated by its own elements");
  prune(active, exact);
  return {m, assemble(d, m, cands, active), true};
}

FpFunctor simple_quotient(const CategoryDatum& d, PointIndex m) { return {right_almost_split(d, m).map}; }

RightModule::RightModule(const CategoryDatum& d, std::vector<std::size_t> dims) : d_(&d), dims_(std::move(dims)) {
  const std::size_t n = d.point_count();
  if (dims_.size() != n) throw InputError("module dimension vector does not match datum");
  actions_.resize(n * n);
  for (PointIndex w = 0; w < n; ++w)
    for (PointIndex x = 0; x < n; ++x)
      actions_[w * n + x].assign(d.hom_dim(w, x), Matrix(d.field(), dims_[w], dims_[x]));
}

std::size_t RightModule::total_dim() const {
  std::size_t s = 0;
  for (auto v : dims_) s += v;
  return s;
}

const Matrix& RightModule::action(PointIndex w, PointIndex x, std::size_t i) const {
  return actions_[w * d_->point_count() + x].at(i);
}
Matrix& RightModule::action(PointIndex w, PointIndex x, std::size_t i) {
  return actions_[w * d_->point_count() + x].at(i);
}

Matrix RightModule::act(PointIndex w, PointIndex x, const Vector& h) const {
  const Field& f = d_->field();
  Matrix out(f, dims_[w], dims_[x]);
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i].is_zero()) continue;
    const Matrix& a = action(w, x, i);
    for (std::size_t r = 0; r < out.rows(); ++r)
      for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) = f.add(out(r, c), f.mul(h[i], a(r, c)));
  }
  return out;
}

bool RightModule::annihilated_by(const BlockIdeal& j) const {
  const std::size_t n = d_->point_count();
  for (PointIndex w = 0; w < n; ++w)
    for (PointIndex x = 0; x < n; ++x)
      for (const auto& h : j.at(w, x))
        if (!act(w, x, h).is_zero()) return false;
  return true;
}

bool RightModule::generated_by(const BlockIdeal& j) const {
  const std::size_t n = d_->point_count();
  for (PointIndex w = 0; w < n; ++w) {
    SubspaceBuilder img(d_->field(), dims_[w]);
    for (PointIndex x = 0; x < n; ++x)
      for (const auto& h : j.at(w, x)) {
        const Matrix a = act(w, x, h);
        for (std::size_t c = 0; c < a.cols(); ++c) img.insert(a.column(c));
      }
    if (img.dim() != dims_[w]) return false;
  }
  return true;
}

std::vector<std::vector<Vector>> RightModule::generated_submodule(
    const std::vector<std::pair<PointIndex, Vector>>& gens) const {
  const std::size_t n = d_->point_count();
  std::vector<SubspaceBuilder> spans;
  for (PointIndex x = 0; x < n; ++x) spans.emplace_back(d_->field(), dims_[x]);
  std::vector<std::pair<PointIndex, Vector>> queue;
  for (const auto& [x, v] : gens)
    if (spans.at(x).insert(v)) queue.emplace_back(x, v);
  while (!queue.empty()) {
    auto [x, v] = queue.back();
    queue.pop_back();
    for (PointIndex w = 0; w < n; ++w)
      for (std::size_t i = 0; i < d_->hom_dim(w, x); ++i) {
        Vector img = action(w, x, i).apply(v);
        if (spans[w].insert(img)) queue.emplace_back(w, std::move(img));
      }
  }
  std::vector<std::vector<Vector>> out;
  for (auto& s : spans) out.push_back(s.basis());
  return out;
}

RightModule RightModule::submodule(const std::vector<std::vector<Vector>>& basis) const {
  const std::size_t n = d_->point_count();
  std::vector<std::size_t> dims;
  for (const auto& b : basis) dims.push_back(b.size());
  RightModule sub(*d_, dims);
  for (PointIndex w = 0; w < n; ++w)
    for (PointIndex x = 0; x < n; ++x)
      for (std::size_t i = 0; i < d_->hom_dim(w, x); ++i) {
        if (dims[x] == 0) continue;
        const Matrix bw = Matrix::from_columns(d_->field(), dims_[w], basis[w]);
        for (std::size_t c = 0; c < dims[x]; ++c) {
          const Vector img = action(w, x, i).apply(basis[x][c]);
          Matrix rhs = Matrix::from_columns(d_->field(), dims_[w], std::vector<Vector>{img});
          auto coords = solve_right(bw, rhs);
          if (!coords) throw InputError("generating set does not span a submodule");
          for (std::size_t r = 0; r < dims[w]; ++r) sub.action(w, x, i)(r, c) = (*coords)(r, 0);
        }
      }
  return sub;
}

RightModule RightModule::quotient(const std::vector<std::vector<Vector>>& basis) const {
  const std::size_t n = d_->point_count();
  std::vector<QuotientMap> maps;
  std::vector<std::size_t> dims;
  for (PointIndex x = 0; x < n; ++x) {
    maps.emplace_back(d_->field(), dims_[x], basis[x]);
    dims.push_back(maps.back().dim());
  }
  RightModule q(*d_, dims);
  for (PointIndex w = 0; w < n; ++w)
    for (PointIndex x = 0; x < n; ++x)
      for (std::size_t i = 0; i < d_->hom_dim(w, x); ++i)
        for (std::size_t c = 0; c < dims[x]; ++c) {
          const Vector img = maps[w].project(action(w, x, i).apply(maps[x].lift(c)));
          for (std::size_t r = 0; r < dims[w]; ++r) q.action(w, x, i)(r, c) = img[r];
        }
  return q;
}

RightModule module_of(const CategoryDatum& d, const FpFunctor& f) {
  const AddMorphism& g = f.presentation;
  g.check(d);
  const std::size_t n = d.point_count();
  const Field& fld = d.field();
  // P(x) = Hom(x, B), U(x) = image of Hom(x, g), F(x) = P(x)/U(x)
  std::vector<std::size_t> pdim(n, 0);
  std::vector<QuotientMap> maps;
  std::vector<std::size_t> dims;
  for (PointIndex x = 0; x < n; ++x) {
    for (auto b : g.target.summands) pdim[x] += d.hom_dim(x, b);
    const Matrix hm = hom_matrix(d, x, g);
    std::vector<Vector> image;
    for (std::size_t c = 0; c < hm.cols(); ++c) image.push_back(hm.column(c));
    maps.emplace_back(fld, pdim[x], image);
    dims.push_back(maps.back().dim());
  }
  RightModule m(d, dims);
  for (PointIndex w = 0; w < n; ++w)
    for (PointIndex x = 0; x < n; ++x)
      for (std::size_t i = 0; i < d.hom_dim(w, x); ++i) {
        const Vector a = d.basis_vector(w, x, i);
        for (std::size_t c = 0; c < dims[x]; ++c) {
          const Vector p = maps[x].lift(c);
          // p o a, componentwise over the summands of B
          Vector img;
          std::size_t off = 0;
          for (auto b : g.target.summands) {
            Vector pt(p.begin() + static_cast<std::ptrdiff_t>(off),
                      p.begin() + static_cast<std::ptrdiff_t>(off + d.hom_dim(x, b)));
            Vector part = d.compose(w, x, b, pt, a);
            img.insert(img.end(), part.begin(), part.end());
            off += d.hom_dim(x, b);
          }
          const Vector q = maps[w].project(img);
          for (std::size_t r = 0; r < dims[w]; ++r) m.action(w, x, i)(r, c) = q[r];
        }
      }
  return m;
}

bool left_perp_member(const CategoryDatum& d, const FpFunctor& g, const PointSet& pts) {
  return module_of(d, g).generated_by(idempotent_ideal(d, pts));
}

bool right_perp_member(const CategoryDatum& d, const FpFunctor& f, const PointSet& pts) {
  return module_of(d, f).annihilated_by(idempotent_ideal(d, pts));
}

FpFunctor random_functor(const CategoryDatum& d, std::mt19937_64& rng, std::size_t max_summands) {
  const std::size_t n = d.point_count();
  const Field& f = d.field();
  auto pick = [&](std::uint64_t bound) { return bound == 0 ? 0 : rng() % bound; };
  AddObject src, dst;
  const std::size_t ns = pick(max_summands + 1);
  const std::size_t nt = 1 + pick(max_summands);
  for (std::size_t i = 0; i < ns; ++i) src.summands.push_back(pick(n));
  for (std::size_t i = 0; i < nt; ++i) dst.summands.push_back(pick(n));
  AddMorphism g = AddMorphism::zero(d, src, dst);
  const std::uint64_t range = f.is_prime() ? f.spec().p : 7;
  for (auto& row : g.blocks)
    for (auto& blk : row)
      for (auto& s : blk) {
        // sparse-ish: a third of the coordinates are zero
        if (pick(3) == 0) continue;
        s = f.is_prime() ? f.from_int(static_cast<std::int64_t>(pick(range)))
                         : f.from_int(static_cast<std::int64_t>(pick(range)) - 3);
      }
  return {std::move(g)};
}

PointSet random_subset(std::size_t n, std::mt19937_64& rng) {
  PointSet s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rng() & 1) s.set(i);
  return s;
}

std::vector<FpFunctor> functor_family(const CategoryDatum& d, std::size_t random_count, std::uint64_t seed) {
  std::vector<FpFunctor> family;
  for (PointIndex y = 0; y < d.point_count(); ++y) family.push_back(representable(d, y));
  for (PointIndex y = 0; y < d.point_count(); ++y) family.push_back(simple_quotient(d, y));
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < random_count; ++i) family.push_back(random_functor(d, rng));
  return family;
}

}  // namespace spectra
