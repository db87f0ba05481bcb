#include "spectra/topology.hpp"

#include <random>
#include <set>

#include "spectra/algebra.hpp"
#include "spectra/error.hpp"
#include "spectra/functors.hpp"

namespace spectra {

std::vector<std::string> ClosureSpace::names(const PointSet& s) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (s.test(i)) out.push_back(name(i));
  return out;
}

PointSet subset_from_mask(std::size_t n, std::uint64_t mask) {
  PointSet s(n);
  for (std::size_t i = 0; i < n; ++i)
    if ((mask >> i) & 1u) s.set(i);
  return s;
}

namespace {

std::uint64_t mask_of(const PointSet& s) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.test(i)) m |= (std::uint64_t{1} << i);
  return m;
}

}  // namespace

TableSpace::TableSpace(std::vector<std::string> points, std::vector<PointSet> subset_closures)
    : points_(std::move(points)), table_(std::move(subset_closures)) {
  if (points_.size() > kMaxTablePoints) throw InputError("full closure tables are limited to 12 points");
  if (table_.size() != (std::size_t{1} << points_.size()))
    throw InputError("closure table must list every subset");
  for (const auto& c : table_)
    if (c.size() != points_.size()) throw InputError("closure table entry has wrong size");
}

TableSpace TableSpace::union_generated(std::vector<std::string> points, std::vector<PointSet> singleton_closures) {
  if (singleton_closures.size() != points.size()) throw InputError("need one singleton closure per point");
  TableSpace t;
  t.points_ = std::move(points);
  t.table_ = std::move(singleton_closures);
  t.union_generated_ = true;
  return t;
}

std::optional<std::size_t> TableSpace::find(const std::string& id) const {
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (points_[i] == id) return i;
  return std::nullopt;
}

PointSet TableSpace::closure(const PointSet& s) const {
  if (s.size() != size()) throw InputError("subset does not match space");
  if (!union_generated_) return table_[mask_of(s)];
  PointSet out(size());
  for (std::size_t i = 0; i < size(); ++i)
    if (s.test(i)) out |= table_[i];
  return out;
}

PointSet closure_by_ideal(const CategoryDatum& d, const PointSet& pts) {
  const BlockIdeal j = idempotent_ideal(d, pts);
  PointSet out = d.empty_set();
  for (PointIndex y = 0; y < d.point_count(); ++y)
    if (j.contains_identity(d, y)) out.set(y);
  return out;
}

ClosureResult closure_with_witnesses(const CategoryDatum& d, const PointSet& pts) {
  if (pts.size() != d.point_count()) throw InputError("point set does not match datum");
  ClosureResult res{pts, {}};
  for (PointIndex y = 0; y < d.point_count(); ++y) {
    if (pts.test(y)) continue;
    if (auto g = exclusion_witness(d, y, pts)) {
      const FpFunctor f{*g};
      if (!in_sigma(d, f, pts) || eval_dim(d, f, y) == 0)
        throw InconsistencyError("witness for " + d.point(y).id + " does not separate it");
      res.witnesses.emplace(y, std::move(*g));
    } else {
      res.closure.set(y);
    }
  }
  const PointSet by_ideal = closure_by_ideal(d, pts);
  if (by_ideal != res.closure) {
    std::string msg = "closure routes disagree on {";
    for (const auto& s : d.names(pts)) msg += s + ",";
    msg += "}";
    throw InconsistencyError(msg);
  }
  return res;
}

PointSet closure_by_witness(const CategoryDatum& d, const PointSet& pts) {
  PointSet out = pts;
  for (PointIndex y = 0; y < d.point_count(); ++y)
    if (!pts.test(y) && !exclusion_witness(d, y, pts)) out.set(y);
  return out;
}

PointSet closure(const CategoryDatum& d, const PointSet& pts) { return closure_with_witnesses(d, pts).closure; }

bool is_closed(const CategoryDatum& d, const PointSet& pts) { return closure(d, pts) == pts; }

PointSet DatumSpace::closure(const PointSet& s) const {
  auto it = cache_.find(s);
  if (it != cache_.end()) return it->second;
  PointSet c = spectra::closure(*d_, s);
  cache_.emplace(s, c);
  return c;
}

PointSet isolated_in(const ClosureSpace& space, const PointSet& sub) {
  PointSet out = space.empty_set();
  for (std::size_t m = 0; m < space.size(); ++m) {
    if (!sub.test(m)) continue;
    PointSet rest = sub;
    rest.reset(m);
    if ((space.closure(rest) & sub) == rest) out.set(m);
  }
  return out;
}

PointSet isolated_points(const ClosureSpace& space) { return isolated_in(space, space.full_set()); }

CBReport cb_rank(const ClosureSpace& space) {
  CBReport rep;
  for (std::size_t i = 0; i < space.size(); ++i) rep.points.push_back(space.name(i));
  rep.ranks.assign(space.size(), std::nullopt);
  PointSet current = space.full_set();
  std::size_t level = 0;
  rep.derivative_chain.push_back(current);
  while (current.any()) {
    const PointSet iso = isolated_in(space, current);
    if (iso.none()) {
      rep.space_rank = std::nullopt;
      return rep;
    }
    for (std::size_t i = 0; i < space.size(); ++i)
      if (iso.test(i)) rep.ranks[i] = level;
    current -= iso;
    rep.derivative_chain.push_back(current);
    ++level;
  }
  rep.space_rank = level == 0 ? 0 : level - 1;
  return rep;
}

namespace {

// Memoizing wrapper so exhaustive suites evaluate each subset once.
class CachedSpace : public ClosureSpace {
 public:
  explicit CachedSpace(const ClosureSpace& inner) : inner_(inner) {}
  std::size_t size() const override { return inner_.size(); }
  std::string name(std::size_t i) const override { return inner_.name(i); }
  PointSet closure(const PointSet& s) const override {
    auto it = cache_.find(s);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(s, inner_.closure(s)).first->second;
  }

 private:
  const ClosureSpace& inner_;
  mutable std::map<PointSet, PointSet> cache_;
};

template <class Visit>
void for_each_pair(std::size_t n, std::size_t samples, std::uint64_t seed, bool exhaustive, Visit&& visit) {
  if (exhaustive) {
    if (n > 12) throw InputError("exhaustive pair enumeration is limited to 12 points");
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t a = 0; a < count; ++a)
      for (std::uint64_t b = 0; b < count; ++b)
        if (!visit(subset_from_mask(n, a), subset_from_mask(n, b))) return;
    return;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    PointSet x = random_subset(n, rng);
    PointSet y = random_subset(n, rng);
    if (!visit(x, y)) return;
  }
}

bool check_pair(const ClosureSpace& c, const PointSet& x, const PointSet& y, PropertyReport& rep) {
  ++rep.checked;
  const PointSet cx = c.closure(x);
  const PointSet cy = c.closure(y);
  auto fail = [&](const char* axiom) {
    rep.passed = false;
    rep.violations.push_back({axiom, x, y});
    return false;
  };
  if (!x.is_subset_of(cx)) return fail("extensive");
  if (c.closure(cx) != cx) return fail("idempotent");
  if (c.closure(x | y) != (cx | cy)) return fail("union");
  return true;
}

}  // namespace

PropertyReport kuratowski_check(const ClosureSpace& space, std::size_t samples, std::uint64_t seed, bool exhaustive) {
  CachedSpace c(space);
  PropertyReport rep;
  if (c.closure(c.empty_set()).any()) {
    rep.passed = false;
    rep.violations.push_back({"empty", c.empty_set(), c.empty_set()});
    return rep;
  }
  for_each_pair(c.size(), samples, seed, exhaustive,
                [&](const PointSet& x, const PointSet& y) { return check_pair(c, x, y, rep); });
  return rep;
}

PropertyReport kuratowski_check(const CategoryDatum& d, std::size_t samples, std::uint64_t seed, bool exhaustive) {
  DatumSpace space(d);
  PropertyReport rep = kuratowski_check(static_cast<const ClosureSpace&>(space), samples, seed, exhaustive);
  if (!rep.passed) return rep;
  // Σ(X) = Σ(γΣ(X)) on a sampled functor family
  const auto family = functor_family(d, 8, seed ^ 0x9e3779b97f4a7c15ULL);
  std::set<PointSet> seen;
  for_each_pair(d.point_count(), samples, seed, exhaustive, [&](const PointSet& x, const PointSet&) {
    if (!seen.insert(x).second) return true;
    const PointSet cx = space.closure(x);
    for (const auto& f : family)
      if (in_sigma(d, f, x) != in_sigma(d, f, cx)) {
        rep.passed = false;
        rep.violations.push_back({"sigma_agreement", x, cx});
        return false;
      }
    return true;
  });
  return rep;
}

PropertyReport t1_check(const ClosureSpace& space) {
  PropertyReport rep;
  for (std::size_t i = 0; i < space.size(); ++i) {
    ++rep.checked;
    PointSet s = space.empty_set();
    s.set(i);
    if (space.closure(s) != s) {
      rep.passed = false;
      rep.violations.push_back({"t1", s, space.closure(s)});
    }
  }
  return rep;
}

namespace {

SerreReport serre_on(const CategoryDatum& d, const std::vector<PointSet>& subsets) {
  const std::size_t n = d.point_count();
  SerreReport rep;
  std::vector<BlockIdeal> classes;
  // representables and simples, checked against the double-perp condition
  const auto family = functor_family(d, 0, 0);
  for (const auto& x : subsets) {
    ++rep.subsets;
    const BlockIdeal j = idempotent_ideal(d, x);
    PointSet gamma = d.empty_set();
    for (PointIndex y = 0; y < n; ++y)
      if (j.contains_identity(d, y)) gamma.set(y);
    const std::string label = "mask " + std::to_string(mask_of(x));
    if (gamma != x) rep.failures.push_back(label + ": γΣ(X) != X");
    if (idempotent_ideal(d, gamma) != j) rep.failures.push_back(label + ": Σγ changes the annihilator class");
    for (const auto& f : family)
      if (in_sigma(d, f, x) != right_perp_member(d, f, x)) {
        rep.failures.push_back(label + ": (⊥Σ(X))⊥ differs from Σ(X)");
        break;
      }
    bool fresh = true;
    for (const auto& c : classes)
      if (c == j) fresh = false;
    if (fresh) classes.push_back(j);
    else rep.failures.push_back(label + ": annihilator class repeats");
  }
  rep.classes = classes.size();
  rep.passed = rep.failures.empty() && rep.classes == rep.subsets;
  return rep;
}

}  // namespace

SerreReport serre_correspondence_check(const CategoryDatum& d) {
  const std::size_t n = d.point_count();
  if (n > 3) throw InputError("serre_correspondence_check is exhaustive only up to 3 points; use sampling mode");
  std::vector<PointSet> subsets;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) subsets.push_back(subset_from_mask(n, m));
  return serre_on(d, subsets);
}

SerreReport serre_correspondence_check(const CategoryDatum& d, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = d.point_count();
  std::mt19937_64 rng(seed + 2);
  std::set<std::uint64_t> seen;
  std::vector<PointSet> subsets;
  for (std::size_t i = 0; i < samples; ++i) {
    const PointSet x = random_subset(n, rng);
    if (n > 64 || seen.insert(mask_of(x)).second) subsets.push_back(x);
  }
  return serre_on(d, subsets);
}

PerpReport perp_check(const CategoryDatum& d, std::size_t random_functors, std::uint64_t seed, std::size_t samples,
                      std::size_t exhaustive_limit) {
  const std::size_t n = d.point_count();
  const auto family = functor_family(d, random_functors, seed);
  std::vector<PointSet> subsets;
  if (n <= exhaustive_limit) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) subsets.push_back(subset_from_mask(n, m));
  } else {
    std::mt19937_64 rng(seed + 1);
    for (std::size_t i = 0; i < samples; ++i) subsets.push_back(random_subset(n, rng));
  }
  PerpReport rep;
  for (const auto& x : subsets) {
    const BlockIdeal j = idempotent_ideal(d, x);
    for (std::size_t k = 0; k < family.size(); ++k) {
      ++rep.checked;
      const bool sigma = in_sigma(d, family[k], x);
      const bool perp = module_of(d, family[k]).annihilated_by(j);
      if (sigma != perp) {
        ++rep.mismatches;
        if (rep.failures.size() < 5)
          rep.failures.push_back("functor " + std::to_string(k) + " on subset " + std::to_string(mask_of(x)));
      }
    }
  }
  rep.passed = rep.mismatches == 0;
  return rep;
}

FinitenessResult contravariant_finiteness_check(const CategoryDatum& d, const PointSet& pts) {
  const BlockIdeal j = idempotent_ideal(d, pts);
  FinitenessResult res{true, false};
  for (PointIndex m = 0; m < d.point_count() && res.contravariantly_finite; ++m) {
    if (pts.test(m)) continue;
    const AddMorphism g = add_approximation(d, m, pts);
    for (PointIndex z = 0; z < d.point_count(); ++z) {
      // image of Hom(z, g) must equal the maps z -> m factoring through add(pts)
      const Matrix hm = hom_matrix(d, z, g);
      SubspaceBuilder img(d.field(), d.hom_dim(z, m));
      for (std::size_t c = 0; c < hm.cols(); ++c) img.insert(hm.column(c));
      SubspaceBuilder through(d.field(), d.hom_dim(z, m));
      for (const auto& v : j.at(z, m)) through.insert(v);
      bool equal = img.dim() == through.dim();
      for (const auto& v : j.at(z, m)) equal = equal && img.contains(v);
      if (!equal) {
        res.contravariantly_finite = false;
        break;
      }
    }
  }
  res.closed = is_closed(d, pts);
  if (res.contravariantly_finite && !res.closed)
    throw InconsistencyError("contravariantly finite subset is not closed");
  return res;
}

}  // namespace spectra
