#include "spectra/tower.hpp"

#include <algorithm>

#include "spectra/error.hpp"
#include "spectra/functors.hpp"

namespace spectra {

const TowerPoint& TruncationTower::meta(const std::string& id) const {
  for (const auto& p : points)
    if (p.id == id) return p;
  throw InputError("tower has no point '" + id + "'");
}

std::optional<PointIndex> TruncationTower::index_at(std::size_t lvl, const std::string& id) const {
  if (lvl < 1 || lvl > height()) return std::nullopt;
  return level(lvl).find_point(id);
}

TruncationTower TruncationTower::truncated(std::size_t n) const {
  if (n < 1 || n > height()) throw InputError("cannot truncate a tower of height " + std::to_string(height()) +
                                              " to " + std::to_string(n) + " levels");
  TruncationTower t;
  t.levels.assign(levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(n));
  t.embeddings.assign(embeddings.begin(), embeddings.begin() + static_cast<std::ptrdiff_t>(n - 1));
  for (const auto& p : points)
    if (t.top().find_point(p.id)) t.points.push_back(p);
  return t;
}

namespace {

std::string pair_name(const CategoryDatum& d, PointIndex x, PointIndex y) {
  return d.point(x).id + " -> " + d.point(y).id;
}

// g (given in indices of `from`) expressed in indices of `to`; nullopt when a
// summand is missing or a hom space changed shape.
std::optional<AddMorphism> transport(const CategoryDatum& from, const CategoryDatum& to, const AddMorphism& g) {
  AddMorphism out;
  auto map_obj = [&](const AddObject& o, AddObject& dst) {
    for (auto s : o.summands) {
      auto idx = to.find_point(from.point(s).id);
      if (!idx) return false;
      dst.summands.push_back(*idx);
    }
    return true;
  };
  if (!map_obj(g.source, out.source) || !map_obj(g.target, out.target)) return std::nullopt;
  out.blocks = g.blocks;
  for (std::size_t t = 0; t < out.target.size(); ++t)
    for (std::size_t s = 0; s < out.source.size(); ++s) {
      const auto a = out.source.summands[s], b = out.target.summands[t];
      if (out.blocks[t][s].size() != to.hom_dim(a, b)) return std::nullopt;
      if (from.hom_basis(g.source.summands[s], g.target.summands[t]) != to.hom_basis(a, b)) return std::nullopt;
    }
  return out;
}

bool surjective_at(const CategoryDatum& d, PointIndex x, const AddMorphism& g) {
  return is_surjective(hom_matrix(d, x, g));
}

struct Candidate {
  PointIndex src;
  Vector element;
};

AddMorphism assemble(PointIndex y, const std::vector<Candidate>& cands, const std::vector<bool>& active) {
  AddMorphism g;
  g.target.summands = {y};
  g.blocks.resize(1);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!active[i]) continue;
    g.source.summands.push_back(cands[i].src);
    g.blocks[0].push_back(cands[i].element);
  }
  return g;
}

std::vector<std::string> ids_of(const CategoryDatum& d, const AddObject& o) {
  std::vector<std::string> out;
  for (auto s : o.summands) out.push_back(d.point(s).id);
  return out;
}

std::vector<std::string> format_block(const CategoryDatum& d, PointIndex a, PointIndex b, const Vector& v) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!v[k].is_zero()) out.push_back(d.hom_basis(a, b)[k] + "=" + d.field().format(v[k]));
  return out;
}

}  // namespace

TowerReport verify_tower(const TruncationTower& t) {
  TowerReport rep;
  auto fail = [&](std::size_t lvl, std::string why) {
    rep.passed = false;
    rep.failed_level = lvl;
    rep.detail = std::move(why);
    return rep;
  };
  if (t.height() == 0) return fail(0, "tower has no levels");
  if (t.embeddings.size() + 1 != t.height()) return fail(0, "expected one embedding per consecutive level pair");
  for (std::size_t n = 1; n <= t.height(); ++n) {
    const auto v = validate_datum(t.level(n));
    if (!v.valid()) return fail(n, "level is not a valid datum: " + v.violations.front().kind + ": " + v.violations.front().detail);
  }
  for (std::size_t k = 0; k + 1 < t.height(); ++k) {
    const auto& lo = t.levels[k];
    const auto& hi = t.levels[k + 1];
    const auto& emb = t.embeddings[k];
    if (emb.size() != lo.point_count()) return fail(k + 2, "embedding size does not match the point count");
    std::vector<bool> hit(hi.point_count(), false);
    for (PointIndex i = 0; i < emb.size(); ++i) {
      if (emb[i] >= hi.point_count() || hit[emb[i]]) return fail(k + 2, "embedding is not injective");
      hit[emb[i]] = true;
      if (hi.point(emb[i]).id != lo.point(i).id) return fail(k + 2, "embedding renames point " + lo.point(i).id);
    }
  }
  const auto& top = t.top();
  if (t.points.size() != top.point_count()) return fail(t.height(), "point metadata does not cover the top level");
  for (const auto& p : t.points) {
    if (!top.find_point(p.id)) return fail(t.height(), "metadata for unknown point " + p.id);
    if (top.point(top.point_index(p.id)).locally_free != p.locally_free)
      return fail(t.height(), "locally_free flag of " + p.id + " disagrees with the datum");
    if (p.stabilizes_at_level < p.appears_at_level)
      return fail(t.height(), p.id + " stabilizes before it appears");
    for (std::size_t n = 1; n <= t.height(); ++n) {
      const bool present = t.level(n).find_point(p.id).has_value();
      if (present != (n >= p.appears_at_level))
        return fail(n, p.id + " presence disagrees with appears_at_level " + std::to_string(p.appears_at_level));
    }
  }
  std::size_t cm_plus = 0;
  for (const auto& p : t.points) cm_plus += p.locally_free ? 0 : 1;
  rep.notes.push_back(std::to_string(cm_plus) + " point(s) not locally free");

  for (std::size_t k = 1; k < t.height(); ++k) {
    const auto& lo = t.level(k);
    const auto& hi = t.level(k + 1);
    std::vector<PointIndex> stable;
    for (PointIndex i = 0; i < lo.point_count(); ++i)
      if (t.meta(lo.point(i).id).stabilizes_at_level <= k) stable.push_back(i);
    auto up = [&](PointIndex i) { return hi.point_index(lo.point(i).id); };
    for (auto x : stable) {
      if (lo.identity(x) != hi.identity(up(x))) return fail(k + 1, "identity of " + lo.point(x).id + " changed");
      if (lo.radical(x) != hi.radical(up(x))) return fail(k + 1, "radical of " + lo.point(x).id + " changed");
      for (auto y : stable) {
        if (lo.hom_dim(x, y) != hi.hom_dim(up(x), up(y)))
          return fail(k + 1, "hom " + pair_name(lo, x, y) + " dimension " + std::to_string(lo.hom_dim(x, y)) +
                                 " became " + std::to_string(hi.hom_dim(up(x), up(y))));
        if (lo.hom_basis(x, y) != hi.hom_basis(up(x), up(y)))
          return fail(k + 1, "hom " + pair_name(lo, x, y) + " basis names changed");
      }
    }
    for (auto x : stable)
      for (auto y : stable)
        for (auto z : stable)
          for (std::size_t j = 0; j < lo.hom_dim(y, z); ++j)
            for (std::size_t i = 0; i < lo.hom_dim(x, y); ++i)
              if (lo.compose_basis(x, y, z, j, i) != hi.compose_basis(up(x), up(y), up(z), j, i))
                return fail(k + 1, "composition " + lo.hom_basis(y, z)[j] + " o " + lo.hom_basis(x, y)[i] + " changed");
  }
  return rep;
}

namespace {

std::vector<std::string> family_ids(const TruncationTower& t, const FamilyDescription& fam, const std::string& y) {
  std::vector<std::string> out;
  if (fam.kind == FamilyDescription::Kind::Finite) {
    for (const auto& id : fam.ids) {
      t.meta(id);
      out.push_back(id);
    }
    return out;
  }
  for (const auto& p : t.points)
    if ((p.locally_free || fam.include_core) && p.id != y) out.push_back(p.id);
  return out;
}

// Hom(X, g) surjective at every level from `first` to the top, for every X
// of the family present there.
bool holds_through_top(const TruncationTower& t, const AddMorphism& g_top, const std::vector<std::string>& family,
                       std::size_t first) {
  for (std::size_t n = first; n <= t.height(); ++n) {
    const auto& d = t.level(n);
    auto g = transport(t.top(), d, g_top);
    if (!g) return false;
    for (const auto& id : family) {
      auto x = d.find_point(id);
      if (x && !surjective_at(d, *x, *g)) return false;
    }
  }
  return true;
}

}  // namespace

LimitClosureResult closure_in_limit(const TruncationTower& t, const std::string& y, const FamilyDescription& family,
                                    std::size_t bound, std::size_t max_candidates) {
  const auto& top = t.top();
  const PointIndex yi = top.point_index(y);
  const auto fam = family_ids(t, family, y);
  LimitClosureResult res;
  res.bound = bound;
  if (std::find(fam.begin(), fam.end(), y) != fam.end()) {
    res.kind = LimitClosureResult::Kind::InSet;
    return res;
  }
  // Witness summands must leave at least one later level to test against
  // when the family is open-ended.
  const bool open = family.kind == FamilyDescription::Kind::AllFamily && t.height() > 1;
  std::vector<PointIndex> pool;
  for (PointIndex i = 0; i < top.point_count(); ++i) {
    const auto& id = top.point(i).id;
    if (std::find(fam.begin(), fam.end(), id) == fam.end()) continue;
    if (open && t.meta(id).appears_at_level >= t.height()) continue;
    pool.push_back(i);
  }
  const std::size_t y_first = t.meta(y).appears_at_level;
  const std::size_t max_size = std::min(bound, pool.size());
  std::vector<std::size_t> pick;
  auto try_subset = [&](const std::vector<std::size_t>& sel) -> bool {
    if (++res.candidates_tried > max_candidates)
      throw ResourceError("closure_in_limit: more than " + std::to_string(max_candidates) +
                          " candidate shapes for bound " + std::to_string(bound));
    std::size_t first = y_first;
    std::vector<Candidate> cands;
    for (auto s : sel) {
      const PointIndex a = pool[s];
      first = std::max(first, t.meta(top.point(a).id).appears_at_level);
      for (std::size_t i = 0; i < top.hom_dim(a, yi); ++i) cands.push_back({a, top.basis_vector(a, yi, i)});
    }
    std::vector<bool> active(cands.size(), true);
    auto ok = [&] { return holds_through_top(t, assemble(yi, cands, active), fam, first); };
    if (!ok()) return false;
    for (std::size_t i = 0; i < active.size(); ++i) {
      active[i] = false;
      if (!ok()) active[i] = true;
    }
    AddMorphism g = assemble(yi, cands, active);
    for (auto s : sel)
      if (static_cast<std::size_t>(std::count(g.source.summands.begin(), g.source.summands.end(), pool[s])) > bound)
        return false;
    if (is_split_epi(top, g)) return false;
    res.kind = LimitClosureResult::Kind::Excluded;
    res.witness = LimitWitness{g, ids_of(top, g.source), first};
    return true;
  };
  if (try_subset({})) return res;
  // subsets by size, then lexicographically in top-level point order
  for (std::size_t size = 1; size <= max_size; ++size) {
    std::vector<std::size_t> sel(size);
    for (std::size_t i = 0; i < size; ++i) sel[i] = i;
    while (true) {
      if (try_subset(sel)) return res;
      std::size_t i = size;
      while (i > 0 && sel[i - 1] == pool.size() - size + i - 1) --i;
      if (i == 0) break;
      ++sel[i - 1];
      for (std::size_t j = i; j < size; ++j) sel[j] = sel[j - 1] + 1;
    }
  }
  res.kind = LimitClosureResult::Kind::NoWitnessUpTo;
  return res;
}

WitnessChain witness_failure_chain(const TruncationTower& t, const std::string& y,
                                   const std::vector<std::size_t>& prefix_levels, bool growing) {
  WitnessChain chain;
  chain.excluded = y;
  chain.growing = growing;
  const std::size_t y_first = t.meta(y).appears_at_level;
  for (auto n : prefix_levels) {
    if (n > t.height()) throw InputError("prefix level " + std::to_string(n) + " exceeds tower height");
    ChainEntry e;
    e.prefix_level = n;
    const std::size_t at = std::max<std::size_t>(n, y_first);
    if (at > t.height()) {
      chain.entries.push_back(std::move(e));
      continue;
    }
    const auto& d = t.level(at);
    PointSet pts = d.empty_set();
    if (n >= 1)
      for (PointIndex i = 0; i < d.point_count(); ++i)
        if (d.point(i).id != y && t.meta(d.point(i).id).appears_at_level <= n) {
          pts.set(i);
          e.family.push_back(d.point(i).id);
        }
    const PointIndex yi = d.point_index(y);
    e.witness = exclusion_witness(d, yi, pts);
    if (e.witness) {
      e.source = ids_of(d, e.witness->source);
      const std::size_t from = growing ? std::max<std::size_t>(n + 1, std::max<std::size_t>(at, 1)) : at + 1;
      for (std::size_t m = from; m <= t.height() && !e.fails_at; ++m) {
        const auto& dm = t.level(m);
        auto g = transport(d, dm, *e.witness);
        if (!g) {
          e.fails_at = m;
          e.failing_point = y;
          break;
        }
        for (PointIndex x = 0; x < dm.point_count(); ++x) {
          const auto& id = dm.point(x).id;
          if (id == y) continue;
          const bool member = growing ? true : std::find(e.family.begin(), e.family.end(), id) != e.family.end();
          if (member && !surjective_at(dm, x, *g)) {
            e.fails_at = m;
            e.failing_point = id;
            break;
          }
        }
      }
    }
    chain.entries.push_back(std::move(e));
  }
  return chain;
}

ArStabilization ar_stabilization(const TruncationTower& t, const std::string& m) {
  ArStabilization res;
  t.meta(m);
  for (std::size_t n = 1; n <= t.height(); ++n) {
    const auto& d = t.level(n);
    auto mi = d.find_point(m);
    if (!mi) continue;
    const auto ar = right_almost_split(d, *mi);
    ArLevel lv;
    lv.level = n;
    lv.source = ids_of(d, ar.map.source);
    for (std::size_t s = 0; s < ar.map.source.size(); ++s)
      lv.blocks.push_back(format_block(d, ar.map.source.summands[s], *mi, ar.map.blocks[0][s]));
    res.per_level.push_back(std::move(lv));
  }
  if (res.per_level.empty()) throw InputError("point '" + m + "' is not present in the tower");
  auto same = [](const ArLevel& a, const ArLevel& b) { return a.source == b.source && a.blocks == b.blocks; };
  const auto& last = res.per_level.back();
  std::size_t from = res.per_level.size() - 1;
  while (from > 0 && same(res.per_level[from - 1], last)) --from;
  if (res.per_level.size() >= 2 && from == res.per_level.size() - 1) {
    res.kind = ArStabilization::Kind::GrowingUpTo;
    res.level = t.height();
  } else {
    res.kind = ArStabilization::Kind::Stable;
    res.level = res.per_level[from].level;
  }
  return res;
}

TowerCBReport tower_cb_rank(const TruncationTower& t, std::size_t bound) {
  TowerCBReport out;
  const auto& top = t.top();
  const std::size_t n = top.point_count();
  CBReport& rep = out.report;
  std::vector<std::string> plus;
  for (PointIndex i = 0; i < n; ++i) {
    const auto& id = top.point(i).id;
    rep.points.push_back(id);
    const auto& meta = t.meta(id);
    const auto ar = ar_stabilization(t, id);
    if (meta.locally_free) {
      rep.ranks.push_back(0);
      if (ar.kind == ArStabilization::Kind::GrowingUpTo) {
        const bool boundary = meta.appears_at_level + 1 >= t.height();
        out.warnings.push_back({id, boundary ? "boundary" : "conflict",
                                boundary ? "appears too close to the top for AR data to settle"
                                         : "locally free point whose AR data grows up to the top"});
      }
    } else {
      rep.ranks.push_back(std::nullopt);
      plus.push_back(id);
      if (ar.kind == ArStabilization::Kind::Stable)
        out.warnings.push_back({id, "conflict",
                                "AR data stabilizes from level " + std::to_string(ar.level) +
                                    " at a point flagged not locally free"});
    }
  }
  if (plus.size() > TableSpace::kMaxTablePoints)
    throw ResourceError("more than " + std::to_string(TableSpace::kMaxTablePoints) + " points not locally free");
  // induced topology on the remainder from pairwise limit closures
  std::vector<PointSet> singles;
  for (std::size_t a = 0; a < plus.size(); ++a) {
    PointSet c(plus.size());
    c.set(a);
    FamilyDescription fam{FamilyDescription::Kind::Finite, {plus[a]}, false};
    for (std::size_t b = 0; b < plus.size(); ++b)
      if (b != a && closure_in_limit(t, plus[b], fam, bound).kind != LimitClosureResult::Kind::Excluded) c.set(b);
    singles.push_back(std::move(c));
  }
  const auto remainder = TableSpace::union_generated(plus, singles);
  const CBReport sub = cb_rank(remainder);
  for (std::size_t a = 0; a < plus.size(); ++a) {
    const PointIndex i = top.point_index(plus[a]);
    rep.ranks[i] = sub.ranks[a] ? std::optional<std::size_t>(*sub.ranks[a] + 1) : std::nullopt;
  }
  bool infinite = false;
  std::size_t max_rank = 0;
  for (const auto& r : rep.ranks) {
    if (!r) infinite = true;
    else max_rank = std::max(max_rank, *r);
  }
  rep.space_rank = infinite ? std::nullopt : std::optional<std::size_t>(max_rank);
  for (std::size_t k = 0;; ++k) {
    PointSet s(n);
    for (PointIndex i = 0; i < n; ++i)
      if (!rep.ranks[i] || *rep.ranks[i] >= k) s.set(i);
    if (s.none() || (!rep.derivative_chain.empty() && s == rep.derivative_chain.back())) break;
    rep.derivative_chain.push_back(std::move(s));
  }
  return out;
}

}  // namespace spectra
