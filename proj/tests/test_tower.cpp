#include <gtest/gtest.h>

#include "spectra/tower.hpp"
#include "support.hpp"

using namespace spectra;
using namespace spectra::test;

namespace {

TruncationTower constant_tower(const CategoryDatum& d, std::size_t height, bool locally_free = true) {
  TruncationTower t;
  std::vector<PointIndex> id(d.point_count());
  for (PointIndex i = 0; i < id.size(); ++i) id[i] = i;
  for (std::size_t k = 0; k < height; ++k) t.levels.push_back(d);
  for (std::size_t k = 1; k < height; ++k) t.embeddings.push_back(id);
  for (const auto& p : d.points()) t.points.push_back({p.id, locally_free, 1, 1});
  return t;
}

std::string n_id(std::size_t n) { return "I" + std::to_string(n); }

TEST(VerifyTower, ShippedAndConstant) {
  EXPECT_TRUE(verify_tower(shipped_tower()).passed);
  EXPECT_TRUE(verify_tower(constant_tower(load_pack("a3.json"), 4)).passed);
}

TEST(VerifyTower, CorruptedDimensionFailsAtItsLevel) {
  TruncationTower t = shipped_tower().truncated(6);
  CategoryDatum& five = t.levels[4];
  // Rebuild level 5 with one extra basis vector in hom(I1, I2).
  const PointIndex a = five.point_index("I1"), b = five.point_index("I2");
  CategoryDatum bad(five.field(), five.points());
  for (PointIndex x = 0; x < five.point_count(); ++x)
    for (PointIndex y = 0; y < five.point_count(); ++y) {
      auto names = five.hom_basis(x, y);
      if (x == a && y == b) names.push_back("extra");
      bad.set_hom(x, y, names);
    }
  // The extra vector e composes only with identities: id∘e = e = e∘id, everything else is zero.
  const std::size_t e = five.hom_dim(a, b);
  auto extra = [&](const Scalar& c) {
    Vector v(e + 1, five.field().zero());
    v[e] = c;
    return v;
  };
  for (PointIndex x = 0; x < five.point_count(); ++x)
    for (PointIndex y = 0; y < five.point_count(); ++y)
      for (PointIndex z = 0; z < five.point_count(); ++z)
        for (std::size_t j = 0; j < bad.hom_dim(y, z); ++j)
          for (std::size_t i = 0; i < bad.hom_dim(x, y); ++i) {
            const bool g_extra = y == a && z == b && j == e, f_extra = x == a && y == b && i == e;
            Vector r;
            if (f_extra)
              r = z == b ? extra(five.identity(b)[j]) : Vector(bad.hom_dim(x, z), five.field().zero());
            else if (g_extra)
              r = x == a ? extra(five.identity(a)[i]) : Vector(bad.hom_dim(x, z), five.field().zero());
            else {
              r = five.compose_basis(x, y, z, j, i);
              if (x == a && z == b) r.push_back(five.field().zero());
            }
            bad.set_compose(x, y, z, j, i, r);
          }
  for (PointIndex x = 0; x < five.point_count(); ++x) {
    bad.set_identity(x, five.identity(x));
    bad.set_radical(x, five.radical(x));
  }
  five = bad;
  const auto r = verify_tower(t);
  ASSERT_FALSE(r.passed);
  EXPECT_EQ(r.failed_level, std::optional<std::size_t>(5));
  EXPECT_NE(r.detail.find("I1"), std::string::npos) << r.detail;
  EXPECT_NE(r.detail.find("I2"), std::string::npos);
}

TEST(Tower, TruncatedKeepsPrefix) {
  const auto t = shipped_tower().truncated(3);
  EXPECT_EQ(t.height(), 3u);
  EXPECT_EQ(t.top().point_count(), 4u);
  EXPECT_EQ(t.points.size(), 4u);
}

// Every stable hom space into a family point is nonzero, so no representable
// Hom(-, I_n) vanishes at any point.
TEST(Tower, HomsIntoFamilyPointsNonzero) {
  const auto& t = shipped_tower();
  for (std::size_t lv = 1; lv <= t.height(); ++lv) {
    const auto& d = t.level(lv);
    for (PointIndex y = 0; y < d.point_count(); ++y) {
      if (!d.point(y).locally_free) continue;
      const FpFunctor rep = representable(d, y);
      for (PointIndex x = 0; x < d.point_count(); ++x) {
        EXPECT_GE(d.hom_dim(x, y), 1u);
        PointSet s = d.empty_set();
        s.set(x);
        EXPECT_FALSE(in_sigma(d, rep, s));
      }
    }
  }
}

TEST(LimitClosure, LocallyFreePointIsExcluded) {
  FamilyDescription all;
  all.kind = FamilyDescription::Kind::AllFamily;
  all.include_core = true;
  const auto r = closure_in_limit(shipped_tower(), "I3", all, 4);
  ASSERT_EQ(r.kind, LimitClosureResult::Kind::Excluded);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->source, (std::vector<std::string>{"I2", "I4"}));
  EXPECT_LE(r.witness->verified_from_level, 5u);
}

TEST(LimitClosure, CorePointHasNoWitness) {
  FamilyDescription all;
  all.kind = FamilyDescription::Kind::AllFamily;
  for (std::size_t b : {2u, 3u, 4u}) {
    const auto r = closure_in_limit(shipped_tower(), "I", all, b);
    EXPECT_EQ(r.kind, LimitClosureResult::Kind::NoWitnessUpTo) << b;
    EXPECT_EQ(r.bound, b);
  }
}

TEST(LimitClosure, MemberIsInSet) {
  FamilyDescription fam{FamilyDescription::Kind::Finite, {"I2", "I3"}, false};
  EXPECT_EQ(closure_in_limit(shipped_tower(), "I2", fam, 2).kind, LimitClosureResult::Kind::InSet);
}

TEST(WitnessChain, CoreWitnessesFailOneLevelLater) {
  const auto& t = shipped_tower();
  const auto c = witness_failure_chain(t, "I", {1, 2, 3, 4, 5, 6});
  ASSERT_EQ(c.entries.size(), 6u);
  for (std::size_t k = 0; k < 6; ++k) {
    const auto& e = c.entries[k];
    const std::size_t n = k + 1;
    ASSERT_TRUE(e.witness.has_value()) << n;
    EXPECT_EQ(e.fails_at, std::optional<std::size_t>(n + 1)) << n;
    EXPECT_EQ(e.failing_point, n_id(n + 1));
  }
}

TEST(WitnessChain, LocallyFreePointPersists) {
  const auto c = witness_failure_chain(shipped_tower(), "I2", {3, 4, 5, 6, 7, 8});
  for (const auto& e : c.entries) {
    ASSERT_TRUE(e.witness.has_value());
    EXPECT_FALSE(e.fails_at.has_value()) << e.prefix_level;
  }
}

TEST(WitnessChain, EmptyPrefixPersistsWhenFixed) {
  const auto c = witness_failure_chain(shipped_tower(), "I", {0}, false);
  ASSERT_TRUE(c.entries[0].witness.has_value());
  EXPECT_EQ(c.entries[0].witness->source.size(), 0u);
  EXPECT_FALSE(c.entries[0].fails_at.has_value());
}

TEST(ArStabilization, Dichotomy) {
  const auto& t = shipped_tower();
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto r = ar_stabilization(t, n_id(n));
    EXPECT_EQ(r.kind, ArStabilization::Kind::Stable) << n;
    EXPECT_LE(r.level, n + 2) << n;
  }
  const auto i = ar_stabilization(t, "I");
  EXPECT_EQ(i.kind, ArStabilization::Kind::GrowingUpTo);
  EXPECT_EQ(i.level, t.height());
  // Each level adds the newest family point to the source.
  for (const auto& lv : i.per_level)
    EXPECT_NE(std::find(lv.source.begin(), lv.source.end(), n_id(lv.level)), lv.source.end()) << lv.level;
  const auto one = ar_stabilization(constant_tower(single_point(), 1), "P");
  EXPECT_EQ(one.kind, ArStabilization::Kind::Stable);
  EXPECT_EQ(one.level, 1u);
}

TEST(TowerCb, AInfinity) {
  const auto r = tower_cb_rank(shipped_tower(), 4);
  EXPECT_EQ(r.report.space_rank, std::optional<std::size_t>(1));
  for (std::size_t i = 0; i < r.report.points.size(); ++i)
    EXPECT_EQ(r.report.ranks[i], std::optional<std::size_t>(r.report.points[i] == "I" ? 1 : 0)) << r.report.points[i];
  for (const auto& w : r.warnings) EXPECT_EQ(w.kind, "boundary") << w.point;
}

TEST(TowerCb, NoCorePoints) {
  const auto r = tower_cb_rank(constant_tower(load_pack("a3.json"), 2), 4);
  EXPECT_EQ(r.report.space_rank, std::optional<std::size_t>(0));
}

TEST(TowerCb, DiscreteCoreRemainder) {
  CategoryDatum d(Field(FieldSpec{}), {{"A", false}, {"B", false}});
  const Field& f = d.field();
  for (PointIndex x = 0; x < 2; ++x) {
    d.set_hom(x, x, {x == 0 ? "a" : "b"});
    d.set_compose(x, x, x, 0, 0, {f.one()});
    d.set_identity(x, {f.one()});
    d.set_radical(x, {});
  }
  const auto r = tower_cb_rank(constant_tower(d, 1, false), 4);
  EXPECT_EQ(r.report.space_rank, std::optional<std::size_t>(1));
  EXPECT_EQ(r.report.ranks[0], std::optional<std::size_t>(1));
  EXPECT_EQ(r.report.ranks[1], std::optional<std::size_t>(1));
}

TEST(Tower, LevelsAreDiscreteAsFiniteData) {
  const auto& t = shipped_tower();
  for (std::size_t lv = 1; lv <= 4; ++lv) {
    const auto& d = t.level(lv);
    for (std::uint64_t m = 0; m < (1u << d.point_count()); ++m)
      EXPECT_TRUE(is_closed(d, subset_from_mask(d.point_count(), m)));
  }
}

}  // namespace
