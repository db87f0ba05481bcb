#include <gtest/gtest.h>

#include "spectra/algebra.hpp"
#include "spectra/error.hpp"
#include "support.hpp"

using namespace spectra;
using namespace spectra::test;

namespace {

AddMorphism generator(const CategoryDatum& d, const std::string& x, const std::string& y) {
  const PointIndex xi = d.point_index(x), yi = d.point_index(y);
  AddMorphism g = AddMorphism::zero(d, AddObject{{xi}}, AddObject{{yi}});
  g.blocks[0][0] = d.basis_vector(xi, yi, 0);
  return g;
}

TEST(Validate, SinglePointIsValid) { EXPECT_TRUE(validate_datum(single_point()).valid()); }

TEST(Validate, BrokenAssociativityNamesTheTriple) {
  CategoryDatum d = load_pack("a2.json");
  // Make the cross composite M2 -> M1 -> M2 nonzero; (g f) g' then differs from g (f g').
  const PointIndex m1 = d.point_index("M1"), m2 = d.point_index("M2");
  d.set_compose(m2, m1, m2, 0, 0, {d.field().one()});
  const auto r = validate_datum(d);
  ASSERT_FALSE(r.valid());
  bool named = false;
  for (const auto& v : r.violations)
    if (v.kind == "associativity" && v.detail.find("M") != std::string::npos) named = true;
  EXPECT_TRUE(named);
}

TEST(Validate, ShippedPacksAreValid) {
  for (int n = 1; n <= 5; ++n) EXPECT_TRUE(validate_datum(load_pack("a" + std::to_string(n) + ".json")).valid()) << n;
}

TEST(Validate, DuplicateBasisNamesRejected) {
  CategoryDatum d(Field(FieldSpec{}), {{"A", true}, {"B", true}});
  d.set_hom(0, 0, {"a"});
  EXPECT_THROW(d.set_hom(1, 1, {"a"}), InputError);
}

TEST(HomMatrix, IdentityAndZero) {
  const CategoryDatum d = load_pack("a3.json");
  for (PointIndex z = 0; z < d.point_count(); ++z)
    for (PointIndex y = 0; y < d.point_count(); ++y) {
      EXPECT_EQ(hom_matrix(d, z, AddMorphism::identity(d, y)), Matrix::identity(d.field(), d.hom_dim(z, y)));
      EXPECT_TRUE(hom_matrix(d, z, AddMorphism::zero(d, AddObject{{y}}, AddObject{{z}})).is_zero());
    }
}

TEST(HomMatrix, A2CrossGeneratorActsByZeroOnM2) {
  const CategoryDatum d = load_pack("a2.json");
  const Matrix m = hom_matrix(d, d.point_index("M2"), generator(d, "M1", "M2"));
  EXPECT_EQ(m.rows(), 1u);
  EXPECT_EQ(m.cols(), 1u);
  EXPECT_TRUE(m.is_zero());
}

TEST(SplitEpi, Examples) {
  const CategoryDatum d = load_pack("a2.json");
  const PointIndex m1 = d.point_index("M1"), m2 = d.point_index("M2");
  EXPECT_TRUE(is_split_epi(d, AddMorphism::identity(d, m2)));
  EXPECT_FALSE(is_split_epi(d, generator(d, "M1", "M2")));
  AddMorphism two = AddMorphism::zero(d, AddObject{{m1, m1}}, AddObject{{m2}});
  two.blocks[0][0] = d.basis_vector(m1, m2, 0);
  two.blocks[0][1] = d.basis_vector(m1, m2, 0);
  EXPECT_FALSE(is_split_epi(d, two));
}

TEST(Algebra, Dimensions) {
  const CategoryDatum one = single_point();
  const CategoryAlgebra a1(one);
  EXPECT_EQ(a1.dim(), 1u);
  EXPECT_EQ(a1.unit(), vec(one.field(), {1}));
  const CategoryDatum a2 = load_pack("a2.json");
  EXPECT_EQ(build_algebra(a2).dim(), 4u);
  // Two points without cross maps: the unit splits into the two idempotents.
  const CategoryDatum two = discrete({"A", "B"});
  const CategoryAlgebra alg(two);
  EXPECT_EQ(alg.multiply(alg.idempotent(0), alg.idempotent(1)), zero_vector(two.field(), 2));
}

TEST(Algebra, MultiplicationIsAssociative) {
  const CategoryDatum d = load_pack("a3.json");
  const CategoryAlgebra alg(d);
  for (std::size_t i = 0; i < alg.dim(); ++i)
    for (std::size_t j = 0; j < alg.dim(); ++j)
      for (std::size_t k = 0; k < alg.dim(); ++k) {
        const Vector a = alg.basis_element(i), b = alg.basis_element(j), c = alg.basis_element(k);
        EXPECT_EQ(alg.multiply(alg.multiply(a, b), c), alg.multiply(a, alg.multiply(b, c)));
      }
}

TEST(IdempotentIdeal, Examples) {
  const CategoryDatum d = load_pack("a2.json");
  const CategoryAlgebra alg(d);
  EXPECT_EQ(idempotent_ideal(alg, d.full_set()).size(), alg.dim());
  EXPECT_TRUE(idempotent_ideal(alg, d.empty_set()).empty());
  const BlockIdeal j = idempotent_ideal(d, set_of(d, {"M1"}));
  EXPECT_EQ(j.dim(), 3u);
  EXPECT_TRUE(j.contains_identity(d, d.point_index("M1")));
  EXPECT_FALSE(j.contains_identity(d, d.point_index("M2")));
}

TEST(Restrict, KeepsBasisNamesAndConstants) {
  const CategoryDatum d = load_pack("a4.json");
  const CategoryDatum r = d.restrict_to({1, 3});
  ASSERT_EQ(r.point_count(), 2u);
  EXPECT_EQ(r.point(0).id, "M2");
  EXPECT_EQ(r.hom_basis(0, 1), d.hom_basis(1, 3));
  EXPECT_TRUE(validate_datum(r).valid());
}

}  // namespace
