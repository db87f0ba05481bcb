#include <gtest/gtest.h>

#include <random>

#include "spectra/error.hpp"
#include "support.hpp"

using namespace spectra;
using spectra::test::mat;
using spectra::test::vec;

namespace {

const Field F5(FieldSpec::prime(5));
const Field F3(FieldSpec::prime(3));
const Field Q(FieldSpec::rational());

TEST(Field, PrimeArithmetic) {
  EXPECT_EQ(F5.add(F5.from_int(3), F5.from_int(4)), F5.from_int(2));
  EXPECT_EQ(F5.mul(F5.from_int(3), F5.inv(F5.from_int(3))), F5.one());
  EXPECT_EQ(F5.from_int(-1), F5.from_int(4));
  EXPECT_THROW(F5.inv(F5.zero()), InputError);
}

TEST(Field, RejectsNonPrimeModulus) {
  EXPECT_THROW(FieldSpec::prime(1), InputError);
  EXPECT_THROW(FieldSpec::prime(9), InputError);
  EXPECT_NO_THROW(FieldSpec::prime(2));
}

TEST(Field, ScalarStrings) {
  EXPECT_EQ(F5.format(F5.parse("7")), "2");
  EXPECT_EQ(F5.format(F5.parse("-1")), "4");
  EXPECT_EQ(Q.format(Q.parse("6/4")), "3/2");
  EXPECT_EQ(Q.format(Q.parse("-2/-4")), "1/2");
  EXPECT_EQ(Q.format(Q.from_int(3)), "3/1");
  EXPECT_THROW(Q.parse("1/0"), InputError);
  EXPECT_THROW(F5.parse("x"), InputError);
  EXPECT_THROW(F5.parse("1/2"), InputError);
}

TEST(Field, RationalOverflowIsAResourceError) {
  const Scalar big = Q.from_int(std::int64_t{1} << 62);
  EXPECT_THROW(Q.mul(big, big), ResourceError);
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(Matrix::identity(F5, 2)), 2u);
  EXPECT_EQ(rank(Matrix(F5, 3, 4)), 0u);
  EXPECT_EQ(rank(mat(F5, {{1, 2}, {2, 4}})), 1u);
  // Over the rationals the same rows are independent after a perturbation.
  EXPECT_EQ(rank(mat(Q, {{1, 2}, {2, 5}})), 2u);
}

TEST(IsSurjective, Examples) {
  EXPECT_TRUE(is_surjective(Matrix(F5, 0, 3)));
  EXPECT_FALSE(is_surjective(mat(F5, {{1}, {1}})));
  EXPECT_TRUE(is_surjective(mat(F5, {{1, 0, 2}, {0, 1, 3}})));
}

TEST(SolveRight, Examples) {
  const Matrix b = mat(F3, {{2, 1}, {0, 1}});
  EXPECT_EQ(*solve_right(Matrix::identity(F3, 2), b), b);
  EXPECT_FALSE(solve_right(Matrix(F3, 2, 2), b).has_value());
  const auto x = solve_right(mat(F3, {{1, 1}}), mat(F3, {{1}}));
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x, mat(F3, {{1}, {0}}));
  EXPECT_THROW(solve_right(Matrix(F3, 2, 2), Matrix(F3, 3, 1)), InputError);
}

TEST(Kernel, SpansNullSpace) {
  const Matrix m = mat(F5, {{1, 2, 3}, {2, 4, 1}});
  const Matrix k = kernel(m);
  EXPECT_EQ(k.cols(), 3 - rank(m));
  EXPECT_TRUE((m * k).is_zero());
}

TEST(Subspace, InsertAndReduce) {
  SubspaceBuilder s(F5, 3);
  EXPECT_TRUE(s.insert(vec(F5, {1, 2, 0})));
  EXPECT_FALSE(s.insert(vec(F5, {2, 4, 0})));
  EXPECT_TRUE(s.insert(vec(F5, {0, 0, 1})));
  EXPECT_EQ(s.dim(), 2u);
  EXPECT_TRUE(s.contains(vec(F5, {3, 1, 4})));
  EXPECT_FALSE(s.contains(vec(F5, {1, 0, 0})));
}

// Rank is invariant under multiplication by invertible matrices, and
// solve_right returns genuine solutions.
TEST(MatrixProperties, RandomizedOverSmallPrime) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coef(0, 4), size(1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = size(rng), c = size(rng);
    Matrix a(F5, r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) a(i, j) = F5.from_int(coef(rng));
    Matrix u = Matrix::identity(F5, r);
    for (std::size_t i = 0; i + 1 < r; ++i) u(i, i + 1) = F5.from_int(coef(rng));
    EXPECT_EQ(rank(u * a), rank(a));
    EXPECT_EQ(rank(a), rank(a.transpose()));
    Matrix x(F5, c, 1);
    for (std::size_t j = 0; j < c; ++j) x(j, 0) = F5.from_int(coef(rng));
    const Matrix b = a * x;
    const auto sol = solve_right(a, b);
    ASSERT_TRUE(sol.has_value());
    EXPECT_EQ(a * *sol, b);
  }
}

}  // namespace
