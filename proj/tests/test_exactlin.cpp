#include <gtest/gtest.h>

#include "liedeform/exactlin.hpp"
#include "support/generators.hpp"

using namespace liedeform;

namespace {

Matrix rows(std::vector<Vector> r) { return Matrix::from_rows(r); }

bool is_zero_product(const Matrix& m, const Vector& v) { return is_zero(m * v); }

}  // namespace

TEST(Scalar, ParsesIntegersAndFractionsInLowestTerms) {
  EXPECT_EQ(parse_scalar("3"), Scalar(3));
  EXPECT_EQ(parse_scalar("-6/4"), Scalar(-3, 2));
  EXPECT_EQ(to_string(parse_scalar("6/4")), "3/2");
  EXPECT_EQ(to_string(parse_scalar("0/7")), "0");
  EXPECT_EQ(parse_scalar("+3/9"), Scalar(1, 3));
}

TEST(Scalar, RejectsZeroDenominatorAndGarbage) {
  EXPECT_THROW(parse_scalar("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_scalar("abc"), std::invalid_argument);
  EXPECT_THROW(parse_scalar(""), std::invalid_argument);
  EXPECT_THROW(parse_scalar("1.5"), std::invalid_argument);
  EXPECT_THROW(parse_scalar("4/-2"), std::invalid_argument);
}

TEST(Rank, IdentityDependentRowsAndZero) {
  EXPECT_EQ(rank(Matrix::identity(3)), 3u);
  EXPECT_EQ(rank(rows({{1, 2}, {2, 4}})), 1u);
  EXPECT_EQ(rank(Matrix(4, 7)), 0u);
}

TEST(Kernel, IdentityZeroAndRankOne) {
  EXPECT_EQ(kernel_basis(Matrix::identity(3)).dim(), 0u);
  EXPECT_EQ(kernel_basis(Matrix(2, 5)).dim(), 5u);
  const Subspace k = kernel_basis(rows({{1, 2}, {2, 4}}));
  ASSERT_EQ(k.dim(), 1u);
  const Vector& v = k.basis()[0];
  EXPECT_EQ(v[0], Scalar(-2) * v[1]);
  EXPECT_NE(v[1], 0);
}

TEST(Image, IdentityZeroAndRankOne) {
  EXPECT_EQ(image_basis(Matrix::identity(3)).dim(), 3u);
  EXPECT_EQ(image_basis(Matrix(3, 2)).dim(), 0u);
  const Subspace im = image_basis(rows({{1, 2}, {2, 4}}));
  ASSERT_EQ(im.dim(), 1u);
  EXPECT_TRUE(im.contains(Vector{1, 2}));
  EXPECT_FALSE(im.contains(Vector{1, 0}));
}

TEST(Solve, IdentityZeroAndUnderdetermined) {
  const Vector b{Scalar(1, 3), -2, 5};
  EXPECT_EQ(*solve_particular(Matrix::identity(3), b), b);
  EXPECT_FALSE(solve_particular(Matrix(2, 2), Vector{1, 0}).has_value());
  const Matrix m = rows({{1, 2}, {2, 4}});
  const auto x = solve_particular(m, Vector{1, 2});
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ((*x)[0] + 2 * (*x)[1], Scalar(1));
  EXPECT_FALSE(solve_particular(m, Vector{1, 3}).has_value());
}

TEST(Solve, ZeroColumnMatrixOnlySolvesZero) {
  EXPECT_TRUE(solve_particular(Matrix(3, 0), Vector(3)).has_value());
  EXPECT_FALSE(solve_particular(Matrix(3, 0), Vector{0, 1, 0}).has_value());
}

TEST(Inverse, RoundTripAndSingular) {
  const Matrix m = rows({{2, 1}, {Scalar(1, 2), 3}});
  EXPECT_EQ(inverse(m) * m, Matrix::identity(2));
  EXPECT_EQ(determinant(m), Scalar(11, 2));
  EXPECT_THROW(inverse(rows({{1, 2}, {2, 4}})), std::domain_error);
  EXPECT_EQ(determinant(rows({{1, 2}, {2, 4}})), 0);
}

TEST(Subspace, SpanIsCanonical) {
  const Subspace a = Subspace::span(3, {{1, 1, 0}, {0, 1, 0}});
  const Subspace b = Subspace::span(3, {{2, 0, 0}, {1, 3, 0}, {0, 0, 0}});
  EXPECT_EQ(a.basis(), b.basis());
  EXPECT_EQ(a.dim(), 2u);
}

TEST(QuotientCoords, FullSpaceZeroAndBorelAxis) {
  const QuotientMap full = quotient_coords(Subspace::full(3), 3);
  EXPECT_EQ(full.quotient_dim(), 0u);
  EXPECT_EQ(full.projection.rows(), 0u);

  const QuotientMap zero = quotient_coords(Subspace(3), 3);
  EXPECT_EQ(zero.projection, Matrix::identity(3));

  // span{h, e} in (h, e, f): the complement rule keeps the f axis
  const QuotientMap b = quotient_coords(Subspace::span(3, {{1, 0, 0}, {0, 1, 0}}), 3);
  ASSERT_EQ(b.quotient_dim(), 1u);
  EXPECT_EQ(b.complement, std::vector<std::size_t>{2});
  EXPECT_EQ((b.projection * Vector{5, 7, Scalar(1, 3)}), (Vector{Scalar(1, 3)}));
}

TEST(QuotientCoords, SlantedSubspace) {
  const Subspace s = Subspace::span(3, {{1, 1, 0}});
  const QuotientMap q = quotient_coords(s, 3);
  EXPECT_EQ(q.quotient_dim(), 2u);
  EXPECT_TRUE(is_zero(q.projection * Vector{1, 1, 0}));
  EXPECT_EQ(q.projection * q.section, Matrix::identity(2));
  EXPECT_EQ(rank(q.projection), 2u);
}

// ---------------------------------------------------------------------------
// properties

TEST(ExactlinProperty, RankNullityAndKernelVectorsAnnihilate) {
  gen::Rng rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t r = rng.integer(0, 6), c = rng.integer(0, 6);
    const Matrix m = trial % 3 == 0 ? rng.low_rank(r, c, rng.integer(0, 3)) : rng.matrix(r, c);
    const Subspace k = kernel_basis(m);
    EXPECT_EQ(rank(m) + k.dim(), c);
    for (const auto& v : k.basis()) EXPECT_TRUE(is_zero_product(m, v));
    EXPECT_EQ(image_basis(m).dim(), rank(m));
    EXPECT_LE(rank(m), std::min(r, c));
  }
}

TEST(ExactlinProperty, SolveVerifiesBySubstitution) {
  gen::Rng rng(12);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t r = rng.integer(1, 5), c = rng.integer(1, 5);
    const Matrix m = rng.low_rank(r, c, rng.integer(0, 3));
    const Vector reachable = m * rng.vector(c);
    const auto x = solve_particular(m, reachable);
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ(m * *x, reachable);
    const Vector b = rng.vector(r);
    if (auto y = solve_particular(m, b)) EXPECT_EQ(m * *y, b);
    else EXPECT_EQ(rank(hstack(m, Matrix::from_columns(r, std::vector<Vector>{b}))), rank(m) + 1);
  }
}

TEST(ExactlinProperty, QuotientKillsSubspaceAndSectionSplits) {
  gen::Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.integer(1, 6);
    std::vector<Vector> vs;
    for (int i = rng.integer(0, static_cast<int>(n)); i > 0; --i) vs.push_back(rng.vector(n));
    const Subspace s = Subspace::span(n, vs);
    const QuotientMap q = quotient_coords(s, n);
    EXPECT_EQ(q.quotient_dim(), n - s.dim());
    for (const auto& v : vs) EXPECT_TRUE(is_zero(q.projection * v));
    EXPECT_EQ(q.projection * q.section, Matrix::identity(n - s.dim()));
    // v = basis * sub_coordinates(v) + section * projection(v)
    const Vector v = rng.vector(n);
    Vector back = q.section * (q.projection * v);
    const Vector c = q.sub_coordinates(v);
    for (std::size_t i = 0; i < s.dim(); ++i)
      for (std::size_t a = 0; a < n; ++a) back[a] += c[i] * s.basis()[i][a];
    EXPECT_EQ(back, v);
  }
}

TEST(ExactlinProperty, InverseAndDeterminantAgree) {
  gen::Rng rng(14);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = rng.integer(1, 4);
    const Matrix m = rng.matrix(n, n, 0.2);
    if (determinant(m) == 0) {
      EXPECT_LT(rank(m), n);
      continue;
    }
    EXPECT_EQ(rank(m), n);
    EXPECT_EQ(m * inverse(m), Matrix::identity(n));
    EXPECT_EQ(determinant(inverse(m)) * determinant(m), Scalar(1));
  }
}
