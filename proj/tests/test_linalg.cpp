#include <gtest/gtest.h>

#include <random>

#include "bqa/field.hpp"
#include "bqa/linalg.hpp"
#include "bqa/matrix.hpp"

using namespace bqa;

namespace {

template <class F, class Rng>
Matrix<F> random_matrix(const F& f, std::size_t r, std::size_t c, Rng& rng) {
  Matrix<F> m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = f.random(rng);
  return m;
}

Matrix<RationalField> random_rational(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  RationalField q;
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3), zero(0, 2);
  Matrix<RationalField> m(q, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = zero(rng) ? q.from_fraction(num(rng), den(rng)) : q.zero();
  return m;
}

// textbook Gauss-Jordan over any field, used as a reference
template <class F>
std::size_t naive_rank(Matrix<F> m) {
  const F& f = m.field();
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && f.is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(r, k));
    auto inv = f.inv(m(r, c));
    for (std::size_t k = 0; k < m.cols(); ++k) m(r, k) = f.mul(m(r, k), inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || f.is_zero(m(i, c))) continue;
      auto t = m(i, c);
      for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = f.sub(m(i, k), f.mul(t, m(r, k)));
    }
    ++r;
  }
  return r;
}

}  // namespace

TEST(PrimeField, Arithmetic) {
  PrimeField f(7);
  EXPECT_EQ(f.add(5, 4), 2u);
  EXPECT_EQ(f.sub(2, 5), 4u);
  EXPECT_EQ(f.mul(3, 5), 1u);
  EXPECT_EQ(f.inv(3), 5u);
  EXPECT_EQ(f.from_int(-1), 6u);
  EXPECT_EQ(f.from_fraction(1, 2), 4u);
  for (std::uint32_t a = 1; a < 7; ++a) EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
  EXPECT_THROW(f.inv(0), ArithmeticError);
  EXPECT_THROW(PrimeField(8), std::invalid_argument);
}

TEST(RationalField, ExactFractions) {
  RationalField q;
  auto a = q.from_fraction(1, 3), b = q.from_fraction(1, 6);
  EXPECT_EQ(q.add(a, b), q.from_fraction(1, 2));
  EXPECT_EQ(q.from_string("6/4"), q.from_fraction(3, 2));
  EXPECT_THROW(q.from_fraction(1, 0), ArithmeticError);
  EXPECT_THROW(q.inv(q.zero()), ArithmeticError);
}

TEST(Matrix, ShapesAndProducts) {
  PrimeField f(5);
  auto a = Matrix<PrimeField>::from_ints(f, 2, 3, {1, 2, 3, 4, 0, 1});
  auto b = Matrix<PrimeField>::from_ints(f, 3, 1, {1, 1, 1});
  auto c = a * b;
  EXPECT_EQ(c(0, 0), 1u);
  EXPECT_EQ(c(1, 0), 0u);
  EXPECT_THROW(b * a * a, DimensionMismatch);
  EXPECT_EQ(a.transpose().transpose(), a);
  EXPECT_EQ(a.hstack(a).cols(), 6u);
  EXPECT_EQ(a.vstack(a).rows(), 4u);
}

TEST(Linalg, Gf2PackedMatchesGenericElimination) {
  std::mt19937_64 rng(11);
  PrimeField f(2);
  for (int t = 0; t < 200; ++t) {
    auto m = random_matrix(f, 1 + rng() % 9, 1 + rng() % 70, rng);
    auto packed = detail::rref_gf2(m);
    auto generic = detail::rref_prime(m);
    EXPECT_EQ(packed.pivots, generic.pivots);
    EXPECT_EQ(packed.reduced, generic.reduced);
    EXPECT_EQ(packed.rank(), naive_rank(m));
  }
}

TEST(Linalg, KernelAndSolveOverPrimeFields) {
  std::mt19937_64 rng(3);
  for (std::uint32_t p : {2u, 3u, 7u}) {
    PrimeField f(p);
    for (int t = 0; t < 60; ++t) {
      const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
      auto m = random_matrix(f, r, c, rng);
      auto k = kernel_basis(m);
      EXPECT_EQ(k.cols() + rank(m), c);  // rank-nullity
      EXPECT_TRUE((m * k).is_zero());
      EXPECT_EQ(rank(m), naive_rank(m));
      auto x = random_matrix(f, c, 2, rng);
      auto y = m * x;
      auto s = solve(m, y);
      ASSERT_TRUE(s.has_value());
      EXPECT_EQ(m * *s, y);
    }
  }
}

TEST(Linalg, InconsistentSystem) {
  PrimeField f(3);
  auto m = Matrix<PrimeField>::from_ints(f, 2, 1, {1, 1});
  auto y = Matrix<PrimeField>::from_ints(f, 2, 1, {1, 2});
  EXPECT_FALSE(solve(m, y).has_value());
}

TEST(Linalg, RationalBareissMatchesNaive) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 60; ++t) {
    auto m = random_rational(1 + rng() % 5, 1 + rng() % 5, rng);
    EXPECT_EQ(rank(m), naive_rank(m));
    auto k = kernel_basis(m);
    EXPECT_TRUE((m * k).is_zero());
    auto e = rref(m);
    for (std::size_t r = 0; r < e.rank(); ++r) EXPECT_EQ(e.reduced(r, e.pivots[r]), 1);
  }
}

TEST(Linalg, RationalExactInverse) {
  RationalField q;
  Matrix<RationalField> m(q, 2, 2);
  m(0, 0) = q.from_int(2);
  m(0, 1) = q.from_int(1);
  m(1, 0) = q.from_int(1);
  m(1, 1) = q.from_int(1);
  auto inv = inverse(m);
  ASSERT_TRUE(inv.has_value());
  EXPECT_EQ(m * *inv, Matrix<RationalField>::identity(q, 2));
  EXPECT_EQ((*inv)(0, 1), q.from_int(-1));
  Matrix<RationalField> sing(q, 2, 2);
  sing(0, 0) = q.from_fraction(1, 2);
  sing(1, 0) = q.from_fraction(1, 3);
  EXPECT_FALSE(inverse(sing).has_value());
}

TEST(Linalg, EmptyShapes) {
  PrimeField f(2);
  Matrix<PrimeField> z(f, 0, 3);
  EXPECT_EQ(rank(z), 0u);
  EXPECT_EQ(kernel_basis(z).cols(), 3u);
  Matrix<PrimeField> w(f, 3, 0);
  EXPECT_EQ(kernel_basis(w).cols(), 0u);
  EXPECT_EQ(column_space(w).cols(), 0u);
}

TEST(Linalg, SpanHelpers) {
  PrimeField f(3);
  auto a = Matrix<PrimeField>::from_ints(f, 3, 2, {1, 0, 0, 1, 0, 0});
  auto b = Matrix<PrimeField>::from_ints(f, 3, 2, {1, 0, 1, 0, 0, 1});
  auto i = intersect_spans(a, b);
  EXPECT_EQ(i.cols(), 1u);
  EXPECT_TRUE(column_span_contains(a, i));
  EXPECT_TRUE(column_span_contains(b, i));
}
