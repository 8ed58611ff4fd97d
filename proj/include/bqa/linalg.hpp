#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "bqa/field.hpp"
#include "bqa/matrix.hpp"

namespace bqa {

template <class F>
struct RowEchelon {
  Matrix<F> reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row, increasing
  std::size_t rank() const { return pivots.size(); }
};

namespace detail {

// GF(2): rows packed into 64-bit words.
inline RowEchelon<PrimeField> rref_gf2(const Matrix<PrimeField>& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::size_t words = (cols + 63) / 64;
  std::vector<std::uint64_t> bits(rows * words, 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (m(r, c)) bits[r * words + c / 64] |= (std::uint64_t{1} << (c % 64));
  auto row_ptr = [&](std::size_t r) { return bits.data() + r * words; };

  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    const std::size_t w = c / 64;
    const std::uint64_t mask = std::uint64_t{1} << (c % 64);
    std::size_t pr = rank;
    while (pr < rows && !(row_ptr(pr)[w] & mask)) ++pr;
    if (pr == rows) continue;
    if (pr != rank) std::swap_ranges(row_ptr(pr), row_ptr(pr) + words, row_ptr(rank));
    const std::uint64_t* piv = row_ptr(rank);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank) continue;
      std::uint64_t* row = row_ptr(r);
      if (row[w] & mask)
        for (std::size_t k = w; k < words; ++k) row[k] ^= piv[k];
    }
    pivots.push_back(c);
    ++rank;
  }
  Matrix<PrimeField> out(m.field(), rows, cols);
  for (std::size_t r = 0; r < rank; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (row_ptr(r)[c / 64] & (std::uint64_t{1} << (c % 64))) out(r, c) = 1;
  return {std::move(out), std::move(pivots)};
}

// Gauss-Jordan over a prime field with first-nonzero pivoting.
inline RowEchelon<PrimeField> rref_prime(const Matrix<PrimeField>& m) {
  const PrimeField& f = m.field();
  Matrix<PrimeField> a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pr = rank;
    while (pr < rows && a(pr, c) == 0) ++pr;
    if (pr == rows) continue;
    if (pr != rank)
      for (std::size_t k = 0; k < cols; ++k) std::swap(a(pr, k), a(rank, k));
    const auto inv = f.inv(a(rank, c));
    for (std::size_t k = c; k < cols; ++k) a(rank, k) = f.mul(a(rank, k), inv);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a(r, c) == 0) continue;
      const auto factor = a(r, c);
      for (std::size_t k = c; k < cols; ++k) a(r, k) = f.sub(a(r, k), f.mul(factor, a(rank, k)));
    }
    pivots.push_back(c);
    ++rank;
  }
  return {std::move(a), std::move(pivots)};
}

// Fraction-free (Bareiss) forward elimination on integer-scaled rows, then
// back substitution to reduced form.
inline RowEchelon<RationalField> rref_rational(const Matrix<RationalField>& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < cols; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < cols; ++c) a[r][c] = m(r, c).get_num() * (l / m(r, c).get_den());
  }
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pr = rank;
    while (pr < rows && sgn(a[pr][c]) == 0) ++pr;
    if (pr == rows) continue;
    if (pr != rank) std::swap(a[pr], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t k = c + 1; k < cols; ++k) {
        mpz_class t = a[rank][c] * a[r][k] - a[r][c] * a[rank][k];
        mpz_divexact(a[r][k].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[r][c] = 0;
    }
    prev = a[rank][c];
    pivots.push_back(c);
    ++rank;
  }
  Matrix<RationalField> out(m.field(), rows, cols);
  for (std::size_t r = 0; r < rank; ++r) {
    const mpz_class& lead = a[r][pivots[r]];
    for (std::size_t c = 0; c < cols; ++c) {
      mpq_class q(a[r][c], lead);
      q.canonicalize();
      out(r, c) = q;
    }
  }
  for (std::size_t r = rank; r-- > 0;) {
    const std::size_t pc = pivots[r];
    for (std::size_t up = 0; up < r; ++up) {
      if (sgn(out(up, pc)) == 0) continue;
      const mpq_class factor = out(up, pc);
      for (std::size_t k = pc; k < cols; ++k) out(up, k) -= factor * out(r, k);
    }
  }
  return {std::move(out), std::move(pivots)};
}

}  // namespace detail

// Reduced row-echelon form with deterministic pivoting (first nonzero entry in
// column order).
template <class F>
RowEchelon<F> rref(const Matrix<F>& m) {
  if constexpr (is_rational_field_v<F>) {
    return detail::rref_rational(m);
  } else {
    if (m.field().characteristic() == 2) return detail::rref_gf2(m);
    return detail::rref_prime(m);
  }
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
  if (m.empty()) return 0;
  return rref(m).rank();
}

// Columns form a basis of ker m.
template <class F>
Matrix<F> kernel_basis(const Matrix<F>& m) {
  const F& f = m.field();
  const std::size_t n = m.cols();
  if (m.rows() == 0) return Matrix<F>::identity(f, n);
  auto e = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free.push_back(c);
  Matrix<F> k(f, n, free.size());
  for (std::size_t j = 0; j < free.size(); ++j) {
    k(free[j], j) = f.one();
    for (std::size_t r = 0; r < e.pivots.size(); ++r) k(e.pivots[r], j) = f.neg(e.reduced(r, free[j]));
  }
  return k;
}

// One solution x of a x = b (free variables zero), or nullopt.
template <class F>
std::optional<Matrix<F>> solve(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("solve: a has " + a.shape() + ", b has " + b.shape());
  const F& f = a.field();
  const std::size_t n = a.cols();
  Matrix<F> x(f, n, b.cols());
  if (a.rows() == 0) return x;
  auto e = rref(a.hstack(b));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    const std::size_t pc = e.pivots[r];
    if (pc >= n) return std::nullopt;
    for (std::size_t k = 0; k < b.cols(); ++k) x(pc, k) = e.reduced(r, n + k);
  }
  return x;
}

// Basis (as columns) of the column space; picks the pivot columns of m.
template <class F>
Matrix<F> column_space(const Matrix<F>& m) {
  if (m.cols() == 0 || m.rows() == 0) return Matrix<F>(m.field(), m.rows(), 0);
  return m.select_columns(rref(m).pivots);
}

// Standard basis vectors completing the column space of b to the whole space,
// as indices into the standard basis of K^n.
template <class F>
std::vector<std::size_t> complement_indices(const Matrix<F>& b) {
  const std::size_t n = b.rows();
  auto e = rref(b.hstack(Matrix<F>::identity(b.field(), n)));
  std::vector<std::size_t> out;
  for (auto p : e.pivots)
    if (p >= b.cols()) out.push_back(p - b.cols());
  return out;
}

template <class F>
Matrix<F> standard_columns(const F& f, std::size_t n, const std::vector<std::size_t>& idx) {
  Matrix<F> m(f, n, idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) m(idx[k], k) = f.one();
  return m;
}

template <class F>
bool is_invertible(const Matrix<F>& m) {
  return m.rows() == m.cols() && rank(m) == m.rows();
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  if (m.rows() == 0) return m;
  auto x = solve(m, Matrix<F>::identity(m.field(), m.rows()));
  if (!x || !(m * *x == Matrix<F>::identity(m.field(), m.rows()))) return std::nullopt;
  return x;
}

// True iff every column of sub lies in the column space of space.
template <class F>
bool column_span_contains(const Matrix<F>& space, const Matrix<F>& sub) {
  if (sub.cols() == 0) return true;
  return rank(space.hstack(sub)) == rank(space);
}

// Basis of the intersection of two column spaces (given by independent columns).
template <class F>
Matrix<F> intersect_spans(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.cols() == 0 || b.cols() == 0) return Matrix<F>(a.field(), a.rows(), 0);
  Matrix<F> k = kernel_basis(a.hstack(b.scaled(a.field().neg(a.field().one()))));
  Matrix<F> vectors = a * k.block(0, 0, a.cols(), k.cols());
  return column_space(vectors);
}

}  // namespace bqa
