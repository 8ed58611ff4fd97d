#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <gmpxx.h>

namespace bqa {

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Prime field GF(p). Elements are stored as residues in [0, p).
class PrimeField {
 public:
  using value_type = std::uint32_t;

  explicit PrimeField(std::uint32_t p = 2) : p_(p) {
    if (!is_prime(p)) {
      throw std::invalid_argument("GF(" + std::to_string(p) + "): modulus is not prime");
    }
    if (p >= (1u << 31)) throw std::invalid_argument("GF(p): modulus must be below 2^31");
  }

  std::uint32_t characteristic() const { return p_; }
  std::optional<std::uint64_t> order() const { return p_; }
  std::string name() const { return "GF(" + std::to_string(p_) + ")"; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }

  value_type from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<value_type>(r);
  }
  value_type from_fraction(long long num, long long den) const {
    value_type d = from_int(den);
    if (d == 0) throw ArithmeticError("denominator vanishes in " + name());
    return mul(from_int(num), inv(d));
  }

  value_type add(value_type a, value_type b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  value_type inv(value_type a) const {
    if (a == 0) throw ArithmeticError("division by zero in " + name());
    // Fermat: a^(p-2)
    std::uint64_t result = 1, base = a, e = p_ - 2;
    while (e) {
      if (e & 1) result = result * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return static_cast<value_type>(result);
  }
  value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }
  bool is_zero(value_type a) const { return a == 0; }
  bool is_one(value_type a) const { return a == 1; }
  bool equal(value_type a, value_type b) const { return a == b; }

  // Enumeration of the field: element(k) for k in [0, p).
  value_type element(std::uint64_t k) const { return static_cast<value_type>(k % p_); }

  template <class Rng>
  value_type random(Rng& rng) const {
    return std::uniform_int_distribution<std::uint32_t>(0, p_ - 1)(rng);
  }

  std::string to_string(value_type a) const {
    // Print residues above p/2 as negatives; keeps GF(p) fixtures readable.
    if (p_ > 2 && a > p_ / 2) return "-" + std::to_string(p_ - a);
    return std::to_string(a);
  }

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  static bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) return false;
    }
    return true;
  }

  std::uint32_t p_;
};

// The rationals, with arbitrary-precision numerator and denominator.
class RationalField {
 public:
  using value_type = mpq_class;

  std::uint32_t characteristic() const { return 0; }
  std::optional<std::uint64_t> order() const { return std::nullopt; }
  std::string name() const { return "Q"; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const { return mpq_class(mpz_class(std::to_string(v))); }
  value_type from_fraction(long long num, long long den) const {
    if (den == 0) throw ArithmeticError("zero denominator");
    mpq_class q(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
    q.canonicalize();
    return q;
  }
  value_type from_string(const std::string& s) const {
    mpq_class q(s);
    if (q.get_den() == 0) throw ArithmeticError("zero denominator");
    q.canonicalize();
    return q;
  }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    if (sgn(a) == 0) throw ArithmeticError("division by zero in Q");
    return 1 / a;
  }
  value_type div(const value_type& a, const value_type& b) const { return a / b; }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool is_one(const value_type& a) const { return a == 1; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }

  // Enumeration order 0, 1, -1, 2, -2, ... (only used for bounded searches).
  value_type element(std::uint64_t k) const {
    const long long m = static_cast<long long>((k + 1) / 2);
    return from_int(k % 2 ? m : -m);
  }

  template <class Rng>
  value_type random(Rng& rng) const {
    return from_int(std::uniform_int_distribution<int>(-4, 4)(rng));
  }

  std::string to_string(const value_type& a) const { return a.get_str(); }

  bool operator==(const RationalField&) const { return true; }
};

template <class F>
inline constexpr bool is_prime_field_v = std::is_same_v<F, PrimeField>;

template <class F>
inline constexpr bool is_rational_field_v = std::is_same_v<F, RationalField>;

}  // namespace bqa
