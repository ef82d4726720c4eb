#pragma once

// Exact coefficient fields: GF(p) for word-sized primes and the rationals.
//
// A field is a small value type exposing `value_type` plus the arithmetic
// used by the polynomial kernels. Everything above this header is templated
// on the field type, so the prime-field path never pays for bignums.

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace dlocus {

class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("division by zero") {}
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

struct FieldSpec {
  enum class Kind { rationals, prime };

  Kind kind = Kind::prime;
  std::uint32_t characteristic = 32003;

  static FieldSpec rationals() { return {Kind::rationals, 0}; }
  static FieldSpec prime(std::uint32_t p = 32003) {
    if (p <= 2 || !is_prime(p))
      throw std::invalid_argument("field characteristic must be an odd prime, got " + std::to_string(p));
    return {Kind::prime, p};
  }

  /// "Q" or "GF(p)", the same spelling the problem-file grammar accepts.
  std::string name() const {
    return kind == Kind::rationals ? "Q" : "GF(" + std::to_string(characteristic) + ")";
  }

  static FieldSpec parse(std::string_view text) {
    if (text == "Q" || text == "QQ") return rationals();
    if (text.size() > 4 && text.substr(0, 3) == "GF(" && text.back() == ')') {
      auto digits = std::string(text.substr(3, text.size() - 4));
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 10)
        throw std::invalid_argument("bad field: " + std::string(text));
      auto p = std::stoull(digits);
      if (p >= (1ULL << 32)) throw std::invalid_argument("prime too large: " + digits);
      return prime(static_cast<std::uint32_t>(p));
    }
    throw std::invalid_argument("unknown field: " + std::string(text));
  }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// Arithmetic modulo a prime p < 2^32; residues are kept in [0, p).
class PrimeField {
 public:
  using value_type = std::uint32_t;

  explicit PrimeField(std::uint32_t p = 32003) : p_(p) {
    if (p <= 2 || !is_prime(p))
      throw std::invalid_argument("field characteristic must be an odd prime, got " + std::to_string(p));
  }

  std::uint32_t characteristic() const { return p_; }
  FieldSpec spec() const { return {FieldSpec::Kind::prime, p_}; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }

  value_type from_int(std::int64_t v) const {
    auto r = v % static_cast<std::int64_t>(p_);
    return static_cast<value_type>(r < 0 ? r + p_ : r);
  }
  value_type from_ratio(std::int64_t num, std::int64_t den) const { return div(from_int(num), from_int(den)); }

  /// Decimal integer literal of any length, reduced mod p.
  value_type from_decimal(std::string_view digits) const {
    std::uint64_t r = 0;
    for (char ch : digits) r = (r * 10 + static_cast<std::uint64_t>(ch - '0')) % p_;
    return static_cast<value_type>(r);
  }

  value_type add(value_type a, value_type b) const {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<value_type>(s >= p_ ? s - p_ : s);
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : static_cast<value_type>(std::uint64_t{a} + p_ - b); }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const { return static_cast<value_type>(std::uint64_t{a} * b % p_); }

  value_type inv(value_type a) const {
    if (a == 0) throw DivisionByZero();
    std::int64_t t = 0, new_t = 1, r = p_, new_r = a;
    while (new_r != 0) {
      auto q = r / new_r;
      t = std::exchange(new_t, t - q * new_t);
      r = std::exchange(new_r, r - q * new_r);
    }
    return from_int(t);
  }
  value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }

  bool is_zero(value_type a) const { return a == 0; }
  bool is_one(value_type a) const { return a == 1; }
  bool equal(value_type a, value_type b) const { return a == b; }
  /// Residues above p/2 count as negative for printing.
  bool is_negative(value_type a) const { return a > p_ / 2; }

  /// Symmetric representative, e.g. p-1 prints as "-1".
  std::string to_string(value_type a) const {
    if (is_negative(a)) return "-" + std::to_string(p_ - a);
    return std::to_string(a);
  }

  template <class Rng>
  value_type random(Rng& rng) const {
    return std::uniform_int_distribution<std::uint32_t>(0, p_ - 1)(rng);
  }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint32_t p_;
};

/// The rationals, stored in lowest terms with a positive denominator (GMP mpq).
class RationalField {
 public:
  using value_type = mpq_class;

  FieldSpec spec() const { return FieldSpec::rationals(); }
  std::uint32_t characteristic() const { return 0; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(std::int64_t v) const { return value_type(mpz_class(std::to_string(v))); }
  value_type from_ratio(std::int64_t num, std::int64_t den) const {
    if (den == 0) throw DivisionByZero();
    value_type r(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
    r.canonicalize();
    return r;
  }
  value_type from_decimal(std::string_view digits) const { return value_type(mpz_class(std::string(digits))); }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    if (sgn(a) == 0) throw DivisionByZero();
    return 1 / a;
  }
  value_type div(const value_type& a, const value_type& b) const {
    if (sgn(b) == 0) throw DivisionByZero();
    return a / b;
  }

  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool is_one(const value_type& a) const { return a == 1; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool is_negative(const value_type& a) const { return sgn(a) < 0; }
  std::string to_string(const value_type& a) const { return a.get_str(); }

  template <class Rng>
  value_type random(Rng& rng) const {
    std::uniform_int_distribution<int> num(-50, 50), den(1, 20);
    return from_ratio(num(rng), den(rng));
  }

  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

/// Multiplicative inverse; throws DivisionByZero on zero.
template <class Field>
typename Field::value_type invert(const Field& field, const typename Field::value_type& a) {
  return field.inv(a);
}

/// Calls `fn(field)` with the concrete field type named by `spec`.
template <class Fn>
decltype(auto) with_field(const FieldSpec& spec, Fn&& fn) {
  if (spec.kind == FieldSpec::Kind::rationals) return fn(RationalField{});
  return fn(PrimeField{spec.characteristic});
}

}  // namespace dlocus
