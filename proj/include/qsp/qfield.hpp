#pragma once

// Exact arithmetic in Z[q,q^-1] ⊂ Q[q,q^-1] ⊂ Q(q).
//
// LaurentPolynomial keeps a sparse, exponent-sorted list of nonzero rational
// coefficients. RationalFunction keeps a reduced fraction N/D where D is an
// ordinary polynomial whose constant term equals 1; every power of q lives in
// the numerator. With that normalization two equal fractions have identical
// representations, so operator== is structural.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qsp::qfield {

using Rational = mpq_class;

class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("division by zero in Q(q)") {}
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at offset " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class LaurentPolynomial {
 public:
  using Term = std::pair<int, Rational>;

  LaurentPolynomial() = default;
  LaurentPolynomial(long c);  // NOLINT(google-explicit-constructor)
  LaurentPolynomial(const Rational& c);  // NOLINT(google-explicit-constructor)

  static LaurentPolynomial monomial(int exponent, const Rational& coeff = 1);
  // Builds from arbitrary (exponent, coefficient) pairs; merges and drops zeros.
  static LaurentPolynomial from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  bool is_monomial() const { return terms_.size() == 1; }
  // Precondition: nonzero.
  int low_degree() const { return terms_.front().first; }
  int high_degree() const { return terms_.back().first; }
  const Rational& low_coefficient() const { return terms_.front().second; }
  const Rational& high_coefficient() const { return terms_.back().second; }
  Rational coefficient(int exponent) const;
  const std::vector<Term>& terms() const { return terms_; }

  LaurentPolynomial shifted(int k) const;  // multiply by q^k
  LaurentPolynomial bar() const;           // q -> q^-1
  LaurentPolynomial scaled(const Rational& c) const;
  bool has_integer_coefficients() const;

  LaurentPolynomial operator-() const;
  LaurentPolynomial& operator+=(const LaurentPolynomial& o);
  LaurentPolynomial& operator-=(const LaurentPolynomial& o);
  LaurentPolynomial& operator*=(const LaurentPolynomial& o);
  friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) { return a += b; }
  friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial& b) { return a -= b; }
  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b);

  friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const LaurentPolynomial& a, const LaurentPolynomial& b) { return !(a == b); }

  // "c_k*q^k + ... " with exponents descending; "0" for the zero polynomial.
  std::string to_string() const;
  std::uint64_t hash() const;

 private:
  std::vector<Term> terms_;  // sorted by exponent, no zero coefficients
};

class RationalFunction {
 public:
  RationalFunction() : den_(1) {}
  RationalFunction(long c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(const Rational& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(LaurentPolynomial p) : num_(std::move(p)), den_(1) {}  // NOLINT(google-explicit-constructor)
  // Throws DivisionByZero when den is zero.
  RationalFunction(const LaurentPolynomial& num, const LaurentPolynomial& den);

  static RationalFunction q_power(int k) { return LaurentPolynomial::monomial(k); }

  const LaurentPolynomial& numerator() const { return num_; }
  const LaurentPolynomial& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_laurent() const { return den_.is_one(); }

  RationalFunction bar() const;
  RationalFunction inverse() const;

  RationalFunction operator-() const;
  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o);
  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

  std::string to_string() const;
  std::uint64_t hash() const;

 private:
  struct Canonical {};
  RationalFunction(LaurentPolynomial num, LaurentPolynomial den, Canonical)
      : num_(std::move(num)), den_(std::move(den)) {}
  void canonicalize();

  LaurentPolynomial num_;
  LaurentPolynomial den_;  // polynomial, constant term 1
};

// Valuation at q = ∞: top degree of numerator minus top degree of
// denominator. Zero has valuation +∞, reported as nullopt.
std::optional<int> infinity_valuation(const RationalFunction& f);

// Value at q = ∞ when f ∈ A∞, nullopt when f is not regular there.
std::optional<Rational> value_at_infinity(const RationalFunction& f);

inline bool in_a_infinity(const RationalFunction& f) {
  auto v = infinity_valuation(f);
  return !v || *v <= 0;
}
inline bool in_q_inverse_a_infinity(const RationalFunction& f) {
  auto v = infinity_valuation(f);
  return !v || *v <= -1;
}

// Symmetric q-integers with q_i = q^d.
LaurentPolynomial q_integer(long n, int d = 1);
LaurentPolynomial q_factorial(long n, int d = 1);  // throws std::domain_error for n < 0
LaurentPolynomial q_binomial(long m, long n, int d = 1);  // 0 <= n, any m

// Exact inverse of to_string for both classes; tolerant of whitespace and of
// the short forms "q", "-q^-1", "3/2".
LaurentPolynomial parse_laurent(std::string_view text);
RationalFunction parse_rational_function(std::string_view text);

}  // namespace qsp::qfield
