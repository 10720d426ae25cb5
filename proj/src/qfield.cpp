#include "qsp/qfield.hpp"

#include <algorithm>
#include <cctype>

namespace qsp::qfield {

namespace {

using Dense = std::vector<Rational>;  // coefficient of q^k at index k

void trim(Dense& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// p must have low degree >= 0.
Dense to_dense(const LaurentPolynomial& p) {
  Dense out;
  if (p.is_zero()) return out;
  out.assign(static_cast<std::size_t>(p.high_degree()) + 1, Rational(0));
  for (const auto& [e, c] : p.terms()) out[static_cast<std::size_t>(e)] = c;
  return out;
}

LaurentPolynomial from_dense(const Dense& p, int shift = 0) {
  std::vector<LaurentPolynomial::Term> terms;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] != 0) terms.emplace_back(static_cast<int>(k) + shift, p[k]);
  return LaurentPolynomial::from_terms(std::move(terms));
}

// Remainder of a modulo b (b nonzero), in place on a.
void reduce_mod(Dense& a, const Dense& b) {
  const std::size_t db = b.size() - 1;
  const Rational& lead = b.back();
  while (!a.empty() && a.size() - 1 >= db) {
    Rational f = a.back() / lead;
    std::size_t shift = a.size() - 1 - db;
    for (std::size_t k = 0; k <= db; ++k) a[shift + k] -= f * b[k];
    a.pop_back();
    trim(a);
  }
}

Dense exact_quotient(Dense a, const Dense& b) {
  const std::size_t db = b.size() - 1;
  const Rational& lead = b.back();
  Dense quot(a.size() >= b.size() ? a.size() - db : 0, Rational(0));
  while (!a.empty() && a.size() - 1 >= db) {
    Rational f = a.back() / lead;
    std::size_t shift = a.size() - 1 - db;
    quot[shift] = f;
    for (std::size_t k = 0; k <= db; ++k) a[shift + k] -= f * b[k];
    a.pop_back();
    trim(a);
  }
  trim(quot);
  return quot;
}

Dense monic(Dense p) {
  Rational lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

Dense poly_gcd(Dense a, Dense b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    reduce_mod(a, b);
    std::swap(a, b);
    if (!b.empty()) b = monic(std::move(b));
  }
  return a.empty() ? a : monic(std::move(a));
}

}  // namespace

// ---------------------------------------------------------------------------
// LaurentPolynomial

LaurentPolynomial::LaurentPolynomial(long c) {
  if (c != 0) terms_.emplace_back(0, Rational(c));
}

LaurentPolynomial::LaurentPolynomial(const Rational& c) {
  if (c != 0) terms_.emplace_back(0, c);
}

LaurentPolynomial LaurentPolynomial::monomial(int exponent, const Rational& coeff) {
  LaurentPolynomial p;
  if (coeff != 0) p.terms_.emplace_back(exponent, coeff);
  return p;
}

LaurentPolynomial LaurentPolynomial::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  LaurentPolynomial p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
      if (p.terms_.back().second == 0) p.terms_.pop_back();
    } else if (t.second != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

bool LaurentPolynomial::is_one() const {
  return terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second == 1;
}

Rational LaurentPolynomial::coefficient(int exponent) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), exponent,
                             [](const Term& t, int e) { return t.first < e; });
  if (it != terms_.end() && it->first == exponent) return it->second;
  return 0;
}

LaurentPolynomial LaurentPolynomial::shifted(int k) const {
  LaurentPolynomial p = *this;
  for (auto& t : p.terms_) t.first += k;
  return p;
}

LaurentPolynomial LaurentPolynomial::bar() const {
  LaurentPolynomial p;
  p.terms_.reserve(terms_.size());
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) p.terms_.emplace_back(-it->first, it->second);
  return p;
}

LaurentPolynomial LaurentPolynomial::scaled(const Rational& c) const {
  if (c == 0) return {};
  LaurentPolynomial p = *this;
  for (auto& t : p.terms_) t.second *= c;
  return p;
}

bool LaurentPolynomial::has_integer_coefficients() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.second.get_den() == 1; });
}

LaurentPolynomial LaurentPolynomial::operator-() const {
  LaurentPolynomial p = *this;
  for (auto& t : p.terms_) t.second = -t.second;
  return p;
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      Rational s = a->second + b->second;
      if (s != 0) merged.emplace_back(a->first, std::move(s));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

LaurentPolynomial& LaurentPolynomial::operator-=(const LaurentPolynomial& o) { return *this += -o; }

LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (b.is_monomial()) {
    LaurentPolynomial p = a;
    for (auto& t : p.terms_) {
      t.first += b.terms_[0].first;
      t.second *= b.terms_[0].second;
    }
    return p;
  }
  if (a.is_monomial()) return b * a;
  const int lo = a.low_degree() + b.low_degree();
  const int hi = a.high_degree() + b.high_degree();
  std::vector<Rational> acc(static_cast<std::size_t>(hi - lo + 1), Rational(0));
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) acc[static_cast<std::size_t>(ea + eb - lo)] += ca * cb;
  return from_dense(acc, lo);
}

LaurentPolynomial& LaurentPolynomial::operator*=(const LaurentPolynomial& o) { return *this = *this * o; }

std::string LaurentPolynomial::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!out.empty()) out += " + ";
    out += it->second.get_str();
    out += "*q^";
    out += std::to_string(it->first);
  }
  return out;
}

std::uint64_t LaurentPolynomial::hash() const {
  // FNV-1a over the canonical text; only used for cache keys and checksums.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : to_string()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// RationalFunction

RationalFunction::RationalFunction(const LaurentPolynomial& num, const LaurentPolynomial& den)
    : num_(num), den_(den) {
  if (den_.is_zero()) throw DivisionByZero();
  canonicalize();
}

void RationalFunction::canonicalize() {
  if (num_.is_zero()) {
    den_ = LaurentPolynomial(1);
    return;
  }
  // Move every power of q into the numerator.
  const int dlow = den_.low_degree();
  const int nlow = num_.low_degree();
  LaurentPolynomial n = num_.shifted(-nlow);
  LaurentPolynomial d = den_.shifted(-dlow);
  const int qpow = nlow - dlow;
  if (!d.is_monomial()) {
    Dense g = poly_gcd(to_dense(n), to_dense(d));
    if (g.size() > 1) {
      n = from_dense(exact_quotient(to_dense(n), g));
      d = from_dense(exact_quotient(to_dense(d), g));
    }
  }
  Rational c = d.low_coefficient();
  if (c != 1) {
    Rational inv = 1 / c;
    n = n.scaled(inv);
    d = d.scaled(inv);
  }
  num_ = n.shifted(qpow);
  den_ = std::move(d);
}

RationalFunction RationalFunction::bar() const {
  return RationalFunction(num_.bar(), den_.bar());
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw DivisionByZero();
  return RationalFunction(den_, num_);
}

RationalFunction RationalFunction::operator-() const {
  return RationalFunction(-num_, den_, Canonical{});
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_.is_one() && o.den_.is_one()) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_) {
    num_ += o.num_;
    canonicalize();
    return *this;
  }
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  canonicalize();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) { return *this += -o; }

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  if (is_zero() || o.is_zero()) return *this = RationalFunction();
  num_ = num_ * o.num_;
  if (den_.is_one() && o.den_.is_one()) return *this;
  den_ = den_ * o.den_;
  canonicalize();
  return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
  if (o.is_zero()) throw DivisionByZero();
  if (is_zero()) return *this;
  if (o.den_.is_one() && o.num_.is_monomial() && den_.is_one()) {
    const auto& [e, c] = o.num_.terms().front();
    num_ = num_.shifted(-e).scaled(1 / c);
    return *this;
  }
  num_ = num_ * o.den_;
  den_ = den_ * o.num_;
  canonicalize();
  return *this;
}

std::string RationalFunction::to_string() const {
  if (den_.is_one()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

std::uint64_t RationalFunction::hash() const {
  return num_.hash() * 1099511628211ull ^ den_.hash();
}

std::optional<int> infinity_valuation(const RationalFunction& f) {
  if (f.is_zero()) return std::nullopt;
  return f.numerator().high_degree() - f.denominator().high_degree();
}

std::optional<Rational> value_at_infinity(const RationalFunction& f) {
  auto v = infinity_valuation(f);
  if (!v || *v < 0) return Rational(0);
  if (*v > 0) return std::nullopt;
  return Rational(f.numerator().high_coefficient() / f.denominator().high_coefficient());
}

// ---------------------------------------------------------------------------
// q-integers

LaurentPolynomial q_integer(long n, int d) {
  if (d < 1) throw std::domain_error("q_integer: symmetrizer must be positive");
  if (n < 0) return -q_integer(-n, d);
  std::vector<LaurentPolynomial::Term> terms;
  for (long k = 0; k < n; ++k) terms.emplace_back(static_cast<int>(d * (n - 1 - 2 * k)), Rational(1));
  return LaurentPolynomial::from_terms(std::move(terms));
}

LaurentPolynomial q_factorial(long n, int d) {
  if (n < 0) throw std::domain_error("q_factorial: negative argument");
  LaurentPolynomial p(1);
  for (long k = 1; k <= n; ++k) p *= q_integer(k, d);
  return p;
}

LaurentPolynomial q_binomial(long m, long n, int d) {
  if (n < 0) throw std::domain_error("q_binomial: negative lower index");
  RationalFunction r(1);
  for (long k = 1; k <= n; ++k) r *= RationalFunction(q_integer(m - k + 1, d), q_integer(k, d));
  if (!r.is_laurent()) throw std::logic_error("q_binomial: result is not a Laurent polynomial");
  return r.numerator();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  RationalFunction rational_function() {
    skip();
    RationalFunction out;
    if (peek() == '(') {
      ++pos_;
      LaurentPolynomial n = laurent();
      expect(')');
      skip();
      if (peek() == '/') {
        ++pos_;
        skip();
        expect('(');
        LaurentPolynomial d = laurent();
        expect(')');
        if (d.is_zero()) throw ParseError("zero denominator", pos_);
        out = RationalFunction(n, d);
      } else {
        out = RationalFunction(n);
      }
    } else {
      out = RationalFunction(laurent());
    }
    finish();
    return out;
  }

  LaurentPolynomial laurent_only() {
    LaurentPolynomial p = laurent();
    finish();
    return p;
  }

 private:
  LaurentPolynomial laurent() {
    std::vector<LaurentPolynomial::Term> terms;
    skip();
    bool first = true;
    while (true) {
      skip();
      int sign = 1;
      if (!first) {
        if (peek() == '+') {
          ++pos_;
        } else if (peek() == '-') {
          ++pos_;
          sign = -1;
        } else {
          break;
        }
        skip();
      }
      while (peek() == '-' || peek() == '+') {
        if (peek() == '-') sign = -sign;
        ++pos_;
        skip();
      }
      terms.push_back(term(sign));
      first = false;
    }
    return LaurentPolynomial::from_terms(std::move(terms));
  }

  LaurentPolynomial::Term term(int sign) {
    Rational coeff = 1;
    bool have_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      mpz_class p(integer(false));
      mpz_class r = 1;
      if (peek() == '/' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
        ++pos_;
        r = mpz_class(integer(false));
        if (r == 0) throw ParseError("zero in rational coefficient denominator", pos_);
      }
      coeff = Rational(p, r);
      coeff.canonicalize();
      have_coeff = true;
      skip();
      if (peek() == '*') {
        ++pos_;
        skip();
      } else {
        return {0, sign * coeff};
      }
    }
    if (peek() != 'q') throw ParseError(have_coeff ? "expected 'q' after '*'" : "expected term", pos_);
    ++pos_;
    skip();
    int e = 1;
    if (peek() == '^') {
      ++pos_;
      skip();
      e = std::stoi(integer(true));
    }
    return {e, sign * coeff};
  }

  std::string integer(bool allow_sign) {
    std::size_t start = pos_;
    if (allow_sign && (peek() == '-' || peek() == '+')) ++pos_;
    std::size_t digits = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (pos_ == digits) throw ParseError("expected integer", pos_);
    std::string out(s_.substr(start, pos_ - start));
    if (!out.empty() && out[0] == '+') out.erase(0, 1);
    return out;
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip();
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }
  void finish() {
    skip();
    if (pos_ != s_.size()) throw ParseError("trailing input", pos_);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

LaurentPolynomial parse_laurent(std::string_view text) { return Parser(text).laurent_only(); }

RationalFunction parse_rational_function(std::string_view text) { return Parser(text).rational_function(); }

}  // namespace qsp::qfield
