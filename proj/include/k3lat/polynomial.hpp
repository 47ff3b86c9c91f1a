#pragma once

// Univariate polynomials over Q(i) with an exact text format:
//   expr    := ['+'|'-'] term (('+'|'-') term)*
//   term    := factor (['*'] factor)*
//   factor  := primary ['^' digits]
//   primary := number | 'i' | 't' | '(' expr ')'
//   number  := digits ['/' digits]
// Examples: "3/2*t^2 - t + 1", "(1+2i)*t", "2t^3 - i".

#include <cctype>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "k3lat/errors.hpp"
#include "k3lat/exact.hpp"

namespace k3lat {

class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(GaussianRational c) : coeffs_{std::move(c)} { trim(); }  // NOLINT(google-explicit-constructor)
  Polynomial(int c) : Polynomial(GaussianRational(c)) {}              // NOLINT(google-explicit-constructor)
  explicit Polynomial(std::vector<GaussianRational> ascending) : coeffs_(std::move(ascending)) { trim(); }

  static Polynomial from_rationals(const std::vector<Rational>& ascending) {
    std::vector<GaussianRational> c;
    c.reserve(ascending.size());
    for (const auto& a : ascending) c.emplace_back(a);
    return Polynomial(std::move(c));
  }
  static Polynomial monomial(GaussianRational c, std::size_t k) {
    std::vector<GaussianRational> v(k + 1);
    v[k] = std::move(c);
    return Polynomial(std::move(v));
  }
  static Polynomial t() { return monomial(GaussianRational(1), 1); }

  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  [[nodiscard]] long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  [[nodiscard]] const std::vector<GaussianRational>& coefficients() const { return coeffs_; }
  [[nodiscard]] GaussianRational coefficient(std::size_t k) const {
    return k < coeffs_.size() ? coeffs_[k] : GaussianRational(0);
  }
  [[nodiscard]] GaussianRational leading() const { return is_zero() ? GaussianRational(0) : coeffs_.back(); }

  [[nodiscard]] bool is_real() const {
    for (const auto& c : coeffs_)
      if (!c.is_real()) return false;
    return true;
  }
  /// Real coefficients; throws DomainError if some coefficient is not real.
  [[nodiscard]] std::vector<Rational> real_coefficients() const {
    std::vector<Rational> out;
    for (const auto& c : coeffs_) {
      if (!c.is_real()) throw DomainError("polynomial has non-real coefficients");
      out.push_back(c.re);
    }
    return out;
  }

  [[nodiscard]] Polynomial conj() const {
    std::vector<GaussianRational> c;
    for (const auto& a : coeffs_) c.push_back(a.conj());
    return Polynomial(std::move(c));
  }
  [[nodiscard]] Polynomial derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<GaussianRational> c(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) c[k - 1] = GaussianRational(Rational(static_cast<long>(k))) * coeffs_[k];
    return Polynomial(std::move(c));
  }
  [[nodiscard]] Polynomial monic() const {
    if (is_zero()) return {};
    return (GaussianRational(1) / leading()) * *this;
  }
  [[nodiscard]] GaussianRational operator()(const GaussianRational& x) const {
    GaussianRational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<GaussianRational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coefficient(k) + b.coefficient(k);
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& a) { return GaussianRational(-1) * a; }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<GaussianRational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const GaussianRational& s, const Polynomial& a) {
    if (s.is_zero()) return {};
    std::vector<GaussianRational> c = a.coeffs_;
    for (auto& x : c) x = s * x;
    return Polynomial(std::move(c));
  }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }
  std::vector<GaussianRational> coeffs_;
};

struct PolynomialDivision {
  Polynomial quotient;
  Polynomial remainder;
};

inline PolynomialDivision divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw DomainError("division by the zero polynomial");
  std::vector<GaussianRational> r = a.coefficients();
  const std::size_t db = static_cast<std::size_t>(b.degree());
  if (r.size() <= db) return {Polynomial(), a};
  std::vector<GaussianRational> q(r.size() - db);
  const GaussianRational inv = GaussianRational(1) / b.leading();
  for (std::size_t k = r.size(); k-- > db;) {
    if (r[k].is_zero()) continue;
    GaussianRational f = r[k] * inv;
    q[k - db] = f;
    for (std::size_t j = 0; j <= db; ++j) r[k - db + j] -= f * b.coefficient(j);
  }
  r.resize(db);
  return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

/// Exact quotient; throws Error if the division leaves a remainder.
inline Polynomial exact_quotient(const Polynomial& a, const Polynomial& b) {
  auto d = divmod(a, b);
  if (!d.remainder.is_zero()) throw Error("polynomial division is not exact");
  return d.quotient;
}

/// Monic gcd (zero if both are zero).
inline Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = divmod(a, b).remainder;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// p / gcd(p, p'), made monic.
inline Polynomial squarefree_part(const Polynomial& p) {
  if (p.is_zero()) throw DomainError("square-free part of the zero polynomial");
  if (p.degree() == 0) return Polynomial(1);
  return exact_quotient(p, gcd(p, p.derivative())).monic();
}

/// Real polynomials: primitive integer coefficients with positive leading
/// coefficient. Otherwise: monic.
inline Polynomial normalize_content(const Polynomial& p) {
  if (p.is_zero()) return p;
  if (!p.is_real()) return p.monic();
  Integer den = 1;
  Integer num = 0;
  for (const auto& c : p.coefficients()) {
    den = boost::multiprecision::lcm(den, denominator(c.re));
    num = boost::multiprecision::gcd(num, numerator(c.re));
  }
  Rational scale(den, num);
  if (p.leading().re < 0) scale = -scale;
  return GaussianRational(scale) * p;
}

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

namespace detail {

inline std::string monomial_text(std::size_t k) {
  if (k == 0) return "";
  if (k == 1) return "t";
  return "t^" + std::to_string(k);
}

}  // namespace detail

/// Canonical text, descending degree; parse(to_string(p)) == p.
inline std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  const auto& c = p.coefficients();
  for (std::size_t k = c.size(); k-- > 0;) {
    const GaussianRational& a = c[k];
    if (a.is_zero()) continue;
    const std::string mono = detail::monomial_text(k);
    bool negative = false;
    std::string body;
    if (a.is_real() || a.re == 0) {
      const bool imag = !a.is_real();
      Rational mag = imag ? a.im : a.re;
      negative = mag < 0;
      if (negative) mag = -mag;
      std::string num = (mag == 1) ? "" : mag.str();
      if (imag) {
        body = num + "i";
        if (!mono.empty()) body += "*" + mono;
      } else if (mono.empty()) {
        body = mag.str();
      } else {
        body = num.empty() ? mono : num + "*" + mono;
      }
    } else {
      std::string im = (abs(a.im) == 1) ? "i" : abs(a.im).str() + "i";
      body = "(" + a.re.str() + (a.im < 0 ? "-" : "+") + im + ")";
      if (!mono.empty()) body += "*" + mono;
    }
    if (first) {
      out += negative ? "-" + body : body;
      first = false;
    } else {
      out += negative ? " - " + body : " + " + body;
    }
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << to_string(p); }

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

struct Token {
  enum Kind { number, imag, var, plus, minus, star, caret, lparen, rparen, slash, end } kind;
  Rational value;
  std::size_t pos = 0;
};

/// A '/' directly between digit runs belongs to a number, except after '^'.
inline std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      std::string text = s.substr(start, i - start);
      const bool exponent = !out.empty() && out.back().kind == Token::caret;
      if (!exponent && i + 1 < s.size() && s[i] == '/' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
        std::size_t j = i + 1;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        text = s.substr(start, j - start);
        i = j;
      }
      Rational v;
      try {
        v = parse_rational(text);
      } catch (const std::exception&) {
        throw ParseError("bad number '" + text + "' at position " + std::to_string(start));
      }
      out.push_back({Token::number, v, start});
      continue;
    }
    Token::Kind kind;
    switch (ch) {
      case 'i': kind = Token::imag; break;
      case 't': kind = Token::var; break;
      case '+': kind = Token::plus; break;
      case '-': kind = Token::minus; break;
      case '*': kind = Token::star; break;
      case '^': kind = Token::caret; break;
      case '(': kind = Token::lparen; break;
      case ')': kind = Token::rparen; break;
      case '/': kind = Token::slash; break;
      default: throw ParseError(std::string("unexpected character '") + ch + "' at position " + std::to_string(i));
    }
    out.push_back({kind, Rational(0), start});
    ++i;
  }
  out.push_back({Token::end, Rational(0), s.size()});
  return out;
}

class PolynomialParser {
 public:
  PolynomialParser(const std::vector<Token>& tokens, std::size_t begin, std::size_t end)
      : tokens_(tokens), pos_(begin), end_(end) {}

  Polynomial parse_all() {
    if (pos_ == end_) throw ParseError("empty polynomial");
    Polynomial p = expr();
    if (pos_ != end_) throw ParseError("unexpected token at position " + std::to_string(tokens_[pos_].pos));
    return p;
  }

 private:
  [[nodiscard]] Token::Kind peek() const { return pos_ < end_ ? tokens_[pos_].kind : Token::end; }

  Polynomial expr() {
    bool negate = false;
    if (peek() == Token::plus || peek() == Token::minus) {
      negate = peek() == Token::minus;
      ++pos_;
    }
    Polynomial acc = term();
    if (negate) acc = -acc;
    while (peek() == Token::plus || peek() == Token::minus) {
      const bool minus = peek() == Token::minus;
      ++pos_;
      Polynomial t = term();
      acc = minus ? acc - t : acc + t;
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = factor();
    for (;;) {
      if (peek() == Token::star) {
        ++pos_;
        acc *= factor();
      } else if (peek() == Token::number || peek() == Token::imag || peek() == Token::var || peek() == Token::lparen) {
        acc *= factor();
      } else {
        return acc;
      }
    }
  }

  Polynomial factor() {
    Polynomial base = primary();
    if (peek() == Token::caret) {
      ++pos_;
      if (peek() != Token::number || !is_integral(tokens_[pos_].value))
        throw ParseError("exponent must be a nonnegative integer");
      const Integer e = numerator(tokens_[pos_].value);
      if (e > 1000) throw ParseError("exponent too large");
      ++pos_;
      Polynomial r(1);
      for (Integer k = 0; k < e; ++k) r *= base;
      return r;
    }
    return base;
  }

  Polynomial primary() {
    switch (peek()) {
      case Token::number: return Polynomial(GaussianRational(tokens_[pos_++].value));
      case Token::imag: ++pos_; return Polynomial(GaussianRational::i());
      case Token::var: ++pos_; return Polynomial::t();
      case Token::lparen: {
        ++pos_;
        Polynomial inner = expr();
        if (peek() != Token::rparen) throw ParseError("missing ')'");
        ++pos_;
        return inner;
      }
      case Token::slash: throw ParseError("'/' is only allowed inside a rational number");
      default:
        throw ParseError("unexpected token at position " +
                         std::to_string(pos_ < end_ ? tokens_[pos_].pos : tokens_.back().pos));
    }
  }

  const std::vector<Token>& tokens_;
  std::size_t pos_;
  std::size_t end_;
};

}  // namespace detail

inline Polynomial parse_polynomial(const std::string& text) {
  auto tokens = detail::tokenize(text);
  return detail::PolynomialParser(tokens, 0, tokens.size() - 1).parse_all();
}

/// Splits "p/q" at a top-level '/' that is not part of a rational number.
/// Returns q = 1 when there is no such separator.
inline std::pair<Polynomial, Polynomial> parse_fraction(const std::string& text) {
  auto tokens = detail::tokenize(text);
  const std::size_t end = tokens.size() - 1;
  int depth = 0;
  std::optional<std::size_t> split;
  for (std::size_t k = 0; k < end; ++k) {
    if (tokens[k].kind == detail::Token::lparen) ++depth;
    if (tokens[k].kind == detail::Token::rparen) --depth;
    if (tokens[k].kind == detail::Token::slash && depth == 0) {
      if (split) throw ParseError("more than one '/' separator");
      split = k;
    }
  }
  if (!split) return {detail::PolynomialParser(tokens, 0, end).parse_all(), Polynomial(1)};
  return {detail::PolynomialParser(tokens, 0, *split).parse_all(),
          detail::PolynomialParser(tokens, *split + 1, end).parse_all()};
}

}  // namespace k3lat
