#pragma once

// Wronskians and flattening points, Sturm real-root counts, and genus-0
// rational maps f = p/q: critical points, realifiability by a Moebius
// transformation, and the bidegree of the image of t -> (f(t), conj f(t)).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3lat/errors.hpp"
#include "k3lat/exact.hpp"
#include "k3lat/polynomial.hpp"

namespace k3lat {

// ---------------------------------------------------------------------------
// Wronskian
// ---------------------------------------------------------------------------

/// det of the matrix whose row i holds the i-th derivatives of the inputs.
inline Polynomial wronskian(const std::vector<Polynomial>& polys) {
  const std::size_t n = polys.size();
  if (n == 0) throw DomainError("wronskian of an empty list");
  std::vector<std::vector<Polynomial>> m(n, std::vector<Polynomial>(n));
  for (std::size_t j = 0; j < n; ++j) {
    Polynomial d = polys[j];
    for (std::size_t i = 0; i < n; ++i) {
      m[i][j] = d;
      d = d.derivative();
    }
  }
  // Fraction-free Bareiss elimination over Q(i)[t]; every division is exact.
  Polynomial prev(1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < n && m[p][k].is_zero()) ++p;
      if (p == n) return {};
      std::swap(m[p], m[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = exact_quotient(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
      m[i][k] = Polynomial();
    }
    prev = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

// ---------------------------------------------------------------------------
// Sturm sequences
// ---------------------------------------------------------------------------

/// Open interval with optional (= infinite) rational endpoints.
struct Interval {
  std::optional<Rational> lo;
  std::optional<Rational> hi;
  static Interval real_line() { return {}; }
};

struct SturmResult {
  std::size_t count = 0;
  Polynomial squarefree;
};

namespace detail {

inline std::vector<std::vector<Rational>> sturm_chain(const Polynomial& sqf) {
  std::vector<Polynomial> chain{sqf, sqf.derivative()};
  while (!chain.back().is_zero()) {
    Polynomial r = divmod(chain[chain.size() - 2], chain.back()).remainder;
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  if (chain.back().is_zero()) chain.pop_back();
  std::vector<std::vector<Rational>> out;
  for (const auto& p : chain) out.push_back(p.real_coefficients());
  return out;
}

inline int sign_at(const std::vector<Rational>& c, const std::optional<Rational>& x, bool at_minus_infinity) {
  if (c.empty()) return 0;
  if (!x) {
    int s = sign(c.back());
    if (at_minus_infinity && (c.size() - 1) % 2 == 1) s = -s;
    return s;
  }
  Rational acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * *x + *it;
  return sign(acc);
}

inline std::size_t variations(const std::vector<std::vector<Rational>>& chain, const std::optional<Rational>& x,
                              bool at_minus_infinity) {
  std::size_t v = 0;
  int last = 0;
  for (const auto& p : chain) {
    const int s = sign_at(p, x, at_minus_infinity);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

}  // namespace detail

/// Number of distinct real roots of a real polynomial in an open interval.
inline SturmResult sturm_count(const Polynomial& p, const Interval& interval = {}) {
  if (p.is_zero()) throw DomainError("Sturm count of the zero polynomial");
  if (!p.is_real()) throw DomainError("Sturm count needs real coefficients");
  if (interval.lo && interval.hi && !(*interval.lo < *interval.hi)) throw DomainError("empty interval");
  Polynomial sqf = squarefree_part(p);
  if (sqf.degree() == 0) return {0, sqf};
  auto chain = detail::sturm_chain(sqf);
  const std::size_t va = detail::variations(chain, interval.lo, true);
  const std::size_t vb = detail::variations(chain, interval.hi, false);
  // va - vb counts roots in (lo, hi]; drop hi itself if it is a root.
  std::size_t count = va - vb;
  if (interval.hi && detail::sign_at(chain[0], interval.hi, false) == 0) --count;
  return {count, sqf};
}

// ---------------------------------------------------------------------------
// Rational maps
// ---------------------------------------------------------------------------

/// f = p/q with coprime p, q; the constructor cancels common factors.
class RationalMap {
 public:
  RationalMap(Polynomial p, Polynomial q) {
    if (q.is_zero()) throw DomainError("denominator is zero");
    if (p.is_zero()) {
      p_ = Polynomial();
      q_ = Polynomial(1);
      return;
    }
    Polynomial g = gcd(p, q);
    p_ = exact_quotient(p, g);
    q_ = exact_quotient(q, g);
    const GaussianRational s = GaussianRational(1) / q_.leading();
    p_ = s * p_;
    q_ = s * q_;
  }
  explicit RationalMap(Polynomial p) : RationalMap(std::move(p), Polynomial(1)) {}

  static RationalMap parse(const std::string& text) {
    auto [p, q] = parse_fraction(text);
    return {std::move(p), std::move(q)};
  }

  [[nodiscard]] const Polynomial& numerator() const { return p_; }
  [[nodiscard]] const Polynomial& denominator() const { return q_; }
  [[nodiscard]] long degree() const { return std::max(std::max(p_.degree(), q_.degree()), 0L); }
  [[nodiscard]] bool is_constant() const { return degree() == 0; }
  [[nodiscard]] bool is_real() const { return p_.is_real() && q_.is_real(); }
  /// Coefficient-wise conjugate map.
  [[nodiscard]] RationalMap conj() const { return {p_.conj(), q_.conj()}; }

  friend bool operator==(const RationalMap& a, const RationalMap& b) { return a.p_ == b.p_ && a.q_ == b.q_; }

 private:
  Polynomial p_;
  Polynomial q_;
};

inline std::string to_string(const RationalMap& f) {
  if (f.denominator() == Polynomial(1)) return to_string(f.numerator());
  return "(" + to_string(f.numerator()) + ")/(" + to_string(f.denominator()) + ")";
}

/// w -> (a w + b)/(c w + d).
struct MobiusTransform {
  GaussianRational a, b, c, d;

  static MobiusTransform identity() { return {1, 0, 0, 1}; }
  [[nodiscard]] GaussianRational det() const { return a * d - b * c; }
  [[nodiscard]] MobiusTransform conj() const { return {a.conj(), b.conj(), c.conj(), d.conj()}; }
  /// (this o other)
  [[nodiscard]] MobiusTransform compose(const MobiusTransform& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  [[nodiscard]] bool is_scalar() const { return b.is_zero() && c.is_zero() && a == d && !a.is_zero(); }
  [[nodiscard]] RationalMap apply(const RationalMap& f) const {
    const auto& p = f.numerator();
    const auto& q = f.denominator();
    return {a * p + b * q, c * p + d * q};
  }
  /// Scaled so the first nonzero entry is 1.
  [[nodiscard]] MobiusTransform normalized() const {
    GaussianRational s = !a.is_zero() ? a : (!b.is_zero() ? b : (!c.is_zero() ? c : d));
    GaussianRational inv = GaussianRational(1) / s;
    return {a * inv, b * inv, c * inv, d * inv};
  }
  friend bool operator==(const MobiusTransform& x, const MobiusTransform& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
};

inline std::string to_string(const GaussianRational& z) {
  return to_string(Polynomial(z));
}

inline std::string to_string(const MobiusTransform& m) {
  return "[[" + to_string(m.a) + ", " + to_string(m.b) + "], [" + to_string(m.c) + ", " + to_string(m.d) + "]]";
}

/// p'q - pq', content removed (see normalize_content).
inline Polynomial critical_polynomial(const RationalMap& f) {
  if (f.is_constant()) throw DomainError("constant map has no critical points");
  const auto& p = f.numerator();
  const auto& q = f.denominator();
  return normalize_content(p.derivative() * q - p * q.derivative());
}

/// Multiplicity of t = infinity as a critical point: the order of vanishing at
/// s = 0 of the critical polynomial of s -> f(1/s).
inline std::size_t critical_multiplicity_at_infinity(const RationalMap& f) {
  if (f.is_constant()) throw DomainError("constant map has no critical points");
  const std::size_t d = static_cast<std::size_t>(f.degree());
  auto reversed = [d](const Polynomial& p) {
    std::vector<GaussianRational> c(d + 1);
    for (std::size_t k = 0; k <= d; ++k) c[d - k] = p.coefficient(k);
    return Polynomial(std::move(c));
  };
  const Polynomial p = reversed(f.numerator());
  const Polynomial q = reversed(f.denominator());
  const Polynomial c = p.derivative() * q - p * q.derivative();
  std::size_t m = 0;
  while (c.coefficient(m).is_zero()) ++m;
  return m;
}

/// Critical points on P^1 counted with multiplicity: deg C + multiplicity at infinity.
inline std::size_t critical_points_with_multiplicity(const RationalMap& f) {
  const long finite = critical_polynomial(f).degree();
  return static_cast<std::size_t>(std::max(finite, 0L)) + critical_multiplicity_at_infinity(f);
}

struct CriticalReality {
  bool all_real = false;
  /// Distinct finite critical points, and how many of them are real.
  std::size_t distinct = 0;
  std::size_t real = 0;
  /// Set when the critical polynomial is not real up to a unit; the real
  /// roots are then counted on gcd(c, conj c).
  bool used_real_representative = false;
};

inline CriticalReality critical_point_reality(const RationalMap& f) {
  Polynomial c = critical_polynomial(f);
  CriticalReality out;
  if (c.degree() <= 0) {
    out.all_real = true;
    return out;
  }
  Polynomial sqf = squarefree_part(c);
  out.distinct = static_cast<std::size_t>(sqf.degree());
  if (sqf.is_real()) {
    out.real = sturm_count(sqf).count;
  } else {
    out.used_real_representative = true;
    Polynomial g = gcd(sqf, sqf.conj());
    if (!g.is_real()) throw Error("gcd with the conjugate is not real");
    out.real = g.degree() <= 0 ? 0 : sturm_count(g).count;
  }
  out.all_real = out.real == out.distinct;
  return out;
}

inline bool all_critical_points_real(const RationalMap& f) { return critical_point_reality(f).all_real; }

/// A Moebius phi with conj(f) = phi o f, if one exists. The witness is checked
/// to satisfy conj(phi) o phi = id.
inline std::optional<MobiusTransform> mobius_realifiable(const RationalMap& f) {
  if (f.is_constant()) throw DomainError("constant map");
  const Polynomial& p = f.numerator();
  const Polynomial& q = f.denominator();
  const Polynomial pb = p.conj();
  const Polynomial qb = q.conj();
  // pb (c p + d q) - qb (a p + b q) = 0, unknowns (a, b, c, d).
  const std::vector<Polynomial> cols{-(qb * p), -(qb * q), pb * p, pb * q};
  std::size_t rows = 0;
  for (const auto& c : cols) rows = std::max(rows, c.coefficients().size());
  Matrix<GaussianRational> m(std::max<std::size_t>(rows, 1), 4);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t r = 0; r < rows; ++r) m(r, j) = cols[j].coefficient(r);
  auto sol = solve_linear<GaussianRational>(m, Matrix<GaussianRational>(m.rows(), 1));
  for (std::size_t k = 0; k < sol.nullspace.rows(); ++k) {
    MobiusTransform phi{sol.nullspace(k, 0), sol.nullspace(k, 1), sol.nullspace(k, 2), sol.nullspace(k, 3)};
    if (phi.det().is_zero()) continue;
    phi = phi.normalized();
    if (!(phi.apply(f) == f.conj())) throw Error("Moebius witness does not reproduce the conjugate map");
    if (!phi.conj().compose(phi).is_scalar()) throw Error("Moebius witness is not an involution");
    return phi;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Resultants
// ---------------------------------------------------------------------------

/// Sylvester resultant with formal degrees m >= deg a, n >= deg b.
inline GaussianRational resultant(const Polynomial& a, const Polynomial& b, std::size_t m, std::size_t n) {
  if (a.degree() > static_cast<long>(m) || b.degree() > static_cast<long>(n))
    throw DimensionError("formal degree below actual degree");
  const std::size_t size = m + n;
  if (size == 0) return GaussianRational(1);
  Matrix<GaussianRational> s(size, size);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k <= m; ++k) s(r, r + k) = a.coefficient(m - k);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t k = 0; k <= n; ++k) s(n + r, r + k) = b.coefficient(n - k);
  return field_determinant(s);
}

inline GaussianRational resultant(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return GaussianRational(0);
  return resultant(a, b, static_cast<std::size_t>(a.degree()), static_cast<std::size_t>(b.degree()));
}

/// Lagrange interpolation through (x_k, y_k).
inline Polynomial interpolate(const std::vector<GaussianRational>& xs, const std::vector<GaussianRational>& ys) {
  if (xs.size() != ys.size()) throw DimensionError("interpolation: size mismatch");
  Polynomial out;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (ys[k].is_zero()) continue;
    Polynomial basis(1);
    GaussianRational den(1);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j == k) continue;
      basis *= Polynomial(std::vector<GaussianRational>{-xs[j], GaussianRational(1)});
      den *= xs[k] - xs[j];
    }
    out += (ys[k] / den) * basis;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Image of t -> (f(t), conj f(t))
// ---------------------------------------------------------------------------

struct DiagonalImage {
  long degree = 0;
  /// Partial degrees of the reduced defining polynomial in x and y.
  long delta_x = 0;
  long delta_y = 0;
  /// R(x, y) = Res_t(p - x q, conj p - y conj q); entry [i][j] is the x^i y^j coefficient.
  std::vector<std::vector<GaussianRational>> resultant;

  [[nodiscard]] bool symmetric() const { return delta_x == delta_y; }
  [[nodiscard]] long delta() const { return delta_x; }
  [[nodiscard]] bool divides_degree() const { return delta_x > 0 && degree % delta_x == 0; }
  [[nodiscard]] long covering_degree() const { return divides_degree() ? degree / delta_x : 0; }
};

inline DiagonalImage diagonal_image_bidegree(const RationalMap& f) {
  if (f.is_constant()) throw DomainError("constant map");
  const std::size_t d = static_cast<std::size_t>(f.degree());
  const Polynomial& p = f.numerator();
  const Polynomial& q = f.denominator();
  const Polynomial pb = p.conj();
  const Polynomial qb = q.conj();

  std::vector<GaussianRational> nodes;
  for (std::size_t k = 0; k <= d; ++k) nodes.emplace_back(Rational(static_cast<long>(k)));
  // values[i][j] = R(nodes[i], nodes[j])
  std::vector<std::vector<GaussianRational>> values(d + 1, std::vector<GaussianRational>(d + 1));
  for (std::size_t i = 0; i <= d; ++i) {
    const Polynomial a = p - nodes[i] * q;
    for (std::size_t j = 0; j <= d; ++j) values[i][j] = resultant(a, pb - nodes[j] * qb, d, d);
  }
  // Interpolate in y for each x node, then in x for each y power.
  std::vector<std::vector<GaussianRational>> in_y(d + 1);
  for (std::size_t i = 0; i <= d; ++i) {
    Polynomial py = interpolate(nodes, values[i]);
    for (std::size_t j = 0; j <= d; ++j) in_y[i].push_back(py.coefficient(j));
  }
  DiagonalImage out;
  out.degree = static_cast<long>(d);
  out.resultant.assign(d + 1, std::vector<GaussianRational>(d + 1));
  for (std::size_t j = 0; j <= d; ++j) {
    std::vector<GaussianRational> col;
    for (std::size_t i = 0; i <= d; ++i) col.push_back(in_y[i][j]);
    Polynomial px = interpolate(nodes, col);
    for (std::size_t i = 0; i <= d; ++i) out.resultant[i][j] = px.coefficient(i);
  }

  // R = c * H^m with H reduced. For all but finitely many specializations the
  // square-free part of H(x0, y) has degree deg_y H; the bad ones are bounded
  // by the degree of the discriminant, so 2 d^2 + 1 samples suffice.
  const std::size_t samples = 2 * d * d + 1;
  auto reduced_degree = [&](bool along_y) {
    long best = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      const GaussianRational x0(Rational(static_cast<long>(s)));
      std::vector<GaussianRational> c(d + 1);
      for (std::size_t k = 0; k <= d; ++k) {
        GaussianRational acc(0);
        for (std::size_t l = d + 1; l-- > 0;) acc = acc * x0 + (along_y ? out.resultant[l][k] : out.resultant[k][l]);
        c[k] = acc;
      }
      Polynomial spec(std::move(c));
      if (spec.degree() <= 0) continue;
      best = std::max(best, squarefree_part(spec).degree());
      if (best == static_cast<long>(d)) break;
    }
    return best;
  };
  out.delta_y = reduced_degree(true);
  out.delta_x = reduced_degree(false);
  return out;
}

// ---------------------------------------------------------------------------
// Flattening points and critical values
// ---------------------------------------------------------------------------

inline bool flattening_points_all_real(const std::vector<Polynomial>& curve) {
  if (curve.size() < 2) throw DomainError("a curve needs at least two coordinates");
  for (const auto& c : curve)
    if (!c.is_real()) throw DomainError("curve coordinates must be real");
  Polynomial w = wronskian(curve);
  if (w.is_zero()) throw DomainError("Wronskian vanishes identically (degenerate curve)");
  Polynomial sqf = squarefree_part(w);
  return sturm_count(sqf).count == static_cast<std::size_t>(sqf.degree());
}

/// Are the critical points of f distinct, with pairwise distinct values in P^1?
/// Decided exactly: the finite values are the roots of Res_t(C(t), p - w q).
inline bool critical_values_distinct(const RationalMap& f) {
  const std::size_t d = static_cast<std::size_t>(f.degree());
  Polynomial c = critical_polynomial(f);
  const long deg_c = c.degree();
  if (deg_c <= 0) return true;
  if (squarefree_part(c).degree() != deg_c) return false;
  const Polynomial& p = f.numerator();
  const Polynomial& q = f.denominator();
  const long at_infinity = static_cast<long>(2 * d - 2) - deg_c;
  if (at_infinity >= 2) return false;

  // Finite critical points mapping to infinity.
  Polynomial poles = gcd(c, q);
  const long to_infinity = std::max(poles.degree(), 0L);
  if (to_infinity >= 2) return false;

  std::vector<GaussianRational> nodes;
  std::vector<GaussianRational> vals;
  for (long k = 0; k <= deg_c; ++k) {
    GaussianRational w{Rational(k)};
    nodes.push_back(w);
    vals.push_back(resultant(c, p - w * q, static_cast<std::size_t>(deg_c), d));
  }
  Polynomial r = interpolate(nodes, vals);
  if (r.is_zero()) return false;
  if (r.degree() > 0 && squarefree_part(r).degree() != r.degree()) return false;

  if (at_infinity == 1) {
    // Value of f at t = infinity.
    if (p.degree() > q.degree()) return to_infinity == 0;
    const GaussianRational v = p.degree() == q.degree() ? p.leading() / q.leading() : GaussianRational(0);
    if (r.degree() <= 0) return true;
    return !r(v).is_zero();
  }
  return true;
}

}  // namespace k3lat
