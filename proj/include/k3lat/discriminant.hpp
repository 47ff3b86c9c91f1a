#pragma once

// Finite quadratic forms (discriminant groups L^v/L with their Q/Z bilinear and
// Q/2Z quadratic forms), isotropic elements and subgroups, and a brute-force
// isomorphism test for small forms.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "k3lat/config.hpp"
#include "k3lat/errors.hpp"
#include "k3lat/exact.hpp"
#include "k3lat/lattice.hpp"

namespace k3lat {

/// Element of a finite abelian group sum Z/d_i, coefficient i in [0, d_i).
struct DiscriminantElement {
  std::vector<std::int64_t> coefficients;

  friend bool operator==(const DiscriminantElement&, const DiscriminantElement&) = default;
  friend auto operator<=>(const DiscriminantElement&, const DiscriminantElement&) = default;
};

/// Indices of the generators appearing with a nonzero coefficient.
inline std::vector<std::size_t> support(const DiscriminantElement& e) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < e.coefficients.size(); ++i)
    if (e.coefficients[i] != 0) out.push_back(i);
  return out;
}

inline std::string to_string(const DiscriminantElement& e) {
  std::string s = "(";
  for (std::size_t i = 0; i < e.coefficients.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(e.coefficients[i]);
  }
  return s + ")";
}

inline bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

class FiniteQuadraticForm {
 public:
  FiniteQuadraticForm() = default;

  /// `q` values are reduced into [0, 2), `b` values into [0, 1).
  FiniteQuadraticForm(std::vector<std::int64_t> orders, std::vector<Rational> q, RationalMatrix b)
      : orders_(std::move(orders)), q_(std::move(q)), b_(std::move(b)) {
    const std::size_t n = orders_.size();
    if (q_.size() != n || b_.rows() != n || b_.cols() != n)
      throw DimensionError("finite quadratic form: inconsistent generator counts");
    for (auto d : orders_)
      if (d < 2) throw DomainError("finite quadratic form: generator orders must be >= 2");
    for (auto& v : q_) v = mod_rational(v, Integer(2));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) b_(i, j) = mod_rational(b_(i, j), Integer(1));
    if (!b_.is_symmetric()) throw ShapeError("finite quadratic form: bilinear form not symmetric");
    for (std::size_t i = 0; i < n; ++i) {
      const Rational d(orders_[i]);
      if (!is_integral(b_(i, i) * d)) throw DomainError("finite quadratic form: b incompatible with orders");
      if (mod_rational(q_[i] * d * d, Integer(2)) != 0)
        throw DomainError("finite quadratic form: q incompatible with orders");
      if (mod_rational(q_[i] - b_(i, i), Integer(1)) != 0)
        throw DomainError("finite quadratic form: q(x) != b(x,x) mod 1");
      for (std::size_t j = 0; j < n; ++j)
        if (!is_integral(b_(i, j) * d)) throw DomainError("finite quadratic form: b incompatible with orders");
    }
  }

  /// The trivial group.
  static FiniteQuadraticForm trivial() { return FiniteQuadraticForm({}, {}, RationalMatrix(0, 0)); }

  static FiniteQuadraticForm orthogonal_sum(const std::vector<FiniteQuadraticForm>& parts) {
    std::vector<std::int64_t> orders;
    std::vector<Rational> q;
    std::vector<RationalMatrix> bs;
    for (const auto& p : parts) {
      orders.insert(orders.end(), p.orders_.begin(), p.orders_.end());
      q.insert(q.end(), p.q_.begin(), p.q_.end());
      bs.push_back(p.b_);
    }
    return {std::move(orders), std::move(q), block_diagonal(bs)};
  }

  [[nodiscard]] const std::vector<std::int64_t>& orders() const { return orders_; }
  [[nodiscard]] const std::vector<Rational>& q_values() const { return q_; }
  [[nodiscard]] const RationalMatrix& b_values() const { return b_; }
  [[nodiscard]] std::size_t generator_count() const { return orders_.size(); }

  /// Group order; throws ResourceError beyond 2^62.
  [[nodiscard]] std::uint64_t order() const {
    std::uint64_t n = 1;
    for (auto d : orders_) {
      if (n > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(d))
        throw ResourceError("discriminant group order overflows 64 bits");
      n *= static_cast<std::uint64_t>(d);
    }
    return n;
  }

  [[nodiscard]] DiscriminantElement zero() const { return {std::vector<std::int64_t>(orders_.size(), 0)}; }

  [[nodiscard]] DiscriminantElement generator(std::size_t i) const {
    auto e = zero();
    e.coefficients.at(i) = 1;
    return e;
  }

  [[nodiscard]] DiscriminantElement reduce(std::vector<std::int64_t> c) const {
    if (c.size() != orders_.size()) throw DimensionError("element has the wrong number of coefficients");
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = ((c[i] % orders_[i]) + orders_[i]) % orders_[i];
    return {std::move(c)};
  }

  [[nodiscard]] DiscriminantElement add(const DiscriminantElement& x, const DiscriminantElement& y) const {
    auto c = x.coefficients;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = (c[i] + y.coefficients[i]) % orders_[i];
    return {std::move(c)};
  }

  [[nodiscard]] DiscriminantElement scale(const DiscriminantElement& x, std::int64_t k) const {
    auto c = x.coefficients;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = ((c[i] * (k % orders_[i])) % orders_[i] + orders_[i]) % orders_[i];
    return {std::move(c)};
  }

  [[nodiscard]] DiscriminantElement negate(const DiscriminantElement& x) const { return scale(x, -1); }

  /// q(x) in [0, 2).
  [[nodiscard]] Rational q(const DiscriminantElement& x) const {
    check(x);
    Rational s(0);
    const std::size_t n = orders_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (x.coefficients[i] == 0) continue;
      const Integer xi(x.coefficients[i]);
      s += Rational(xi * xi) * q_[i];
      for (std::size_t j = i + 1; j < n; ++j)
        if (x.coefficients[j] != 0) s += Rational(2 * xi * Integer(x.coefficients[j])) * b_(i, j);
    }
    return mod_rational(s, Integer(2));
  }

  /// b(x, y) in [0, 1).
  [[nodiscard]] Rational b(const DiscriminantElement& x, const DiscriminantElement& y) const {
    check(x);
    check(y);
    Rational s(0);
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      if (x.coefficients[i] == 0) continue;
      for (std::size_t j = 0; j < orders_.size(); ++j)
        if (y.coefficients[j] != 0)
          s += Rational(Integer(x.coefficients[i]) * Integer(y.coefficients[j])) * b_(i, j);
    }
    return mod_rational(s, Integer(1));
  }

  [[nodiscard]] std::int64_t element_order(const DiscriminantElement& x) const {
    std::int64_t o = 1;
    for (std::size_t i = 0; i < orders_.size(); ++i)
      o = std::lcm(o, orders_[i] / std::gcd(orders_[i], x.coefficients[i]));
    return o;
  }

  /// Mixed-radix index; generator 0 is the most significant digit, so index
  /// order is lexicographic order on coefficient vectors.
  [[nodiscard]] std::uint64_t index_of(const DiscriminantElement& x) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < orders_.size(); ++i)
      idx = idx * static_cast<std::uint64_t>(orders_[i]) + static_cast<std::uint64_t>(x.coefficients[i]);
    return idx;
  }

  [[nodiscard]] DiscriminantElement element_at(std::uint64_t idx) const {
    auto e = zero();
    for (std::size_t i = orders_.size(); i-- > 0;) {
      const auto d = static_cast<std::uint64_t>(orders_[i]);
      e.coefficients[i] = static_cast<std::int64_t>(idx % d);
      idx /= d;
    }
    return e;
  }

  /// All elements in lexicographic order.
  [[nodiscard]] std::vector<DiscriminantElement> elements(const EnumerationLimits& limits = {}) const {
    const std::uint64_t n = order();
    if (n > limits.max_elements) throw ResourceError("group of order " + std::to_string(n) + " exceeds the element bound");
    std::vector<DiscriminantElement> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(element_at(i));
    return out;
  }

  friend bool operator==(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b) {
    return a.orders_ == b.orders_ && a.q_ == b.q_ && a.b_ == b.b_;
  }

 private:
  void check(const DiscriminantElement& x) const {
    if (x.coefficients.size() != orders_.size()) throw DimensionError("element does not belong to this group");
  }

  std::vector<std::int64_t> orders_;
  std::vector<Rational> q_;
  RationalMatrix b_;
};

/// Invariant factors d_1 | d_2 | ... (> 1) of the underlying group.
inline std::vector<Integer> invariant_factors(const FiniteQuadraticForm& a) {
  std::vector<Integer> diag;
  for (auto d : a.orders()) diag.emplace_back(d);
  std::vector<Integer> out;
  for (const auto& d : smith_normal_form(diagonal_matrix(diag)).diagonal())
    if (d > 1) out.push_back(d);
  return out;
}

/// Number of cyclic summands divisible by p, i.e. dim (A tensor Z/p).
inline std::size_t ell_p(const FiniteQuadraticForm& a, std::int64_t p) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  return static_cast<std::size_t>(
      std::count_if(a.orders().begin(), a.orders().end(), [p](std::int64_t d) { return d % p == 0; }));
}

/// Minimal number of generators: the largest ell_p.
inline std::size_t ell(const FiniteQuadraticForm& a) { return invariant_factors(a).size(); }

/// The p-primary part, generated by (d_i / p^{v_p(d_i)}) g_i.
inline FiniteQuadraticForm p_part(const FiniteQuadraticForm& a, std::int64_t p) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  std::vector<std::size_t> keep;
  std::vector<std::int64_t> orders;
  std::vector<std::int64_t> mult;
  for (std::size_t i = 0; i < a.orders().size(); ++i) {
    std::int64_t d = a.orders()[i];
    std::int64_t pk = 1;
    while (d % p == 0) {
      d /= p;
      pk *= p;
    }
    if (pk > 1) {
      keep.push_back(i);
      orders.push_back(pk);
      mult.push_back(d);
    }
  }
  std::vector<Rational> q;
  RationalMatrix b(keep.size(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    q.push_back(Rational(Integer(mult[i]) * Integer(mult[i])) * a.q_values()[keep[i]]);
    for (std::size_t j = 0; j < keep.size(); ++j)
      b(i, j) = Rational(Integer(mult[i]) * Integer(mult[j])) * a.b_values()(keep[i], keep[j]);
  }
  return {std::move(orders), std::move(q), std::move(b)};
}

// ---------------------------------------------------------------------------
// Discriminant of a lattice
// ---------------------------------------------------------------------------

/// discr L together with the data needed to move between L^v and the group.
class Discriminant {
 public:
  Discriminant(Lattice lattice, FiniteQuadraticForm form, RationalMatrix lifts, IntegerMatrix projection)
      : lattice_(std::move(lattice)), form_(std::move(form)), lifts_(std::move(lifts)), projection_(std::move(projection)) {}

  [[nodiscard]] const Lattice& lattice() const { return lattice_; }
  [[nodiscard]] const FiniteQuadraticForm& form() const { return form_; }
  /// Row i: generator i as a vector of L tensor Q in lattice coordinates.
  [[nodiscard]] const RationalMatrix& lifts() const { return lifts_; }

  /// Lift of an element to L^v (lattice coordinates, rational).
  [[nodiscard]] std::vector<Rational> lift(const DiscriminantElement& e) const {
    std::vector<Rational> x(lattice_.rank(), Rational(0));
    for (std::size_t i = 0; i < e.coefficients.size(); ++i) {
      if (e.coefficients[i] == 0) continue;
      const Rational c(e.coefficients[i]);
      for (std::size_t j = 0; j < x.size(); ++j) x[j] += c * lifts_(i, j);
    }
    return x;
  }

  /// Class of a dual vector given by its pairings z_j = x . e_j with the basis.
  [[nodiscard]] DiscriminantElement element_from_pairings(const std::vector<Integer>& z) const {
    std::vector<std::int64_t> c(form_.generator_count(), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      Integer s = 0;
      for (std::size_t j = 0; j < z.size(); ++j) s += projection_(i, j) * z[j];
      c[i] = mod_floor(s, Integer(form_.orders()[i])).convert_to<std::int64_t>();
    }
    return {std::move(c)};
  }

  /// Class of x in L^v (lattice coordinates); throws DomainError when x is not in L^v.
  [[nodiscard]] DiscriminantElement element_of(const std::vector<Rational>& x) const {
    std::vector<Integer> z(lattice_.rank());
    for (std::size_t j = 0; j < lattice_.rank(); ++j) {
      Rational s(0);
      for (std::size_t i = 0; i < lattice_.rank(); ++i) s += x[i] * Rational(lattice_.gram()(i, j));
      if (!is_integral(s)) throw DomainError("vector is not in the dual lattice");
      z[j] = numerator(s);
    }
    return element_from_pairings(z);
  }

 private:
  Lattice lattice_;
  FiniteQuadraticForm form_;
  RationalMatrix lifts_;
  IntegerMatrix projection_;
};

namespace detail {

/// Connected components of the graph of nonzero off-diagonal Gram entries.
inline std::vector<std::vector<std::size_t>> orthogonal_blocks(const IntegerMatrix& g) {
  const std::size_t n = g.rows();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> block{s};
    comp[s] = static_cast<int>(blocks.size());
    for (std::size_t k = 0; k < block.size(); ++k)
      for (std::size_t j = 0; j < n; ++j)
        if (comp[j] < 0 && g(block[k], j) != 0) {
          comp[j] = comp[s];
          block.push_back(j);
        }
    std::sort(block.begin(), block.end());
    blocks.push_back(std::move(block));
  }
  return blocks;
}

}  // namespace detail

/// Discriminant form of a nondegenerate even lattice. Generators come from the
/// Smith form of each orthogonal block of the Gram matrix, so an orthogonal
/// sum of lattices yields the orthogonal sum of their discriminant forms.
inline Discriminant discr(const Lattice& l) {
  if (!l.is_nondegenerate()) throw DomainError("discriminant of a degenerate lattice");
  if (!l.is_even()) throw DomainError("discriminant form requires an even lattice");
  const std::size_t n = l.rank();
  std::vector<std::int64_t> orders;
  std::vector<std::vector<Rational>> lifts;
  std::vector<std::vector<Integer>> proj;
  for (const auto& block : detail::orthogonal_blocks(l.gram())) {
    const std::size_t m = block.size();
    IntegerMatrix g(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) g(i, j) = l.gram()(block[i], block[j]);
    SmithForm s = smith_normal_form(g);
    for (std::size_t i = 0; i < m; ++i) {
      const Integer d = s.d(i, i);
      if (d == 1) continue;
      if (d > Integer(INT64_MAX)) throw ResourceError("invariant factor too large");
      orders.push_back(d.convert_to<std::int64_t>());
      std::vector<Rational> x(n, Rational(0));
      std::vector<Integer> p(n, Integer(0));
      for (std::size_t k = 0; k < m; ++k) {
        x[block[k]] = Rational(s.v(k, i), d);
        p[block[k]] = s.u(i, k);
      }
      lifts.push_back(std::move(x));
      proj.push_back(std::move(p));
    }
  }
  RationalMatrix lift_m = RationalMatrix::from_rows(lifts, n);
  const RationalMatrix g = to_rational(l.gram());
  RationalMatrix pairing = lift_m * g * lift_m.transpose();
  std::vector<Rational> q;
  for (std::size_t i = 0; i < orders.size(); ++i) q.push_back(pairing(i, i));
  FiniteQuadraticForm form(orders, std::move(q), pairing);
  return {l, std::move(form), std::move(lift_m), IntegerMatrix::from_rows(proj, n)};
}

// ---------------------------------------------------------------------------
// Subgroups
// ---------------------------------------------------------------------------

/// Elements of the subgroup generated by `gens`, sorted lexicographically.
inline std::vector<DiscriminantElement> subgroup_elements(const FiniteQuadraticForm& a,
                                                          const std::vector<DiscriminantElement>& gens,
                                                          const EnumerationLimits& limits = {}) {
  std::set<DiscriminantElement> seen{a.zero()};
  std::vector<DiscriminantElement> frontier{a.zero()};
  while (!frontier.empty()) {
    std::vector<DiscriminantElement> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        auto y = a.add(x, g);
        if (seen.insert(y).second) {
          if (seen.size() > limits.max_elements) throw ResourceError("subgroup exceeds the element bound");
          next.push_back(std::move(y));
        }
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

/// Isotropic subgroup of a finite quadratic form, given by generators.
struct GluingKernel {
  FiniteQuadraticForm parent;
  std::vector<DiscriminantElement> generators;
  std::uint64_t order = 1;
};

/// Validates isotropy (q = 0 on every element) and records the order.
inline GluingKernel make_kernel(const FiniteQuadraticForm& parent, std::vector<DiscriminantElement> gens,
                                const EnumerationLimits& limits = {}) {
  for (auto& g : gens) g = parent.reduce(g.coefficients);
  auto elems = subgroup_elements(parent, gens, limits);
  for (const auto& e : elems)
    if (parent.q(e) != 0) throw DomainError("kernel is not isotropic: q" + to_string(e) + " = " + parent.q(e).str());
  return {parent, std::move(gens), static_cast<std::uint64_t>(elems.size())};
}

/// All elements with q = 0 (including zero), lexicographic order.
inline std::vector<DiscriminantElement> isotropic_elements(
    const FiniteQuadraticForm& a, const EnumerationLimits& limits = {},
    const std::function<bool(const DiscriminantElement&)>& filter = {}) {
  const std::uint64_t n = a.order();
  if (n > limits.max_elements) throw ResourceError("group of order " + std::to_string(n) + " exceeds the element bound");
  std::vector<DiscriminantElement> out;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto e = a.element_at(i);
    if (a.q(e) == 0 && (!filter || filter(e))) out.push_back(std::move(e));
  }
  return out;
}

/// K^perp / K as a finite quadratic form; generators expressed in the parent.
struct Subquotient {
  FiniteQuadraticForm form;
  std::vector<DiscriminantElement> generators;
};

inline Subquotient orthogonal_quotient(const GluingKernel& k) {
  const FiniteQuadraticForm& a = k.parent;
  const std::size_t r = a.generator_count();
  const std::size_t s = k.generators.size();
  if (r == 0) return {FiniteQuadraticForm::trivial(), {}};

  // K^perp preimage: x in Z^r with sum_i x_i b(g_i, k_j) in Z for all j.
  IntegerMatrix perp_basis = IntegerMatrix::identity(r);
  if (s > 0) {
    Integer den = 1;
    RationalMatrix beta(r, s);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < s; ++j) {
        beta(i, j) = a.b(a.generator(i), k.generators[j]);
        den = boost::multiprecision::lcm(den, denominator(beta(i, j)));
      }
    IntegerMatrix sys(s, r + s);
    for (std::size_t j = 0; j < s; ++j) {
      for (std::size_t i = 0; i < r; ++i) sys(j, i) = numerator(beta(i, j) * Rational(den));
      sys(j, r + j) = den;
    }
    IntegerMatrix ker = integer_kernel(sys);
    perp_basis = hermite_normal_form(ker.block(0, 0, ker.rows(), r));
  }
  // K preimage: kernel generators plus d_i e_i.
  IntegerMatrix kgen(s + r, r);
  for (std::size_t j = 0; j < s; ++j)
    for (std::size_t i = 0; i < r; ++i) kgen(j, i) = k.generators[j].coefficients[i];
  for (std::size_t i = 0; i < r; ++i) kgen(s + i, i) = a.orders()[i];
  IntegerMatrix kbasis = hermite_normal_form(kgen);

  IntegerMatrix c = to_integer(to_rational(kbasis) * inverse(to_rational(perp_basis)));
  SmithForm snf = smith_normal_form(c);
  IntegerMatrix w = unimodular_inverse(snf.v) * perp_basis;

  std::vector<std::int64_t> orders;
  std::vector<DiscriminantElement> gens;
  for (std::size_t i = 0; i < r; ++i) {
    const Integer d = snf.d(i, i);
    if (d == 1) continue;
    orders.push_back(d.convert_to<std::int64_t>());
    std::vector<std::int64_t> coeffs(r);
    for (std::size_t j = 0; j < r; ++j) coeffs[j] = mod_floor(w(i, j), Integer(a.orders()[j])).convert_to<std::int64_t>();
    gens.push_back(a.reduce(std::move(coeffs)));
  }
  std::vector<Rational> q;
  RationalMatrix b(gens.size(), gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    q.push_back(a.q(gens[i]));
    for (std::size_t j = 0; j < gens.size(); ++j) b(i, j) = a.b(gens[i], gens[j]);
  }
  return {FiniteQuadraticForm(std::move(orders), std::move(q), std::move(b)), std::move(gens)};
}

// ---------------------------------------------------------------------------
// Isotropic subgroups of n<-2/3> up to signed permutations
// ---------------------------------------------------------------------------

struct KernelOrbit {
  GluingKernel representative;
  /// Number of subgroups in the orbit (within the enumerated family).
  std::size_t orbit_size = 0;
};

/// Predicate on the support size of each nonzero kernel element.
using SupportFilter = std::function<bool(std::size_t)>;

namespace detail {

inline bool is_sum_of_minus_two_thirds(const FiniteQuadraticForm& a) {
  const Rational q0(4, 3);
  for (std::size_t i = 0; i < a.generator_count(); ++i) {
    if (a.orders()[i] != 3 || a.q_values()[i] != q0) return false;
    for (std::size_t j = 0; j < a.generator_count(); ++j)
      if (i != j && a.b_values()(i, j) != 0) return false;
  }
  return true;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : v) h = (h ^ x) * 1099511628211ULL;
    return h;
  }
};

}  // namespace detail

/// One canonical representative per orbit of the signed symmetric group
/// (generator permutations and sign changes) acting on isotropic subgroups of
/// the given order in an orthogonal sum of copies of <-2/3>. `filter`, when
/// given, must hold for the support size of every nonzero kernel element.
///
/// Canonical form: the lexicographically least sorted element list over the
/// orbit; its generators are picked greedily in increasing order.
inline std::vector<KernelOrbit> isotropic_subgroups_up_to_signed_permutation(
    const FiniteQuadraticForm& a, std::uint64_t order, const SupportFilter& filter = {},
    const EnumerationLimits& limits = {}) {
  if (!detail::is_sum_of_minus_two_thirds(a)) throw DomainError("form is not an orthogonal sum of copies of <-2/3>");
  std::size_t levels = 0;
  for (std::uint64_t o = order; o > 1; o /= 3) {
    if (o % 3 != 0) throw DomainError("subgroup order must be a power of 3");
    ++levels;
  }
  const std::size_t n = a.generator_count();
  const std::uint64_t total = a.order();
  if (total > limits.max_elements) throw ResourceError("group exceeds the element bound");
  if (order * order > total) return {};  // K must lie in K^perp

  // Per-element data, indexed lexicographically (base 3, generator 0 first).
  std::vector<std::uint64_t> weight(n);
  for (std::size_t i = 0; i < n; ++i) weight[i] = 1;
  for (std::size_t i = n; i-- > 1;) weight[i - 1] = weight[i] * 3;
  std::vector<std::vector<std::uint8_t>> digits(total);
  std::vector<char> allowed(total, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    auto e = a.element_at(idx);
    digits[idx].resize(n);
    for (std::size_t i = 0; i < n; ++i) digits[idx][i] = static_cast<std::uint8_t>(e.coefficients[i]);
    allowed[idx] = idx != 0 && a.q(e) == 0 && (!filter || filter(support(e).size()));
  }
  auto add = [&](std::uint64_t x, std::uint64_t y) {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < n; ++i) r += ((digits[x][i] + digits[y][i]) % 3) * weight[i];
    return r;
  };
  auto dbl = [&](std::uint64_t x) { return add(x, x); };

  std::vector<std::uint64_t> allowed_list;
  for (std::uint64_t idx = 0; idx < total; ++idx)
    if (allowed[idx]) allowed_list.push_back(idx);

  using Key = std::vector<std::uint32_t>;
  std::vector<Key> current{Key{0}};
  for (std::size_t level = 0; level < levels; ++level) {
    std::unordered_map<Key, std::size_t, detail::KeyHash> seen;
    std::vector<Key> next;
    std::vector<char> in_h(total, 0);
    Key k;
    for (const auto& h : current) {
      for (auto e : h) in_h[e] = 1;
      for (const std::uint64_t x : allowed_list) {
        if (in_h[x]) continue;
        const std::uint64_t x2 = dbl(x);
        k.clear();
        bool ok = true;
        for (auto e : h) {
          const std::uint64_t s1 = add(e, x);
          const std::uint64_t s2 = add(e, x2);
          if (!allowed[s1] || !allowed[s2]) {
            ok = false;
            break;
          }
          k.push_back(e);
          k.push_back(static_cast<std::uint32_t>(s1));
          k.push_back(static_cast<std::uint32_t>(s2));
        }
        if (!ok) continue;
        std::sort(k.begin(), k.end());
        if (seen.emplace(k, next.size()).second) {
          next.push_back(k);
          if (next.size() > limits.max_subgroups) throw ResourceError("too many isotropic subgroups to enumerate");
        }
      }
      for (auto e : h) in_h[e] = 0;
    }
    current = std::move(next);
  }
  std::sort(current.begin(), current.end());
  std::unordered_map<Key, std::size_t, detail::KeyHash> id;
  for (std::size_t i = 0; i < current.size(); ++i) id.emplace(current[i], i);

  // Generators of the signed symmetric group acting on element indices.
  std::vector<std::vector<std::uint32_t>> actions;
  auto make_action = [&](const std::function<void(std::vector<std::uint8_t>&)>& f) {
    std::vector<std::uint32_t> perm(total);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      auto d = digits[idx];
      f(d);
      std::uint64_t r = 0;
      for (std::size_t i = 0; i < n; ++i) r += d[i] * weight[i];
      perm[idx] = static_cast<std::uint32_t>(r);
    }
    actions.push_back(std::move(perm));
  };
  if (n >= 1) make_action([](std::vector<std::uint8_t>& d) { d[0] = static_cast<std::uint8_t>((3 - d[0]) % 3); });
  if (n >= 2) {
    make_action([](std::vector<std::uint8_t>& d) { std::swap(d[0], d[1]); });
    make_action([](std::vector<std::uint8_t>& d) { std::rotate(d.begin(), d.begin() + 1, d.end()); });
  }

  detail::UnionFind uf(current.size());
  for (std::size_t i = 0; i < current.size(); ++i)
    for (const auto& act : actions) {
      Key img;
      img.reserve(current[i].size());
      for (auto e : current[i]) img.push_back(act[e]);
      std::sort(img.begin(), img.end());
      auto it = id.find(img);
      if (it == id.end()) throw Error("orbit enumeration: filter is not invariant under signed permutations");
      uf.unite(i, it->second);
    }

  // Roots of the union-find are the lexicographically least members.
  std::map<std::size_t, std::size_t> sizes;
  for (std::size_t i = 0; i < current.size(); ++i) ++sizes[uf.find(i)];
  std::vector<KernelOrbit> out;
  for (auto [root, size] : sizes) {
    const Key& key = current[root];
    std::vector<DiscriminantElement> gens;
    std::set<std::uint64_t> span{0};
    for (auto e : key) {
      if (span.count(e)) continue;
      gens.push_back(a.element_at(e));
      std::vector<std::uint64_t> grow(span.begin(), span.end());
      for (auto s : grow) {
        span.insert(add(s, e));
        span.insert(add(s, dbl(e)));
      }
    }
    out.push_back({GluingKernel{a, std::move(gens), static_cast<std::uint64_t>(key.size())}, size});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism
// ---------------------------------------------------------------------------

struct IsomorphismResult {
  bool isomorphic = false;
  /// Images of the generators of the first form (when isomorphic).
  std::vector<DiscriminantElement> images;
};

/// Brute-force search for a group isomorphism a -> b preserving q.
inline IsomorphismResult fqf_isomorphic(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b,
                                        const EnumerationLimits& limits = {}) {
  const std::uint64_t na = a.order();
  const std::uint64_t nb = b.order();
  if (na > limits.max_isomorphism_order || nb > limits.max_isomorphism_order)
    throw ResourceError("isomorphism search exceeds the order bound");
  if (na != nb || invariant_factors(a) != invariant_factors(b)) return {};
  if (a == b) {
    IsomorphismResult r{true, {}};
    for (std::size_t i = 0; i < a.generator_count(); ++i) r.images.push_back(b.generator(i));
    return r;
  }
  // Histogram of (element order, q) must agree.
  auto stats = [](const FiniteQuadraticForm& f) {
    std::map<std::pair<std::int64_t, Rational>, std::size_t> h;
    for (std::uint64_t i = 0; i < f.order(); ++i) {
      auto e = f.element_at(i);
      ++h[{f.element_order(e), f.q(e)}];
    }
    return h;
  };
  if (stats(a) != stats(b)) return {};

  const std::size_t r = a.generator_count();
  std::vector<std::vector<DiscriminantElement>> candidates(r);
  for (std::uint64_t i = 0; i < nb; ++i) {
    auto e = b.element_at(i);
    for (std::size_t g = 0; g < r; ++g)
      if (b.element_order(e) == a.orders()[g] && b.q(e) == a.q_values()[g]) candidates[g].push_back(e);
  }
  std::vector<DiscriminantElement> images;
  std::function<bool(std::size_t)> search = [&](std::size_t g) -> bool {
    if (g == r) return subgroup_elements(b, images, limits).size() == nb;
    for (const auto& c : candidates[g]) {
      bool ok = true;
      for (std::size_t h = 0; h < g && ok; ++h) ok = b.b(images[h], c) == a.b_values()(h, g);
      if (!ok) continue;
      images.push_back(c);
      if (search(g + 1)) return true;
      images.pop_back();
    }
    return false;
  };
  if (search(0)) return {true, images};
  return {};
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const FiniteQuadraticForm& a) {
  nlohmann::json j;
  j["orders"] = a.orders();
  nlohmann::json q = nlohmann::json::array();
  for (const auto& v : a.q_values()) q.push_back(v.str());
  j["q"] = q;
  nlohmann::json b = nlohmann::json::array();
  for (std::size_t i = 0; i < a.generator_count(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < a.generator_count(); ++k) row.push_back(a.b_values()(i, k).str());
    b.push_back(row);
  }
  j["b"] = b;
  return j;
}

inline FiniteQuadraticForm fqf_from_json(const nlohmann::json& j) {
  try {
    auto orders = j.at("orders").get<std::vector<std::int64_t>>();
    std::vector<Rational> q;
    for (const auto& v : j.at("q")) q.push_back(parse_rational(v.get<std::string>()));
    std::vector<std::vector<Rational>> rows;
    for (const auto& r : j.at("b")) {
      std::vector<Rational> row;
      for (const auto& v : r) row.push_back(parse_rational(v.get<std::string>()));
      rows.push_back(std::move(row));
    }
    const std::size_t n = orders.size();
    return {std::move(orders), std::move(q), RationalMatrix::from_rows(rows, n)};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed finite quadratic form JSON: ") + e.what());
  }
}

inline nlohmann::json to_json(const DiscriminantElement& e) { return e.coefficients; }

}  // namespace k3lat
