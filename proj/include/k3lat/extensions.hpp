#pragma once

// Finite-index overlattices from isotropic kernels, exact short-vector
// enumeration, quasi-primitivity, the discriminant anti-isometry of an
// orthogonal complement in a unimodular lattice, and involution eigenlattices.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "k3lat/config.hpp"
#include "k3lat/discriminant.hpp"
#include "k3lat/errors.hpp"
#include "k3lat/exact.hpp"
#include "k3lat/lattice.hpp"

namespace k3lat {

// ---------------------------------------------------------------------------
// Overlattices
// ---------------------------------------------------------------------------

struct Overlattice {
  Lattice base;
  GluingKernel kernel;
  Lattice result;
  /// Row i: i-th basis vector of `result` in base tensor Q coordinates (HNF).
  RationalMatrix change_of_basis;
  std::uint64_t index = 1;
  /// |det result| * index^2 == |det base|.
  bool determinant_law_holds = false;
  /// discr result isomorphic to K^perp/K; empty when the groups are too large to compare.
  std::optional<bool> discriminant_matches;
};

/// The extension {x in L^v : x mod L in K}, with an HNF basis.
inline Overlattice overlattice(const Discriminant& d, const GluingKernel& kernel, const EnumerationLimits& limits = {}) {
  if (!(kernel.parent == d.form())) throw DomainError("kernel does not live in this discriminant form");
  GluingKernel k = make_kernel(d.form(), kernel.generators, limits);  // revalidates isotropy

  const Lattice& base = d.lattice();
  const std::size_t n = base.rank();
  RationalMatrix rows = RationalMatrix::identity(n);
  for (const auto& g : k.generators) {
    auto x = d.lift(g);
    RationalMatrix r(1, n);
    for (std::size_t j = 0; j < n; ++j) r(0, j) = x[j];
    rows = stack_rows(rows, r);
  }
  Integer den = 1;
  for (std::size_t i = 0; i < rows.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) den = boost::multiprecision::lcm(den, denominator(rows(i, j)));
  IntegerMatrix scaled = to_integer(Rational(den) * rows);
  IntegerMatrix h = hermite_normal_form(scaled);
  RationalMatrix basis = Rational(1, den) * to_rational(h);

  IntegerMatrix gram = to_integer(basis * to_rational(base.gram()) * basis.transpose());
  Lattice result(gram, base.label().empty() ? std::string{} : base.label() + "~");
  if (!result.is_even()) throw Error("overlattice is not even although the kernel is isotropic");

  Overlattice o{base, k, result, basis, k.order, false, std::nullopt};
  const Integer idx(k.order);
  o.determinant_law_holds = abs(result.determinant()) * idx * idx == abs(base.determinant());
  const std::uint64_t quotient_order = d.form().order() / (k.order * k.order);
  if (quotient_order <= limits.max_isomorphism_order) {
    auto q = orthogonal_quotient(k);
    o.discriminant_matches = fqf_isomorphic(discr(result).form(), q.form, limits).isomorphic;
  }
  return o;
}

inline Overlattice overlattice(const Lattice& base, const GluingKernel& kernel, const EnumerationLimits& limits = {}) {
  return overlattice(discr(base), kernel, limits);
}

// ---------------------------------------------------------------------------
// Short vectors
// ---------------------------------------------------------------------------

namespace detail {

/// Fincke-Pohst data: q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2.
struct QuadraticDecomposition {
  std::vector<Rational> d;
  RationalMatrix mu;
};

inline std::optional<QuadraticDecomposition> decompose_positive_definite(const IntegerMatrix& form) {
  const std::size_t n = form.rows();
  RationalMatrix q = to_rational(form);
  for (std::size_t i = 0; i < n; ++i) {
    if (q(i, i) <= 0) return std::nullopt;
    for (std::size_t j = i + 1; j < n; ++j) {
      q(j, i) = q(i, j);
      q(i, j) = q(i, j) / q(i, i);
    }
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t l = k; l < n; ++l) q(k, l) -= q(k, i) * q(i, l);
  }
  QuadraticDecomposition out{std::vector<Rational>(n), RationalMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.d[i] = q(i, i);
    for (std::size_t j = i + 1; j < n; ++j) out.mu(i, j) = q(i, j);
  }
  return out;
}

inline std::size_t thread_count() {
  if (const char* env = std::getenv("K3LAT_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return static_cast<std::size_t>(t);
  }
  return 1;
}

}  // namespace detail

/// All nonzero x with x^T form x == norm, for a positive definite integer form.
/// Exact enumeration; output sorted lexicographically.
inline std::vector<std::vector<Integer>> vectors_of_norm(const IntegerMatrix& form, const Integer& norm,
                                                         const EnumerationLimits& limits = {}) {
  const std::size_t n = form.rows();
  if (n > limits.max_root_rank) throw ResourceError("rank " + std::to_string(n) + " exceeds the enumeration bound");
  if (n == 0) return {};
  auto dec = detail::decompose_positive_definite(form);
  if (!dec) throw DomainError("form is not positive definite");
  const Rational bound(norm);

  // Candidates x_i with d_i (x_i - c)^2 <= remaining.
  auto range = [&](std::size_t i, const Rational& c, const Rational& remaining) {
    std::vector<std::pair<Integer, Rational>> out;  // value, d_i (x_i - c)^2
    const Integer start = floor_of(c);
    for (Integer x = start;; --x) {
      Rational t = Rational(x) - c;
      Rational v = dec->d[i] * t * t;
      if (v > remaining) break;
      out.emplace_back(x, v);
    }
    for (Integer x = start + 1;; ++x) {
      Rational t = Rational(x) - c;
      Rational v = dec->d[i] * t * t;
      if (v > remaining) break;
      out.emplace_back(x, v);
    }
    return out;
  };

  std::function<void(std::size_t, std::vector<Integer>&, const Rational&, std::vector<std::vector<Integer>>&)> recurse =
      [&](std::size_t i, std::vector<Integer>& x, const Rational& remaining, std::vector<std::vector<Integer>>& out) {
        Rational c(0);
        for (std::size_t j = i + 1; j < n; ++j)
          if (x[j] != 0) c -= dec->mu(i, j) * Rational(x[j]);
        for (auto& [xi, used] : range(i, c, remaining)) {
          x[i] = xi;
          const Rational rest = remaining - used;
          if (i == 0) {
            if (rest == 0) out.push_back(x);
          } else {
            recurse(i - 1, x, rest, out);
          }
        }
        x[i] = 0;
      };

  // Parallel over the outermost coordinate; merged and sorted afterwards.
  auto top = range(n - 1, Rational(0), bound);
  const std::size_t threads = std::min(detail::thread_count(), top.size());
  std::vector<std::vector<std::vector<Integer>>> partial(std::max<std::size_t>(threads, 1));
  auto work = [&](std::size_t t) {
    for (std::size_t k = t; k < top.size(); k += std::max<std::size_t>(threads, 1)) {
      std::vector<Integer> x(n, Integer(0));
      x[n - 1] = top[k].first;
      const Rational rest = bound - top[k].second;
      if (n == 1) {
        if (rest == 0) partial[t].push_back(x);
      } else {
        recurse(n - 2, x, rest, partial[t]);
      }
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  std::vector<std::vector<Integer>> out;
  for (auto& p : partial)
    for (auto& v : p)
      if (std::any_of(v.begin(), v.end(), [](const Integer& a) { return a != 0; })) out.push_back(std::move(v));
  std::sort(out.begin(), out.end());
  return out;
}

/// All vectors of square -2 in a negative definite lattice, in +- pairs:
/// for each r with positive leading coefficient (lexicographic order), r then -r.
inline std::vector<std::vector<Integer>> roots(const Lattice& l, const EnumerationLimits& limits = {}) {
  if (l.rank() > limits.max_root_rank) throw ResourceError("rank exceeds the root enumeration bound");
  if (!l.is_negative_definite()) throw DomainError("root enumeration needs a negative definite lattice");
  auto all = vectors_of_norm(Integer(-1) * l.gram(), Integer(2), limits);
  std::vector<std::vector<Integer>> out;
  for (const auto& v : all) {
    auto lead = std::find_if(v.begin(), v.end(), [](const Integer& a) { return a != 0; });
    if (*lead < 0) continue;
    out.push_back(v);
    std::vector<Integer> neg = v;
    for (auto& a : neg) a = -a;
    out.push_back(std::move(neg));
  }
  return out;
}

/// True when the roots of `l` span it (with `l` negative definite).
inline bool is_root_system(const Lattice& l, const EnumerationLimits& limits = {}) {
  if (l.rank() == 0) return true;
  if (!l.is_negative_definite()) return false;
  auto r = roots(l, limits);
  if (r.empty()) return false;
  IntegerMatrix m = IntegerMatrix::from_rows(r);
  return hermite_normal_form(m) == IntegerMatrix::identity(l.rank());
}

// ---------------------------------------------------------------------------
// Quasi-primitivity
// ---------------------------------------------------------------------------

struct QuasiPrimitivity {
  bool quasi_primitive = false;
  std::size_t base_roots = 0;
  std::size_t extension_roots = 0;
  /// A root of the extension outside the base, in base tensor Q coordinates.
  std::optional<std::vector<Rational>> offending_root;
};

/// Every root of ext.result lies in the base lattice?
inline QuasiPrimitivity is_quasi_primitive(const Lattice& base, const Overlattice& ext,
                                           const EnumerationLimits& limits = {}) {
  if (!(base == ext.base)) throw DomainError("extension does not belong to this base lattice");
  if (!is_root_system(base, limits)) throw DomainError("base lattice is not a root system");
  QuasiPrimitivity out;
  out.base_roots = roots(base, limits).size();
  auto ext_roots = roots(ext.result, limits);
  out.extension_roots = ext_roots.size();
  out.quasi_primitive = true;
  const std::size_t n = base.rank();
  for (const auto& r : ext_roots) {
    std::vector<Rational> x(n, Rational(0));
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) x[j] += Rational(r[i]) * ext.change_of_basis(i, j);
    }
    if (!std::all_of(x.begin(), x.end(), [](const Rational& v) { return is_integral(v); })) {
      out.quasi_primitive = false;
      out.offending_root = std::move(x);
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gluing a primitive sublattice of a unimodular lattice with its complement
// ---------------------------------------------------------------------------

struct AntiIsometry {
  Discriminant sublattice_discr;
  Discriminant complement_discr;
  SublatticeEmbedding complement;
  /// (element of discr S, its image in discr S^perp), over all of discr S.
  std::vector<std::pair<DiscriminantElement, DiscriminantElement>> table;
  bool bijective = false;
  bool negates_q = false;

  [[nodiscard]] bool ok() const { return bijective && negates_q; }
};

/// The graph of discr S -> discr S^perp cut out by the ambient lattice, checked
/// to be a bijection with q(image) = -q(source).
inline AntiIsometry glue_complement_check(const Lattice& ambient, const SublatticeEmbedding& s,
                                          const EnumerationLimits& limits = {}) {
  if (!(s.ambient() == ambient)) throw DomainError("sublattice does not live in this ambient lattice");
  if (!ambient.is_even() || !ambient.is_unimodular()) throw DomainError("ambient lattice must be even unimodular");
  if (!is_primitive(s)) throw DomainError("sublattice is not primitive");
  Lattice sl = s.induced();
  if (!sl.is_nondegenerate()) throw DomainError("sublattice is degenerate; its discriminant form is undefined");
  SublatticeEmbedding t = orthogonal_complement(s);
  Lattice tl = t.induced();
  Discriminant ds = discr(sl);
  Discriminant dt = discr(tl);

  const IntegerMatrix s_pair = s.basis() * ambient.gram();
  const IntegerMatrix t_pair = t.basis() * ambient.gram();
  std::vector<DiscriminantElement> gen_images;
  for (std::size_t i = 0; i < ds.form().generator_count(); ++i) {
    auto x = ds.lift(ds.form().generator(i));
    std::vector<Integer> w(sl.rank());
    for (std::size_t j = 0; j < sl.rank(); ++j) {
      Rational v(0);
      for (std::size_t k = 0; k < sl.rank(); ++k) v += x[k] * Rational(sl.gram()(k, j));
      w[j] = numerator(v);
    }
    auto m = solve_integer(s_pair, w);
    if (!m) throw Error("no ambient vector realizes a dual class; the ambient lattice is not unimodular");
    std::vector<Integer> z(tl.rank(), Integer(0));
    for (std::size_t r = 0; r < tl.rank(); ++r)
      for (std::size_t c = 0; c < ambient.rank(); ++c) z[r] += t_pair(r, c) * (*m)[c];
    gen_images.push_back(dt.element_from_pairings(z));
  }

  AntiIsometry out{ds, dt, t, {}, false, false};
  const auto elems = ds.form().elements(limits);
  std::set<DiscriminantElement> seen;
  out.negates_q = true;
  for (const auto& e : elems) {
    auto img = dt.form().zero();
    for (std::size_t i = 0; i < e.coefficients.size(); ++i)
      img = dt.form().add(img, dt.form().scale(gen_images[i], e.coefficients[i]));
    if (mod_rational(ds.form().q(e) + dt.form().q(img), Integer(2)) != 0) out.negates_q = false;
    seen.insert(img);
    out.table.emplace_back(e, std::move(img));
  }
  out.bijective = seen.size() == elems.size() && elems.size() == dt.form().order();
  return out;
}

// ---------------------------------------------------------------------------
// Involutions
// ---------------------------------------------------------------------------

/// An involutive isometry c of a lattice, acting on coordinate column vectors.
struct InvolutionSpec {
  Lattice lattice;
  IntegerMatrix matrix;

  [[nodiscard]] bool is_valid() const {
    const std::size_t n = lattice.rank();
    if (matrix.rows() != n || matrix.cols() != n) return false;
    if (!(matrix * matrix == IntegerMatrix::identity(n))) return false;
    return matrix.transpose() * lattice.gram() * matrix == lattice.gram();
  }
};

struct Eigenlattices {
  SublatticeEmbedding plus;   ///< ker(1 - c)
  SublatticeEmbedding minus;  ///< ker(1 + c)
};

inline Eigenlattices eigenlattices(const InvolutionSpec& inv) {
  if (!inv.is_valid()) throw DomainError("matrix is not an involutive isometry of the lattice");
  const std::size_t n = inv.lattice.rank();
  const IntegerMatrix id = IntegerMatrix::identity(n);
  return {SublatticeEmbedding(inv.lattice, integer_kernel(id - inv.matrix)),
          SublatticeEmbedding(inv.lattice, integer_kernel(id + inv.matrix))};
}

/// Whether the reductions of both eigenlattices span (Z/p)^rank.
inline bool eigenlattices_span_mod_p(const Eigenlattices& e, std::int64_t p) {
  const std::size_t n = e.plus.ambient().rank();
  return rank_mod_p(stack_rows(e.plus.basis(), e.minus.basis()), p) == n;
}

// ---------------------------------------------------------------------------
// Root sublattices
// ---------------------------------------------------------------------------

/// Images of the basis of a root lattice `target` as roots of `ambient` with the
/// same Gram matrix; first solution in lexicographic search order.
inline std::optional<IntegerMatrix> find_root_embedding(const Lattice& target, const Lattice& ambient,
                                                        const EnumerationLimits& limits = {}) {
  const auto amb_roots = roots(ambient, limits);
  const std::size_t k = target.rank();
  std::vector<std::size_t> choice;
  std::function<bool()> search = [&]() -> bool {
    const std::size_t i = choice.size();
    if (i == k) return true;
    for (std::size_t c = 0; c < amb_roots.size(); ++c) {
      bool ok = target.gram()(i, i) == -2;
      for (std::size_t j = 0; j < i && ok; ++j)
        ok = ambient.inner(amb_roots[c], amb_roots[choice[j]]) == target.gram()(i, j);
      if (!ok) continue;
      choice.push_back(c);
      if (search()) return true;
      choice.pop_back();
    }
    return false;
  };
  if (!search()) return std::nullopt;
  std::vector<std::vector<Integer>> rows;
  for (auto c : choice) rows.push_back(amb_roots[c]);
  return IntegerMatrix::from_rows(rows, ambient.rank());
}

}  // namespace k3lat
