#pragma once

// Critical-point counts, genus bounds, cusp bookkeeping and the case analyses
// for maps of degree 2, 3 and 4 (and prime degree in general).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "k3lat/errors.hpp"
#include "k3lat/exact.hpp"

namespace k3lat {

namespace detail {
inline void require_nonnegative(std::int64_t v, const char* what) {
  if (v < 0) throw DomainError(std::string(what) + " must be nonnegative");
}
inline void require_positive(std::int64_t v, const char* what) {
  if (v < 1) throw DomainError(std::string(what) + " must be positive");
}
}  // namespace detail

/// 2d - 2 + 2g.
inline Integer critical_point_count(std::int64_t g, std::int64_t d) {
  detail::require_nonnegative(g, "genus");
  detail::require_positive(d, "degree");
  return Integer(2) * d - 2 + Integer(2) * g;
}

/// Arithmetic genus (d-1)^2 of a curve of bidegree (d,d).
inline Integer adjunction_genus(std::int64_t d) {
  detail::require_positive(d, "degree");
  return Integer(d - 1) * Integer(d - 1);
}

/// ceil((k-1)/2) for a cusp y^2 = x^k.
inline Integer cusp_genus_contribution(std::int64_t k) {
  if (k < 3) throw DomainError("cusp type must be at least 3");
  return Integer(k / 2);
}

/// g + k <= (d-1)^2.
inline bool birational_bound_holds(std::int64_t g, std::int64_t k, std::int64_t d) {
  detail::require_nonnegative(g, "genus");
  detail::require_nonnegative(k, "count");
  detail::require_positive(d, "degree");
  return Integer(g) + k <= adjunction_genus(d);
}

/// g > (d^2 - 4d + 3)/3, evaluated as 3g > d^2 - 4d + 3.
inline bool sqrt_bound_holds(std::int64_t g, std::int64_t d) {
  detail::require_nonnegative(g, "genus");
  detail::require_positive(d, "degree");
  const Integer dd(d);
  return Integer(3) * g > dd * dd - 4 * dd + 3;
}

struct Ramification {
  Integer value;
  /// Set when the value is negative, i.e. the covering data are inconsistent.
  bool negative = false;
};

/// Riemann-Hurwitz ramification 2 gC - 2 - delta (2 gD - 2).
inline Ramification rh_ramification(std::int64_t g_c, std::int64_t g_d, std::int64_t delta) {
  detail::require_nonnegative(g_c, "genus");
  detail::require_nonnegative(g_d, "genus");
  detail::require_positive(delta, "covering degree");
  Integer v = Integer(2) * g_c - 2 - Integer(delta) * (Integer(2) * g_d - 2);
  return {v, v < 0};
}

/// Cusp count 2 gD - 2 + 2d of the image curve.
inline Integer cusp_count_general(std::int64_t g_d, std::int64_t d) {
  detail::require_nonnegative(g_d, "genus");
  detail::require_positive(d, "degree");
  return Integer(2) * g_d - 2 + Integer(2) * d;
}

// ---------------------------------------------------------------------------
// Case analysis
// ---------------------------------------------------------------------------

/// Source genus g, map degree d = delta * covering, real critical points k,
/// genus of the normalized image.
struct CurveCase {
  std::int64_t genus = 0;
  std::int64_t degree = 1;
  std::int64_t delta = 1;
  std::int64_t covering = 1;
  std::int64_t critical_points = 0;
  std::int64_t normalization_genus = 0;

  [[nodiscard]] bool is_valid() const {
    if (genus < 0 || degree < 1 || delta < 1 || covering < 1 || critical_points < 0 || normalization_genus < 0)
      return false;
    if (Integer(delta) * covering != degree) return false;
    return Integer(critical_points) <= critical_point_count(genus, degree);
  }
};

enum class Verdict { real_structure, excluded_by_count, reduces_to_cusp_curve, out_of_scope_reference };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::real_structure: return "real-structure";
    case Verdict::excluded_by_count: return "excluded-by-count";
    case Verdict::reduces_to_cusp_curve: return "reduces-to-cusp-curve";
    case Verdict::out_of_scope_reference: return "out-of-scope-reference";
  }
  return "?";
}

/// An exact inequality lhs <= rhs with the outcome.
struct Inequality {
  std::string description;
  Integer lhs;
  Integer rhs;
  [[nodiscard]] bool holds() const { return lhs <= rhs; }
};

struct CaseVerdict {
  /// The image has bidegree (delta, delta).
  std::int64_t delta = 1;
  Verdict verdict = Verdict::real_structure;
  std::vector<Inequality> witnesses;
  /// Number of real cusps of the image curve in the surviving branch.
  std::optional<Integer> cusps;
  std::string note;
};

namespace detail {

inline bool is_prime_degree(std::int64_t d) {
  if (d < 2) return false;
  for (std::int64_t p = 2; p * p <= d; ++p)
    if (d % p == 0) return false;
  return true;
}

/// Birational branch: image of bidegree (d,d), all 2d-2+2g critical points real.
inline CaseVerdict birational_branch(std::int64_t g, std::int64_t d) {
  CaseVerdict v;
  v.delta = d;
  const Integer k = critical_point_count(g, d);
  v.witnesses.push_back({"g + k <= (d-1)^2", Integer(g) + k, adjunction_genus(d)});
  if (!v.witnesses.back().holds()) {
    v.verdict = Verdict::excluded_by_count;
  } else if (g == 0) {
    v.verdict = Verdict::out_of_scope_reference;
    v.note = "genus 0 is settled by separate work and is not decided here";
  } else {
    v.verdict = Verdict::reduces_to_cusp_curve;
    v.cusps = k;
    v.note = "real curve of bidegree (" + std::to_string(d) + "," + std::to_string(d) + ") with " + k.str() +
             " ordinary real cusps and no other singularities";
  }
  return v;
}

inline CaseVerdict real_branch() {
  CaseVerdict v;
  v.delta = 1;
  v.verdict = Verdict::real_structure;
  v.note = "f is real for some real structure on the target";
  return v;
}

}  // namespace detail

/// Degree 4, all critical points real: images of bidegree (1,1), (2,2), (4,4).
inline std::vector<CaseVerdict> degree4_case_analysis(std::int64_t g) {
  detail::require_nonnegative(g, "genus");
  std::vector<CaseVerdict> out{detail::real_branch()};

  // Bidegree (2,2): arithmetic genus 1, so the normalization has genus 0 or 1
  // and at most one cusp; each cusp absorbs two critical points.
  CaseVerdict two;
  two.delta = 2;
  two.verdict = Verdict::excluded_by_count;
  const Integer crit = critical_point_count(g, 4);
  for (std::int64_t gt = 0; gt <= 1; ++gt) {
    const Integer ram = rh_ramification(g, gt, 2).value;
    const Integer lhs = (crit - ram) / 2;  // 2 + 2 g~
    two.witnesses.push_back({"(1/2)(2g+6 - (2g+2-4g~)) <= 1 with g~ = " + std::to_string(gt), lhs, Integer(1)});
    if (two.witnesses.back().holds()) two.verdict = Verdict::reduces_to_cusp_curve;
  }
  two.note = "reduces to 2 + 2g~ <= 1";
  out.push_back(std::move(two));

  out.push_back(detail::birational_branch(g, 4));
  return out;
}

/// Case analysis for prime degree d or d = 4, assuming all critical points real.
inline std::vector<CaseVerdict> case_analysis(std::int64_t d, std::int64_t g) {
  detail::require_nonnegative(g, "genus");
  detail::require_positive(d, "degree");
  if (d == 1) return {detail::real_branch()};
  if (d == 4) return degree4_case_analysis(g);
  if (!detail::is_prime_degree(d)) throw DomainError("case analysis is available for prime degree and degree 4");
  return {detail::real_branch(), detail::birational_branch(g, d)};
}

inline nlohmann::ordered_json to_json(const CaseVerdict& v) {
  nlohmann::ordered_json j;
  j["bidegree"] = {v.delta, v.delta};
  j["verdict"] = to_string(v.verdict);
  nlohmann::ordered_json w = nlohmann::ordered_json::array();
  for (const auto& ineq : v.witnesses)
    w.push_back({{"inequality", ineq.description}, {"lhs", ineq.lhs.str()}, {"rhs", ineq.rhs.str()},
                 {"holds", ineq.holds()}});
  j["witnesses"] = w;
  if (v.cusps) j["cusps"] = v.cusps->str();
  j["note"] = v.note;
  return j;
}

}  // namespace k3lat
