#pragma once

// Integral lattices given by Gram matrices, the ADE/hyperbolic constructors,
// orthogonal sums, rescaling, and sublattice saturation.

#include <cctype>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "k3lat/errors.hpp"
#include "k3lat/exact.hpp"

namespace k3lat {

class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(IntegerMatrix gram, std::string label = {}) : gram_(std::move(gram)), label_(std::move(label)) {
    if (!gram_.is_square()) throw DimensionError("Gram matrix must be square");
    if (!gram_.is_symmetric()) throw ShapeError("Gram matrix must be symmetric");
  }

  [[nodiscard]] const IntegerMatrix& gram() const { return gram_; }
  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] std::size_t rank() const { return gram_.rows(); }
  [[nodiscard]] Integer determinant() const { return k3lat::determinant(gram_); }
  [[nodiscard]] Inertia signature() const { return k3lat::signature(gram_); }
  [[nodiscard]] bool is_nondegenerate() const { return determinant() != 0; }
  [[nodiscard]] bool is_unimodular() const { return abs(determinant()) == 1; }

  [[nodiscard]] bool is_even() const {
    for (std::size_t i = 0; i < rank(); ++i)
      if (gram_(i, i) % 2 != 0) return false;
    return true;
  }

  [[nodiscard]] bool is_negative_definite() const {
    auto s = signature();
    return s.negative == rank();
  }

  /// x . y for row vectors in lattice coordinates.
  template <typename T>
  [[nodiscard]] T inner(const std::vector<T>& x, const std::vector<T>& y) const {
    if (x.size() != rank() || y.size() != rank()) throw DimensionError("vector size does not match rank");
    T s(0);
    for (std::size_t i = 0; i < rank(); ++i) {
      if (is_zero(x[i])) continue;
      for (std::size_t j = 0; j < rank(); ++j) s += x[i] * T(gram_(i, j)) * y[j];
    }
    return s;
  }

  [[nodiscard]] Lattice with_label(std::string label) const { return Lattice(gram_, std::move(label)); }

  friend bool operator==(const Lattice& a, const Lattice& b) { return a.gram_ == b.gram_; }

 private:
  IntegerMatrix gram_;
  std::string label_;
};

inline bool is_even(const Lattice& l) { return l.is_even(); }

/// Sublattice of `ambient` spanned by the rows of `basis` (ambient coordinates).
class SublatticeEmbedding {
 public:
  SublatticeEmbedding() = default;
  SublatticeEmbedding(Lattice ambient, IntegerMatrix basis) : ambient_(std::move(ambient)), basis_(std::move(basis)) {
    if (basis_.rows() > 0 && basis_.cols() != ambient_.rank())
      throw DimensionError("sublattice basis width does not match ambient rank");
    if (basis_.rows() == 0) basis_ = IntegerMatrix(0, ambient_.rank());
    if (k3lat::rank(to_rational(basis_)) != basis_.rows())
      throw DomainError("sublattice basis rows are linearly dependent");
  }

  [[nodiscard]] const Lattice& ambient() const { return ambient_; }
  [[nodiscard]] const IntegerMatrix& basis() const { return basis_; }
  [[nodiscard]] std::size_t rank() const { return basis_.rows(); }

  /// Lattice with the induced form basis * gram * basis^T.
  [[nodiscard]] Lattice induced(std::string label = {}) const {
    return Lattice(basis_ * ambient_.gram() * basis_.transpose(), std::move(label));
  }

 private:
  Lattice ambient_;
  IntegerMatrix basis_;
};

// ---------------------------------------------------------------------------
// Named lattices
// ---------------------------------------------------------------------------

namespace detail {

inline Lattice from_dynkin(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                           std::string label) {
  IntegerMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) g(i, i) = -2;
  for (auto [a, b] : edges) {
    g(a, b) = 1;
    g(b, a) = 1;
  }
  return Lattice(std::move(g), std::move(label));
}

}  // namespace detail

/// Standard Gram matrices: A_p (p>=1), D_q (q>=4), E_6/7/8 (negative definite,
/// roots of square -2, simple-root bases), and the hyperbolic plane U.
/// E_n follows Bourbaki labelling: chain 1-3-4-5-...-n with node 2 on node 4.
inline Lattice named_lattice(const std::string& family, int parameter = 0) {
  using Edges = std::vector<std::pair<std::size_t, std::size_t>>;
  if (family == "U") return Lattice(IntegerMatrix{{0, 1}, {1, 0}}, "U");
  if (family == "A") {
    if (parameter < 1) throw DomainError("A_p requires p >= 1");
    Edges e;
    for (int i = 0; i + 1 < parameter; ++i) e.emplace_back(i, i + 1);
    return detail::from_dynkin(static_cast<std::size_t>(parameter), e, "A" + std::to_string(parameter));
  }
  if (family == "D") {
    if (parameter < 4) throw DomainError("D_q requires q >= 4");
    Edges e;
    for (int i = 0; i + 2 < parameter; ++i) e.emplace_back(i, i + 1);
    e.emplace_back(parameter - 3, parameter - 1);
    return detail::from_dynkin(static_cast<std::size_t>(parameter), e, "D" + std::to_string(parameter));
  }
  if (family == "E") {
    if (parameter < 6 || parameter > 8) throw DomainError("E_n requires n in {6, 7, 8}");
    // 0-based: 1-3, 3-4, 4-5, ..., and 2-4.
    Edges e{{0, 2}, {2, 3}, {1, 3}};
    for (int i = 3; i + 1 < parameter; ++i) e.emplace_back(i, i + 1);
    return detail::from_dynkin(static_cast<std::size_t>(parameter), e, "E" + std::to_string(parameter));
  }
  throw DomainError("unknown lattice family '" + family + "'");
}

/// Rank-one lattice <n>.
inline Lattice rank_one(const Integer& n) {
  return Lattice(IntegerMatrix{{n}}, "<" + n.str() + ">");
}

/// L(n): the form multiplied by n.
inline Lattice rescale(const Lattice& l, const Integer& n) {
  if (n == 0) throw DomainError("rescale factor must be nonzero");
  std::string label = l.label().empty() ? std::string{} : l.label() + "(" + n.str() + ")";
  return Lattice(n * l.gram(), std::move(label));
}

/// Orthogonal sum; block-diagonal Gram matrix.
inline Lattice direct_sum(const std::vector<Lattice>& parts) {
  std::vector<IntegerMatrix> grams;
  std::string label;
  for (const auto& p : parts) {
    grams.push_back(p.gram());
    if (!label.empty()) label += "+";
    label += p.label().empty() ? "?" : p.label();
  }
  return Lattice(block_diagonal(grams), std::move(label));
}

inline Lattice repeat(const Lattice& l, std::size_t n) {
  Lattice s = direct_sum(std::vector<Lattice>(n, l));
  return s.with_label(std::to_string(n) + l.label());
}

/// Parses lattice expressions such as "E8", "8A2", "2E8+3U", "8A2+U(2)",
/// "<-4>", and the aliases "U2" = U(2) and "K3" = 2E8+3U.
inline Lattice parse_lattice(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ParseError("empty lattice expression");
  if (s == "K3") return parse_lattice("2E8+3U").with_label("K3");

  std::vector<Lattice> parts;
  std::size_t pos = 0;
  auto read_int = [&](bool allow_sign) -> std::string {
    std::size_t start = pos;
    if (allow_sign && pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    return s.substr(start, pos - start);
  };
  while (pos < s.size()) {
    std::string mult = read_int(false);
    if (pos >= s.size()) throw ParseError("truncated lattice expression '" + text + "'");
    Lattice base;
    const char c = s[pos];
    if (c == '<') {
      ++pos;
      std::string v = read_int(true);
      if (v.empty() || v == "-" || v == "+" || pos >= s.size() || s[pos] != '>')
        throw ParseError("malformed rank-one lattice in '" + text + "'");
      ++pos;
      base = rank_one(Integer(v));
    } else if (c == 'A' || c == 'D' || c == 'E') {
      ++pos;
      std::string p = read_int(false);
      if (p.empty()) throw ParseError("missing rank after '" + std::string(1, c) + "' in '" + text + "'");
      base = named_lattice(std::string(1, c), std::stoi(p));
    } else if (c == 'U') {
      ++pos;
      base = named_lattice("U");
      std::string k = read_int(false);
      if (!k.empty()) base = rescale(base, Integer(k));  // U2 == U(2)
    } else {
      throw ParseError("unexpected '" + std::string(1, c) + "' in lattice expression '" + text + "'");
    }
    if (pos < s.size() && s[pos] == '(') {
      ++pos;
      std::string k = read_int(true);
      if (k.empty() || pos >= s.size() || s[pos] != ')') throw ParseError("malformed scale in '" + text + "'");
      ++pos;
      base = rescale(base, Integer(k));
    }
    const std::size_t n = mult.empty() ? 1 : std::stoul(mult);
    if (n == 0) throw ParseError("zero multiplicity in '" + text + "'");
    parts.push_back(n == 1 ? base : repeat(base, n));
    if (pos < s.size()) {
      if (s[pos] != '+') throw ParseError("expected '+' in lattice expression '" + text + "'");
      ++pos;
    }
  }
  if (parts.size() == 1) return parts.front().with_label(s);
  return direct_sum(parts).with_label(s);
}

// ---------------------------------------------------------------------------
// Sublattices
// ---------------------------------------------------------------------------

/// Saturation of the sublattice inside the ambient group, as an HNF basis.
inline SublatticeEmbedding primitive_hull(const SublatticeEmbedding& e) {
  if (e.rank() == 0) return e;
  SmithForm s = smith_normal_form(e.basis());
  const std::size_t r = s.rank();
  IntegerMatrix vinv = unimodular_inverse(s.v);
  return {e.ambient(), hermite_normal_form(vinv.block(0, 0, r, vinv.cols()))};
}

/// Index of the sublattice in its primitive hull.
inline Integer hull_index(const SublatticeEmbedding& e) {
  if (e.rank() == 0) return Integer(1);
  Integer idx = 1;
  for (const auto& d : smith_normal_form(e.basis()).diagonal())
    if (d != 0) idx *= d;
  return idx;
}

inline bool is_primitive(const SublatticeEmbedding& e) { return hull_index(e) == 1; }

/// {x in ambient : x.s = 0 for all s in the sublattice}; always saturated.
inline SublatticeEmbedding orthogonal_complement(const SublatticeEmbedding& e) {
  if (!e.ambient().is_nondegenerate()) throw DomainError("orthogonal complement needs a nondegenerate ambient lattice");
  if (e.rank() == 0) return {e.ambient(), IntegerMatrix::identity(e.ambient().rank())};
  return {e.ambient(), integer_kernel(e.basis() * e.ambient().gram())};
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::json integer_matrix_to_json(const IntegerMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) > Integer(INT64_MAX) || m(i, j) < Integer(INT64_MIN))
        throw DomainError("matrix entry exceeds the JSON integer range");
      row.push_back(m(i, j).convert_to<std::int64_t>());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline IntegerMatrix integer_matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("matrix must be a JSON array of rows");
  std::vector<std::vector<Integer>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw ParseError("matrix row must be a JSON array");
    std::vector<Integer> row;
    for (const auto& x : r) {
      if (!x.is_number_integer()) throw ParseError("matrix entries must be integers");
      row.emplace_back(x.get<std::int64_t>());
    }
    rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  for (const auto& r : rows)
    if (r.size() != n) throw ParseError("Gram matrix must be square");
  return IntegerMatrix::from_rows(rows, n);
}

inline nlohmann::json to_json(const Lattice& l) {
  nlohmann::json j;
  j["label"] = l.label();
  j["gram"] = integer_matrix_to_json(l.gram());
  return j;
}

inline Lattice lattice_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("gram")) throw ParseError("lattice JSON needs a \"gram\" field");
  std::string label = j.contains("label") ? j.at("label").get<std::string>() : std::string{};
  try {
    return Lattice(integer_matrix_from_json(j.at("gram")), std::move(label));
  } catch (const ShapeError& e) {
    throw ParseError(e.what());
  }
}

}  // namespace k3lat
