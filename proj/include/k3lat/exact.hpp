#pragma once

// Exact integer / rational linear algebra.
//
// Everything here works over arbitrary-precision integers and rationals
// (GMP through Boost.Multiprecision). Matrices are small and dense; none of
// the routines try to be clever about sparsity.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "k3lat/errors.hpp"

namespace k3lat {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                  boost::multiprecision::et_off>;

// ---------------------------------------------------------------------------
// Scalar helpers
// ---------------------------------------------------------------------------

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

/// Residue of `a` modulo `m` in [0, |m|).
inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += abs(m);
  return r;
}

inline Integer floor_of(const Rational& r) {
  return floor_div(numerator(r), denominator(r));
}

inline Integer ceil_of(const Rational& r) {
  return -floor_div(-numerator(r), denominator(r));
}

/// Reduces `r` into [0, m) for a positive integer modulus m.
inline Rational mod_rational(const Rational& r, const Integer& m) {
  const Rational mr(m);
  Rational t = r / mr;
  return r - Rational(floor_of(t)) * mr;
}

inline bool is_integral(const Rational& r) { return denominator(r) == 1; }

/// "a" for integers, "a/b" otherwise.
inline std::string to_string(const Integer& a) { return a.str(); }
inline std::string to_string(const Rational& r) { return r.str(); }

/// Parses "a" or "a/b" (optional leading sign); throws ParseError.
inline Rational parse_rational(const std::string& text) {
  try {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(Integer(text));
    Integer num(text.substr(0, slash));
    Integer den(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const ParseError*>(&e) != nullptr) throw;
    throw ParseError("not a rational number: '" + text + "'");
  }
}

inline int sign(const Integer& a) { return a > 0 ? 1 : (a < 0 ? -1 : 0); }
inline int sign(const Rational& a) { return a > 0 ? 1 : (a < 0 ? -1 : 0); }

// ---------------------------------------------------------------------------
// Gaussian rationals
// ---------------------------------------------------------------------------

/// Element re + im*i of Q(i).
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(int v) : re(v) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational r) : re(std::move(r)) {}  // NOLINT
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  [[nodiscard]] bool is_zero() const { return re == 0 && im == 0; }
  [[nodiscard]] bool is_real() const { return im == 0; }
  [[nodiscard]] GaussianRational conj() const { return {re, -im}; }
  [[nodiscard]] Rational norm() const { return re * re + im * im; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    Rational n = b.norm();
    if (n == 0) throw DomainError("division by zero in Q(i)");
    GaussianRational p = a * b.conj();
    return {p.re / n, p.im / n};
  }
  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
  GaussianRational& operator/=(const GaussianRational& o) { return *this = *this / o; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

inline bool is_zero(const Rational& r) { return r == 0; }
inline bool is_zero(const Integer& r) { return r == 0; }
inline bool is_zero(const GaussianRational& r) { return r.is_zero(); }

// ---------------------------------------------------------------------------
// Dense matrix
// ---------------------------------------------------------------------------

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DimensionError("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols = 0) {
    Matrix m(rows.size(), rows.empty() ? cols : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw DimensionError("ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool is_square() const { return rows_ == cols_; }
  [[nodiscard]] bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] std::vector<T> row(std::size_t i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
  }

  [[nodiscard]] std::vector<std::vector<T>> to_rows() const {
    std::vector<std::vector<T>> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += factor * row[src]
  void add_row(std::size_t dst, std::size_t src, const T& factor) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
  }
  /// col[dst] += factor * col[src]
  void add_col(std::size_t dst, std::size_t src, const T& factor) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }
  void negate_col(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
  }

  [[nodiscard]] Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  [[nodiscard]] Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  [[nodiscard]] bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  [[nodiscard]] bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return k3lat::is_zero(x); });
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (k3lat::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix sum dimension mismatch");
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
    return c;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix difference dimension mismatch");
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
    return c;
  }
  friend Matrix operator*(const T& s, const Matrix& a) {
    Matrix c = a;
    for (auto& x : c.data_) x = s * x;
    return c;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (i) os << ", ";
      os << '[';
      for (std::size_t j = 0; j < m.cols_; ++j) {
        if (j) os << ", ";
        os << m(i, j);
      }
      os << ']';
    }
    return os << ']';
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntegerMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;

inline RationalMatrix to_rational(const IntegerMatrix& m) {
  RationalMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

/// Converts to an integer matrix; throws DomainError on a non-integral entry.
inline IntegerMatrix to_integer(const RationalMatrix& m) {
  IntegerMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!is_integral(m(i, j))) throw DomainError("matrix entry is not integral: " + m(i, j).str());
      r(i, j) = numerator(m(i, j));
    }
  return r;
}

inline IntegerMatrix diagonal_matrix(const std::vector<Integer>& d) {
  IntegerMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

/// Block-diagonal assembly.
template <typename T>
Matrix<T> block_diagonal(const std::vector<Matrix<T>>& parts) {
  std::size_t r = 0;
  std::size_t c = 0;
  for (const auto& p : parts) {
    r += p.rows();
    c += p.cols();
  }
  Matrix<T> m(r, c);
  std::size_t r0 = 0;
  std::size_t c0 = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < p.cols(); ++j) m(r0 + i, c0 + j) = p(i, j);
    r0 += p.rows();
    c0 += p.cols();
  }
  return m;
}

/// Rows of `a` followed by rows of `b`.
template <typename T>
Matrix<T> stack_rows(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  if (a.cols() != b.cols()) throw DimensionError("stack_rows: column mismatch");
  Matrix<T> m(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, j) = b(i, j);
  return m;
}

// ---------------------------------------------------------------------------
// Determinants
// ---------------------------------------------------------------------------

/// Fraction-free (Bareiss) determinant; every division is exact.
inline Integer determinant(const IntegerMatrix& m) {
  if (!m.is_square()) throw DimensionError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return Integer(1);
  IntegerMatrix a = m;
  Integer prev = 1;
  int sgn = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return Integer(0);
      a.swap_rows(k, p);
      sgn = -sgn;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sgn * a(n - 1, n - 1);
}

/// Gaussian-elimination determinant over a field (Rational, GaussianRational).
template <typename F>
F field_determinant(Matrix<F> a) {
  if (!a.is_square()) throw DimensionError("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  F det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && is_zero(a(p, k))) ++p;
    if (p == n) return F(0);
    if (p != k) {
      a.swap_rows(p, k);
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (is_zero(a(i, k))) continue;
      F f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

// ---------------------------------------------------------------------------
// Linear systems over a field
// ---------------------------------------------------------------------------

template <typename F>
struct LinearSolution {
  bool consistent = false;
  /// n x k particular solution of a*x = b (valid when consistent).
  Matrix<F> particular;
  /// Rows form a basis of the right nullspace {x : a*x = 0}.
  Matrix<F> nullspace;
};

/// Reduced row echelon form in place; returns the pivot columns.
template <typename F>
std::vector<std::size_t> rref(Matrix<F>& a, std::size_t pivot_cols_limit) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_cols_limit && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && is_zero(a(p, c))) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(p, r);
    F inv = F(1) / a(r, c);
    for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || is_zero(a(i, c))) continue;
      F f = a(i, c);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

/// Solves a*x = b exactly over a field: particular solution plus nullspace.
template <typename F>
LinearSolution<F> solve_linear(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() != b.rows()) throw DimensionError("solve_linear: row mismatch");
  const std::size_t n = a.cols();
  const std::size_t k = b.cols();
  Matrix<F> aug(a.rows(), n + k);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    for (std::size_t j = 0; j < k; ++j) aug(i, n + j) = b(i, j);
  }
  auto pivots = rref(aug, n);
  LinearSolution<F> out;
  out.consistent = true;
  for (std::size_t i = pivots.size(); i < aug.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (!is_zero(aug(i, n + j))) out.consistent = false;
  out.particular = Matrix<F>(n, k);
  if (out.consistent) {
    for (std::size_t r = 0; r < pivots.size(); ++r)
      for (std::size_t j = 0; j < k; ++j) out.particular(pivots[r], j) = aug(r, n + j);
  }
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<F>> null_rows;
  for (std::size_t fcol = 0; fcol < n; ++fcol) {
    if (is_pivot[fcol]) continue;
    std::vector<F> v(n, F(0));
    v[fcol] = F(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -aug(r, fcol);
    null_rows.push_back(std::move(v));
  }
  out.nullspace = Matrix<F>::from_rows(null_rows, n);
  return out;
}

inline LinearSolution<Rational> solve_linear_rational(const RationalMatrix& a, const RationalMatrix& b) {
  return solve_linear<Rational>(a, b);
}

/// Exact inverse over a field; throws DomainError when singular.
template <typename F>
Matrix<F> inverse(const Matrix<F>& a) {
  if (!a.is_square()) throw DimensionError("inverse of a non-square matrix");
  auto sol = solve_linear<F>(a, Matrix<F>::identity(a.rows()));
  if (sol.nullspace.rows() != 0) throw DomainError("matrix is singular");
  return sol.particular;
}

template <typename F>
std::size_t rank(const Matrix<F>& a) {
  Matrix<F> c = a;
  return rref(c, c.cols()).size();
}

// ---------------------------------------------------------------------------
// Smith and Hermite normal forms
// ---------------------------------------------------------------------------

struct SmithForm {
  IntegerMatrix d;  ///< diagonal, d_1 | d_2 | ..., nonnegative
  IntegerMatrix u;  ///< unimodular, rows(m) x rows(m)
  IntegerMatrix v;  ///< unimodular, cols(m) x cols(m); d = u*m*v

  [[nodiscard]] std::vector<Integer> diagonal() const {
    std::vector<Integer> out;
    for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d(i, i));
    return out;
  }
  [[nodiscard]] std::size_t rank() const {
    std::size_t r = 0;
    for (const auto& x : diagonal())
      if (x != 0) ++r;
    return r;
  }
};

/// Smith normal form with transforms. Pivot: smallest nonzero |entry| in the
/// remaining block, ties broken by lowest (row, col) in row-major order.
inline SmithForm smith_normal_form(const IntegerMatrix& m) {
  const std::size_t nr = m.rows();
  const std::size_t nc = m.cols();
  SmithForm s{m, IntegerMatrix::identity(nr), IntegerMatrix::identity(nc)};
  IntegerMatrix& a = s.d;

  auto pick_pivot = [&](std::size_t t) -> std::optional<std::pair<std::size_t, std::size_t>> {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    Integer best_abs;
    for (std::size_t i = t; i < nr; ++i)
      for (std::size_t j = t; j < nc; ++j) {
        if (a(i, j) == 0) continue;
        Integer v = abs(a(i, j));
        if (!best || v < best_abs) {
          best = {i, j};
          best_abs = v;
        }
      }
    return best;
  };

  for (std::size_t t = 0; t < std::min(nr, nc); ++t) {
    while (true) {
      auto piv = pick_pivot(t);
      if (!piv) return s;
      a.swap_rows(t, piv->first);
      s.u.swap_rows(t, piv->first);
      a.swap_cols(t, piv->second);
      s.v.swap_cols(t, piv->second);

      bool dirty = false;
      for (std::size_t i = t + 1; i < nr; ++i) {
        if (a(i, t) == 0) continue;
        Integer q = floor_div(a(i, t), a(t, t));
        a.add_row(i, t, -q);
        s.u.add_row(i, t, -q);
        if (a(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < nc; ++j) {
        if (a(t, j) == 0) continue;
        Integer q = floor_div(a(t, j), a(t, t));
        a.add_col(j, t, -q);
        s.v.add_col(j, t, -q);
        if (a(t, j) != 0) dirty = true;
      }
      if (dirty) continue;

      // Row and column are clear; enforce divisibility of the remaining block.
      bool divisible = true;
      for (std::size_t i = t + 1; i < nr && divisible; ++i)
        for (std::size_t j = t + 1; j < nc; ++j)
          if (a(i, j) % a(t, t) != 0) {
            a.add_row(t, i, Integer(1));
            s.u.add_row(t, i, Integer(1));
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (a(t, t) < 0) {
      a.negate_row(t);
      s.u.negate_row(t);
    }
  }
  return s;
}

/// Row-style Hermite normal form: the nonzero rows of an echelon basis of the
/// row lattice, pivots positive, entries above each pivot reduced into [0, pivot).
inline IntegerMatrix hermite_normal_form(const IntegerMatrix& m) {
  IntegerMatrix a = m;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    while (true) {
      std::optional<std::size_t> best;
      for (std::size_t i = r; i < a.rows(); ++i)
        if (a(i, c) != 0 && (!best || abs(a(i, c)) < abs(a(*best, c)))) best = i;
      if (!best) break;
      a.swap_rows(r, *best);
      bool clear = true;
      for (std::size_t i = r + 1; i < a.rows(); ++i) {
        if (a(i, c) == 0) continue;
        a.add_row(i, r, -floor_div(a(i, c), a(r, c)));
        if (a(i, c) != 0) clear = false;
      }
      if (clear) break;
    }
    if (r >= a.rows() || a(r, c) == 0) continue;
    if (a(r, c) < 0) a.negate_row(r);
    for (std::size_t i = 0; i < r; ++i) a.add_row(i, r, -floor_div(a(i, c), a(r, c)));
    ++r;
  }
  return a.block(0, 0, r, a.cols());
}

/// Inverse of a unimodular integer matrix.
inline IntegerMatrix unimodular_inverse(const IntegerMatrix& m) {
  return to_integer(inverse(to_rational(m)));
}

/// Rows form a basis of {x in Z^n : a * x = 0} (x as a column vector).
/// The result is saturated and in Hermite normal form.
inline IntegerMatrix integer_kernel(const IntegerMatrix& a) {
  const std::size_t n = a.cols();
  if (a.rows() == 0) return IntegerMatrix::identity(n);
  SmithForm s = smith_normal_form(a);
  const std::size_t r = s.rank();
  IntegerMatrix k(n - r, n);
  for (std::size_t i = r; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k(i - r, j) = s.v(j, i);
  return hermite_normal_form(k);
}

/// An integer column vector x with a * x = w, if one exists.
inline std::optional<std::vector<Integer>> solve_integer(const IntegerMatrix& a, const std::vector<Integer>& w) {
  if (w.size() != a.rows()) throw DimensionError("solve_integer: size mismatch");
  SmithForm s = smith_normal_form(a);
  std::vector<Integer> uw(a.rows(), Integer(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.rows(); ++j) uw[i] += s.u(i, j) * w[j];
  std::vector<Integer> y(a.cols(), Integer(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const Integer di = i < std::min(a.rows(), a.cols()) ? s.d(i, i) : Integer(0);
    if (di == 0) {
      if (uw[i] != 0) return std::nullopt;
    } else {
      if (uw[i] % di != 0) return std::nullopt;
      y[i] = uw[i] / di;
    }
  }
  std::vector<Integer> x(a.cols(), Integer(0));
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) x[i] += s.v(i, j) * y[j];
  return x;
}

/// Rank of an integer matrix reduced modulo a prime p.
inline std::size_t rank_mod_p(const IntegerMatrix& m, std::int64_t p) {
  std::vector<std::vector<std::int64_t>> a(m.rows(), std::vector<std::int64_t>(m.cols()));
  const Integer pp(p);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = mod_floor(m(i, j), pp).convert_to<std::int64_t>();
  auto inv = [p](std::int64_t x) {
    std::int64_t r = 1;
    std::int64_t e = p - 2;
    std::int64_t b = x % p;
    while (e > 0) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && a[piv][c] == 0) ++piv;
    if (piv == m.rows()) continue;
    std::swap(a[piv], a[r]);
    const std::int64_t iv = inv(a[r][c]);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      const std::int64_t f = a[i][c] * iv % p;
      for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = ((a[i][j] - f * a[r][j]) % p + p) % p;
    }
    ++r;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Signature
// ---------------------------------------------------------------------------

struct Inertia {
  std::size_t positive = 0;
  std::size_t zero = 0;
  std::size_t negative = 0;

  [[nodiscard]] std::size_t rank() const { return positive + zero + negative; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Inertia& s) {
  return os << '(' << s.positive << ',' << s.zero << ',' << s.negative << ')';
}

/// Inertia indices by exact congruence reduction over Q. When every remaining
/// diagonal entry vanishes, e_i <- e_i + e_j produces the pivot 2*m_ij.
inline Inertia signature(const IntegerMatrix& m) {
  if (!m.is_square()) throw DimensionError("signature of a non-square matrix");
  if (!m.is_symmetric()) throw ShapeError("signature of a non-symmetric matrix");
  RationalMatrix a = to_rational(m);
  std::vector<std::size_t> alive(a.rows());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
  Inertia s;
  while (!alive.empty()) {
    std::optional<std::size_t> piv;
    for (auto i : alive)
      if (a(i, i) != 0) {
        piv = i;
        break;
      }
    if (!piv) {
      std::optional<std::pair<std::size_t, std::size_t>> off;
      for (auto i : alive) {
        for (auto j : alive)
          if (i != j && a(i, j) != 0) {
            off = {i, j};
            break;
          }
        if (off) break;
      }
      if (!off) {
        s.zero += alive.size();
        break;
      }
      auto [i, j] = *off;
      a.add_row(i, j, Rational(1));
      a.add_col(i, j, Rational(1));
      piv = i;
    }
    const std::size_t p = *piv;
    const Rational d = a(p, p);
    (d > 0 ? s.positive : s.negative) += 1;
    for (auto i : alive) {
      if (i == p || a(i, p) == 0) continue;
      const Rational f = a(i, p) / d;
      for (auto j : alive) a(i, j) -= f * a(p, j);
    }
    for (auto i : alive) {
      a(i, p) = 0;
      a(p, i) = 0;
    }
    alive.erase(std::find(alive.begin(), alive.end(), p));
  }
  return s;
}

}  // namespace k3lat
