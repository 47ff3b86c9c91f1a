#pragma once

// Seeded inputs shared by the unit tests and the acceptance runner.

#include <optional>
#include <random>
#include <vector>

#include "k3lat/wronskian.hpp"

namespace corpus {

using k3lat::GaussianRational;
using k3lat::Polynomial;
using k3lat::Rational;
using k3lat::RationalMap;

inline long small(std::mt19937_64& rng, long spread = 3) {
  return static_cast<long>(rng() % static_cast<std::uint64_t>(2 * spread + 1)) - spread;
}

inline Polynomial random_real(std::mt19937_64& rng, std::size_t degree) {
  std::vector<GaussianRational> c(degree + 1);
  for (auto& x : c) x = GaussianRational(Rational(small(rng)));
  while (c.back().is_zero()) c.back() = GaussianRational(Rational(small(rng)));
  return Polynomial(std::move(c));
}

inline Polynomial random_gaussian(std::mt19937_64& rng, std::size_t degree) {
  std::vector<GaussianRational> c(degree + 1);
  for (auto& x : c) x = GaussianRational(Rational(small(rng)), Rational(small(rng)));
  while (c.back().is_zero()) c.back() = GaussianRational(Rational(small(rng)), Rational(small(rng)));
  return Polynomial(std::move(c));
}

/// Real map of exact degree d with deg p = deg q = d and p, q coprime.
inline RationalMap random_real_map(std::mt19937_64& rng, std::size_t d) {
  for (;;) {
    RationalMap f(random_real(rng, d), random_real(rng, d));
    if (f.numerator().degree() == static_cast<long>(d) && f.denominator().degree() == static_cast<long>(d)) return f;
  }
}

/// Gaussian-rational maps of degree 1..4: even entries are a Moebius
/// transformation applied to a real map, odd entries have random Gaussian
/// coefficients.
inline std::vector<RationalMap> realifiability_corpus(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<RationalMap> out;
  while (out.size() < count) {
    const std::size_t d = 1 + rng() % 4;
    std::optional<RationalMap> f;
    if (out.size() % 2 == 0) {
      const Polynomial p = random_real(rng, d);
      const Polynomial q = (rng() % 3 == 0) ? Polynomial(1) : random_real(rng, rng() % (d + 1));
      const GaussianRational a(Rational(small(rng)), Rational(small(rng)));
      const GaussianRational b(Rational(small(rng)), Rational(small(rng)));
      const GaussianRational c(Rational(small(rng)), Rational(small(rng)));
      const GaussianRational e(Rational(small(rng)), Rational(small(rng)));
      if ((a * e - b * c).is_zero()) continue;
      f.emplace(a * p + b * q, c * p + e * q);
    } else {
      const Polynomial q = (rng() % 3 == 0) ? Polynomial(1) : random_gaussian(rng, rng() % (d + 1));
      f.emplace(random_gaussian(rng, d), q);
    }
    if (f->is_constant()) continue;
    out.push_back(*f);
  }
  return out;
}

/// Square-free real polynomials of degree 1..4: random ones plus products of
/// distinct linear factors (all roots real) and of a linear and a quadratic.
inline std::vector<Polynomial> sturm_corpus(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<Polynomial> out;
  while (out.size() < count) {
    const std::size_t d = 1 + rng() % 4;
    Polynomial p;
    switch (out.size() % 3) {
      case 0: p = random_real(rng, d); break;
      case 1: {
        p = Polynomial(1);
        for (std::size_t k = 0; k < d; ++k)
          p *= Polynomial(std::vector<GaussianRational>{GaussianRational(Rational(small(rng, 6), 1 + rng() % 3)), 1});
        break;
      }
      default: {
        p = random_real(rng, 2) * Polynomial(std::vector<GaussianRational>{GaussianRational(Rational(small(rng))), 1});
        if (d % 2 == 0) p *= random_real(rng, 1);
        break;
      }
    }
    if (p.degree() < 1 || k3lat::squarefree_part(p).degree() != p.degree()) continue;
    out.push_back(p);
  }
  return out;
}

}  // namespace corpus
