#include <gtest/gtest.h>

#include <random>

#include "k3lat/exact.hpp"
#include "oracles.hpp"

using namespace k3lat;

namespace {

IntegerMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, int spread = 9) {
  IntegerMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = static_cast<long>(rng() % spread) - spread / 2;
  return m;
}

}  // namespace

TEST(Exact, DeterminantMatchesCofactorExpansion) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 6;
    IntegerMatrix m = random_matrix(n, n, rng);
    EXPECT_EQ(determinant(m), oracle::cofactor_determinant(m));
  }
}

TEST(Exact, DeterminantOfEmptyIsOne) { EXPECT_EQ(determinant(IntegerMatrix(0, 0)), 1); }

TEST(Exact, SmithFormIdentities) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    IntegerMatrix m = random_matrix(r, c, rng);
    SmithForm s = smith_normal_form(m);
    EXPECT_EQ(s.u * m * s.v, s.d);
    EXPECT_EQ(abs(determinant(s.u)), 1);
    EXPECT_EQ(abs(determinant(s.v)), 1);
    auto diag = s.diagonal();
    for (std::size_t i = 0; i < s.d.rows(); ++i) {
      for (std::size_t j = 0; j < s.d.cols(); ++j) {
        if (i != j) {
          EXPECT_EQ(s.d(i, j), 0);
        }
      }
    }
    for (std::size_t i = 0; i < diag.size(); ++i) {
      EXPECT_GE(diag[i], 0);
      if (i + 1 < diag.size() && diag[i] != 0) {
        EXPECT_EQ(diag[i + 1] % diag[i], 0);
      }
      if (diag[i] == 0 && i + 1 < diag.size()) {
        EXPECT_EQ(diag[i + 1], 0);
      }
    }
    if (r == c) {
      Integer prod = 1;
      for (auto& x : diag) prod *= x;
      EXPECT_EQ(prod, abs(oracle::cofactor_determinant(m)));
    }
  }
}

TEST(Exact, HermiteFormIsCanonicalForRowSpace) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    IntegerMatrix m = random_matrix(3, 4, rng);
    IntegerMatrix u = IntegerMatrix::identity(3);
    u(0, 1) = static_cast<long>(rng() % 5) - 2;
    u(2, 0) = static_cast<long>(rng() % 5) - 2;
    EXPECT_EQ(hermite_normal_form(m), hermite_normal_form(u * m));
  }
}

TEST(Exact, IntegerKernelIsSaturatedAndAnnihilated) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    IntegerMatrix a = random_matrix(2, 5, rng);
    IntegerMatrix k = integer_kernel(a);
    const std::size_t expect = 5 - rank(to_rational(a));
    ASSERT_EQ(k.rows(), expect);
    EXPECT_TRUE((a * k.transpose()).is_zero());
    if (k.rows() > 0) {
      auto d = smith_normal_form(k).diagonal();
      for (auto& x : d) EXPECT_EQ(x, 1);
    }
  }
}

TEST(Exact, SolveIntegerFindsSolutionsAndRejectsNonIntegral) {
  IntegerMatrix a{{2, 0}, {0, 3}};
  auto x = solve_integer(a, {Integer(4), Integer(9)});
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ((*x)[0], 2);
  EXPECT_EQ((*x)[1], 3);
  EXPECT_FALSE(solve_integer(a, {Integer(1), Integer(0)}).has_value());
}

TEST(Exact, RankModP) {
  IntegerMatrix m{{3, 0}, {0, 1}};
  EXPECT_EQ(rank_mod_p(m, 3), 1u);
  EXPECT_EQ(rank_mod_p(m, 2), 2u);
}

TEST(Exact, SignatureMatchesJacobiOracle) {
  std::mt19937_64 rng(15);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 6;
    IntegerMatrix m = oracle::random_even_gram(n, rng);
    auto j = oracle::jacobi_signature(m);
    if (!j) continue;
    Inertia s = signature(m);
    EXPECT_EQ(s.positive, j->first);
    EXPECT_EQ(s.negative, j->second);
    EXPECT_EQ(s.zero, 0u);
    ++compared;
  }
  EXPECT_GT(compared, 200);
}

TEST(Exact, SignatureOfZeroDiagonalForms) {
  EXPECT_EQ(signature(IntegerMatrix{{0, 1}, {1, 0}}), (Inertia{1, 0, 1}));
  EXPECT_EQ(signature(IntegerMatrix{{0, 0}, {0, 0}}), (Inertia{0, 2, 0}));
}

TEST(Exact, ParseRational) {
  EXPECT_EQ(parse_rational("-3/6"), Rational(-1, 2));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
}

TEST(Exact, RaggedLiteralIsRejected) {
  EXPECT_THROW((IntegerMatrix{{1, 2}, {3}}), DimensionError);
}
