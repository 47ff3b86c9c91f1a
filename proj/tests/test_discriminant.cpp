#include <gtest/gtest.h>

#include <random>

#include "k3lat/discriminant.hpp"
#include "oracles.hpp"

using namespace k3lat;

TEST(Discriminant, OrderEqualsAbsoluteDeterminantOnRandomLattices) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 6;
    IntegerMatrix g = oracle::random_even_gram(n, rng);
    const Integer det = oracle::cofactor_determinant(g);
    Discriminant d = discr(Lattice(g));
    EXPECT_EQ(Integer(d.form().order()), abs(det)) << g;
    // Every lift lies in the dual lattice.
    const RationalMatrix gl = to_rational(g) * d.lifts().transpose();
    for (std::size_t i = 0; i < gl.rows(); ++i)
      for (std::size_t j = 0; j < gl.cols(); ++j) EXPECT_TRUE(is_integral(gl(i, j)));
  }
}

TEST(Discriminant, A2AndE6Forms) {
  auto a2 = discr(parse_lattice("A2")).form();
  ASSERT_EQ(a2.generator_count(), 1u);
  EXPECT_EQ(a2.orders()[0], 3);
  EXPECT_EQ(a2.q_values()[0], Rational(4, 3));
  auto e6 = discr(parse_lattice("E6")).form();
  ASSERT_EQ(e6.order(), 3u);
  EXPECT_EQ(e6.q(e6.generator(0)), Rational(2, 3));
  EXPECT_FALSE(fqf_isomorphic(a2, e6).isomorphic);
  EXPECT_TRUE(fqf_isomorphic(discr(rescale(parse_lattice("A2"), -1)).form(), e6).isomorphic);
  EXPECT_EQ(discr(parse_lattice("E8")).form().order(), 1u);
}

TEST(Discriminant, EightA2UsesBlockGenerators) {
  auto f = discr(parse_lattice("8A2")).form();
  ASSERT_EQ(f.generator_count(), 8u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(f.orders()[i], 3);
    EXPECT_EQ(f.q_values()[i], Rational(4, 3));
  }
  EXPECT_EQ(ell_p(f, 3), 8u);
  EXPECT_EQ(ell_p(f, 2), 0u);
}

TEST(Discriminant, IsotropyIsSupportDivisibleByThree) {
  for (std::size_t n = 1; n <= 8; ++n) {
    auto f = discr(repeat(parse_lattice("A2"), n)).form();
    for (std::uint64_t i = 0; i < f.order(); ++i) {
      auto e = f.element_at(i);
      EXPECT_EQ(f.q(e) == 0, support(e).size() % 3 == 0);
    }
  }
}

TEST(Discriminant, OrbitCountsForThreeA2) {
  auto f = discr(parse_lattice("3A2")).form();
  auto o3 = isotropic_subgroups_up_to_signed_permutation(f, 3);
  ASSERT_EQ(o3.size(), 1u);
  EXPECT_EQ(o3[0].orbit_size, 4u);
  EXPECT_TRUE(isotropic_subgroups_up_to_signed_permutation(f, 9).empty());
}

TEST(Discriminant, OrbitCountsForEightA2) {
  auto f = discr(parse_lattice("8A2")).form();
  auto six = [](std::size_t s) { return s == 6; };
  EXPECT_EQ(isotropic_subgroups_up_to_signed_permutation(f, 3).size(), 2u);
  EXPECT_EQ(isotropic_subgroups_up_to_signed_permutation(f, 3, six).size(), 1u);
  EXPECT_EQ(isotropic_subgroups_up_to_signed_permutation(f, 9, six).size(), 1u);
  EXPECT_TRUE(isotropic_subgroups_up_to_signed_permutation(f, 27, six).empty());
}

TEST(Discriminant, OrbitSizesSumToSubgroupCount) {
  // Order-3 isotropic subgroups of 4<-2/3> are {0, x, -x} for isotropic x != 0:
  // support 3 elements, 4 * 2^3 of them, so 16 subgroups.
  auto f = discr(parse_lattice("4A2")).form();
  std::size_t isotropic_nonzero = isotropic_elements(f).size() - 1;
  std::size_t total = 0;
  for (const auto& o : isotropic_subgroups_up_to_signed_permutation(f, 3)) total += o.orbit_size;
  EXPECT_EQ(total, isotropic_nonzero / 2);
  EXPECT_EQ(total, 16u);
}

TEST(Discriminant, KernelValidation) {
  auto f = discr(parse_lattice("3A2")).form();
  auto k = make_kernel(f, {DiscriminantElement{{1, 1, 1}}});
  EXPECT_EQ(k.order, 3u);
  EXPECT_THROW(make_kernel(f, {DiscriminantElement{{1, 1, 0}}}), DomainError);
  EXPECT_EQ(subgroup_elements(f, {DiscriminantElement{{1, 0, 0}}, DiscriminantElement{{0, 1, 0}}}).size(), 9u);
}

TEST(Discriminant, ResourceBoundIsEnforced) {
  EnumerationLimits tight;
  tight.max_elements = 100;
  EXPECT_THROW(isotropic_elements(discr(parse_lattice("8A2")).form(), tight), ResourceError);
}

TEST(Discriminant, JsonRoundTrip) {
  auto f = discr(parse_lattice("A2+D4+U(2)")).form();
  auto g = fqf_from_json(to_json(f));
  EXPECT_EQ(g.orders(), f.orders());
  EXPECT_EQ(g.q_values(), f.q_values());
  EXPECT_EQ(g.b_values(), f.b_values());
  EXPECT_THROW(fqf_from_json(nlohmann::json::parse(R"({"orders": [3]})")), ParseError);
}

TEST(Discriminant, IsomorphismOfReorderedForms) {
  auto a = discr(parse_lattice("A2+D4")).form();
  auto b = discr(parse_lattice("D4+A2")).form();
  EXPECT_TRUE(fqf_isomorphic(a, b).isomorphic);
  EXPECT_FALSE(fqf_isomorphic(a, discr(parse_lattice("A2+U(2)")).form()).isomorphic);
}
