#include <gtest/gtest.h>

#include "k3lat/extensions.hpp"
#include "oracles.hpp"

using namespace k3lat;

namespace {

IntegerMatrix negated(const IntegerMatrix& g) { return Integer(-1) * g; }

}  // namespace

TEST(Extensions, RootCountsMatchBoxOracle) {
  struct Case {
    const char* name;
    std::size_t count;
  } cases[] = {{"A2", 6}, {"D4", 24}, {"E6", 72}, {"E7", 126}, {"E8", 240}};
  for (const auto& c : cases) {
    Lattice l = parse_lattice(c.name);
    EXPECT_EQ(roots(l).size(), c.count) << c.name;
    EXPECT_EQ(oracle::box_count_norm_two(negated(l.gram())), c.count) << c.name;
  }
}

TEST(Extensions, RootsComeInSignedPairsAndHaveNormMinusTwo) {
  Lattice l = parse_lattice("D4+A2");
  auto r = roots(l);
  ASSERT_EQ(r.size() % 2, 0u);
  for (const auto& x : r) {
    EXPECT_EQ(l.inner(x, x), -2);
    std::vector<Integer> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = -x[i];
    EXPECT_NE(std::find(r.begin(), r.end(), y), r.end());
  }
}

TEST(Extensions, RootsRequireNegativeDefinite) {
  EXPECT_THROW(roots(parse_lattice("U")), DomainError);
  EnumerationLimits tight;
  tight.max_root_rank = 4;
  EXPECT_THROW(roots(parse_lattice("E6"), tight), ResourceError);
}

TEST(Extensions, VectorsOfNormAgreeWithBoxOracleOnRandomForms) {
  std::mt19937_64 rng(77);
  int checked = 0;
  while (checked < 30) {
    const std::size_t n = 2 + checked % 3;
    IntegerMatrix g = oracle::random_even_gram(n, rng);
    auto sig = signature(g);
    if (sig.positive != n) continue;
    EXPECT_EQ(vectors_of_norm(g, 2).size(), oracle::box_count_norm_two(g)) << g;
    ++checked;
  }
}

TEST(Extensions, DeterminantLawExhaustiveOverThreeA2) {
  const Lattice base = parse_lattice("3A2");
  const Discriminant d = discr(base);
  std::size_t kernels = 0;
  for (const auto& x : isotropic_elements(d.form())) {
    auto k = make_kernel(d.form(), {x});
    Overlattice o = overlattice(d, k);
    const Integer det = oracle::cofactor_determinant(o.result.gram());
    EXPECT_EQ(abs(det) * Integer(o.index) * Integer(o.index), 27);
    EXPECT_TRUE(o.determinant_law_holds);
    ASSERT_TRUE(o.discriminant_matches.has_value());
    EXPECT_TRUE(*o.discriminant_matches);
    EXPECT_TRUE(o.result.is_even());
    ++kernels;
  }
  EXPECT_EQ(kernels, 9u);  // zero plus 8 isotropic elements of support 3
}

TEST(Extensions, ThreeA2GlueIsE6AndNotQuasiPrimitive) {
  const Lattice base = parse_lattice("3A2");
  auto k = make_kernel(discr(base).form(), {DiscriminantElement{{1, 1, 1}}});
  Overlattice o = overlattice(base, k);
  EXPECT_EQ(o.result.determinant(), 3);
  EXPECT_EQ(o.result.signature(), (Inertia{0, 0, 6}));
  auto qp = is_quasi_primitive(base, o);
  EXPECT_EQ(qp.base_roots, 18u);
  EXPECT_EQ(qp.extension_roots, 72u);
  EXPECT_FALSE(qp.quasi_primitive);
  ASSERT_TRUE(qp.offending_root.has_value());
}

TEST(Extensions, EightA2SupportSixKernelIsQuasiPrimitive) {
  const Lattice base = parse_lattice("8A2");
  auto f = discr(base).form();
  auto k = make_kernel(f, {DiscriminantElement{{1, 1, 1, 1, 1, 1, 0, 0}}});
  Overlattice o = overlattice(base, k);
  EXPECT_EQ(abs(o.result.determinant()), 729);
  EXPECT_TRUE(is_quasi_primitive(base, o).quasi_primitive);
  auto bad = make_kernel(f, {DiscriminantElement{{1, 1, 1, 0, 0, 0, 0, 0}}});
  EXPECT_FALSE(is_quasi_primitive(base, overlattice(base, bad)).quasi_primitive);
}

TEST(Extensions, GlueCheckInUnimodularLattices) {
  const Lattice e8 = parse_lattice("E8");
  auto emb = find_root_embedding(parse_lattice("A2"), e8);
  ASSERT_TRUE(emb.has_value());
  SublatticeEmbedding s(e8, *emb);
  EXPECT_EQ(s.induced().gram(), parse_lattice("A2").gram());
  ASSERT_TRUE(is_primitive(s));
  auto g = glue_complement_check(e8, s);
  EXPECT_TRUE(g.ok());
  EXPECT_EQ(g.complement.rank(), 6u);
  EXPECT_EQ(abs(g.complement.induced().determinant()), 3);

  const Lattice u = parse_lattice("U");
  EXPECT_THROW(glue_complement_check(u, SublatticeEmbedding(u, IntegerMatrix{{1, 0}})), DomainError);
  EXPECT_THROW(glue_complement_check(parse_lattice("A2"), SublatticeEmbedding(parse_lattice("A2"), IntegerMatrix{{1, 0}})),
               DomainError);
}

TEST(Extensions, EigenlatticesOfSwap) {
  const Lattice u = parse_lattice("U");
  InvolutionSpec inv{u, IntegerMatrix{{0, 1}, {1, 0}}};
  ASSERT_TRUE(inv.is_valid());
  auto e = eigenlattices(inv);
  EXPECT_EQ(e.plus.induced().gram(), (IntegerMatrix{{2}}));
  EXPECT_EQ(e.minus.induced().gram(), (IntegerMatrix{{-2}}));
  EXPECT_FALSE(eigenlattices_span_mod_p(e, 2));
  EXPECT_TRUE(eigenlattices_span_mod_p(e, 3));
  EXPECT_THROW(eigenlattices(InvolutionSpec{u, IntegerMatrix{{1, 1}, {0, 1}}}), DomainError);
}

TEST(Extensions, FourA2EmbedsInE8) {
  auto emb = find_root_embedding(parse_lattice("4A2"), parse_lattice("E8"));
  ASSERT_TRUE(emb.has_value());
  SublatticeEmbedding s(parse_lattice("E8"), *emb);
  EXPECT_EQ(s.induced().gram(), parse_lattice("4A2").gram());
  EXPECT_EQ(hull_index(s), 9);
  EXPECT_FALSE(find_root_embedding(parse_lattice("A3"), parse_lattice("3A2")).has_value());
}
