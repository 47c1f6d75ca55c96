#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace qgeom;
using fx::v2;

namespace {

GraphPtr segment() { return make_graph(Graph({PolyPath({v2(0, 0), v2(1, 0.5)})})); }

GraphPtr two_edges() {
  return make_graph(Graph({PolyPath({v2(0, 0), v2(1, 0)}), PolyPath({v2(1, 0), v2(1, 1)})}));
}

Factor spin(int twice, int m, int n) { return {Irrep::su2_twice_spin(twice), m, n}; }

}  // namespace

TEST(CylFun, EvaluatesNormalizedMatrixElements) {
  Rng rng(1);
  const GraphPtr g = two_edges();
  const CylFun f = CylFun::state(g, Group::SU2, {spin(1, 0, 1), spin(2, 2, 0)}, cplx(0.5, -1));
  for (int k = 0; k < 10; ++k) {
    const RestrictedConnection A = RestrictedConnection::haar(g, Group::SU2, rng);
    const cplx expect = cplx(0.5, -1) * std::sqrt(2.0) * Irrep::su2_twice_spin(1)(A.at(0))(0, 1) * std::sqrt(3.0) *
                        Irrep::su2_twice_spin(2)(A.at(1))(2, 0);
    EXPECT_LE(std::abs(evaluate(f, A) - expect), 1e-13);
  }
}

TEST(CylFun, RejectsMalformedMonomials) {
  const GraphPtr g = two_edges();
  CylFun f(g, Group::SU2);
  EXPECT_THROW(f.add(1.0, {spin(1, 0, 0)}), ValidationError);
  EXPECT_THROW(f.add(1.0, {spin(1, 0, 2), spin(1, 0, 0)}), ValidationError);
  EXPECT_THROW(f.add(1.0, {Factor{Irrep::u1(1), 0, 0}, spin(1, 0, 0)}), ValidationError);
  EXPECT_THROW(f.add(std::nan(""), {spin(1, 0, 0), spin(1, 0, 0)}), ValidationError);
  EXPECT_THROW(CylFun(nullptr, Group::SU2), ValidationError);
}

TEST(CylFun, CanonicalAndExpandedPreserveValues) {
  Rng rng(2);
  for (int k = 0; k < 30; ++k) {
    const GraphPtr g = fx::random_graph(rng, 2);
    CylFun f = fx::random_cylfun(g, Group::SU2, rng, 4);
    f = f + fx::random_cylfun(g, Group::SU2, rng, 2) * cplx(0, 2);
    // a product of sums on every edge
    std::vector<EdgeSum> sums;
    for (int e = 0; e < g->size(); ++e) {
      sums.push_back({{cplx(0.3, 0.1), fx::random_factor(Group::SU2, rng, 2)},
                      {cplx(-1, 0.4), fx::random_factor(Group::SU2, rng, 2)}});
    }
    f.add_product(0.7, sums);
    const CylFun c = f.canonical(), x = f.expanded();
    for (const auto& mo : x.monomials()) EXPECT_TRUE(mo.pure());
    for (int s = 0; s < 3; ++s) {
      const RestrictedConnection A = RestrictedConnection::haar(g, Group::SU2, rng);
      EXPECT_LE(std::abs(evaluate(c, A) - evaluate(f, A)), 1e-12);
      EXPECT_LE(std::abs(evaluate(x, A) - evaluate(f, A)), 1e-12);
    }
    EXPECT_NEAR(stable_norm(f), std::sqrt(norm_sq(f)), 1e-12);
    EXPECT_NEAR(stable_norm(x), std::sqrt(norm_sq(f)), 1e-12);
  }
}

TEST(CylFun, StableNormSeesCancellation) {
  const GraphPtr g = segment();
  CylFun f(g, Group::SU2);
  f.add_product(1.0, {{{1.0, spin(1, 0, 0)}, {1e-9, spin(1, 1, 1)}}});
  f.add(-1.0, {spin(1, 0, 0)});
  EXPECT_NEAR(stable_norm(f), 1e-9, 1e-18);
}

TEST(InnerProduct, ExactMatchesMonteCarlo) {
  Rng rng(3);
  for (int k = 0; k < 8; ++k) {
    const Group grp = k % 2 ? Group::U1 : Group::SU2;
    const GraphPtr g = fx::random_graph(rng, 2);
    const CylFun a = fx::random_cylfun(g, grp, rng, 3, 2);
    const CylFun b = k % 4 == 0 ? a : fx::random_cylfun(g, grp, rng, 3, 2);
    const McEstimate mc = inner_product_mc(a, b, 40000, rng);
    const cplx exact = inner_product_exact(a, b);
    EXPECT_LE(std::abs(mc.value - exact), 4.5 * mc.std_error + 1e-12) << k;
  }
}

TEST(InnerProduct, SchurOrthogonalityOnOneEdge) {
  const GraphPtr g = segment();
  std::vector<Factor> fs;
  for (int l = 0; l <= 3; ++l) {
    for (int m = 0; m <= l; ++m) {
      for (int n = 0; n <= l; ++n) fs.push_back(spin(l, m, n));
    }
  }
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = 0; j < fs.size(); ++j) {
      const cplx v = inner_product_exact(CylFun::state(g, Group::SU2, {fs[i]}), CylFun::state(g, Group::SU2, {fs[j]}));
      EXPECT_EQ(v, cplx(i == j ? 1.0 : 0.0, 0.0));
    }
  }
}

TEST(InnerProduct, ConjugateLinearInFirstArgument) {
  Rng rng(4);
  const GraphPtr g = fx::random_graph(rng, 2);
  const CylFun a = fx::random_cylfun(g, Group::SU2, rng), b = fx::random_cylfun(g, Group::SU2, rng);
  const cplx z(0.3, -2.0);
  EXPECT_LE(std::abs(inner_product(a * z, b) - std::conj(z) * inner_product(a, b)), 1e-12);
  EXPECT_LE(std::abs(inner_product(a, b * z) - z * inner_product(a, b)), 1e-12);
  EXPECT_LE(std::abs(inner_product(b, a) - std::conj(inner_product(a, b))), 1e-12);
}

TEST(Reexpress, ReversedFactorEvaluatesOnInverse) {
  Rng rng(5);
  for (int l = 1; l <= 3; ++l) {
    for (int m = 0; m <= l; ++m) {
      for (int n = 0; n <= l; ++n) {
        const Factor f = spin(l, m, n);
        const GroupElement h = haar_sample(Group::SU2, rng);
        cplx s = 0.0;
        for (const auto& t : reversed_factor(f)) s += t.c * factor_value(t.f, h);
        EXPECT_LE(std::abs(s - factor_value(f, h.inverse())), 1e-13);
      }
    }
  }
  const Factor u{Irrep::u1(3), 0, 0};
  const GroupElement h = haar_sample(Group::U1, rng);
  const auto r = reversed_factor(u);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_LE(std::abs(factor_value(r[0].f, h) - factor_value(u, h.inverse())), 1e-14);
}

TEST(Reexpress, SandwichedFactor) {
  Rng rng(6);
  for (int l = 1; l <= 2; ++l) {
    const Factor f = spin(l, 0, l);
    const GroupElement L = haar_sample(Group::SU2, rng), R = haar_sample(Group::SU2, rng), h = haar_sample(Group::SU2, rng);
    cplx s = 0.0;
    for (const auto& t : sandwiched_factor(f, L, R)) s += t.c * factor_value(t.f, h);
    EXPECT_LE(std::abs(s - factor_value(f, L * h * R)), 1e-13);
  }
}

TEST(Reexpress, ReversedEdgeInRefinedGraph) {
  Rng rng(7);
  const GraphPtr g = segment();
  const GraphPtr flipped = make_graph(Graph({g->edges[0].reversed()}));
  for (int k = 0; k < 10; ++k) {
    const CylFun f = fx::random_cylfun(g, Group::SU2, rng, 3, 3);
    const CylFun r = reexpress(f, flipped, {Word{{0, true}}});
    const RestrictedConnection A = RestrictedConnection::haar(flipped, Group::SU2, rng);
    const RestrictedConnection B{g, Group::SU2, {A.at(0).inverse()}};
    EXPECT_LE(std::abs(evaluate(r, A) - evaluate(f, B)), 1e-12);
    EXPECT_NEAR(stable_norm(r), stable_norm(f), 1e-12);
  }
}

TEST(Subdivision, EvaluationAndNorm) {
  Rng rng(8);
  for (int k = 0; k < 30; ++k) {
    const Group grp = k % 3 ? Group::SU2 : Group::U1;
    const GraphPtr g = fx::random_graph(rng, 2);
    const CylFun f = fx::random_cylfun(g, grp, rng);
    const int e = static_cast<int>(rng() % static_cast<unsigned>(g->size()));
    const CylFun s = subdivide_edge(f, e, {0.3, 0.7});
    ASSERT_EQ(s.graph()->size(), g->size() + 2);
    const RestrictedConnection A = RestrictedConnection::haar(s.graph(), grp, rng);
    std::vector<GroupElement> coarse;
    for (int q = 0; q < g->size(); ++q) {
      if (q < e) coarse.push_back(A.at(q));
      if (q == e) coarse.push_back(A.at(e) * A.at(e + 1) * A.at(e + 2));
      if (q > e) coarse.push_back(A.at(q + 2));
    }
    EXPECT_LE(std::abs(evaluate(s, A) - evaluate(f, {g, grp, coarse})), 1e-12);
    EXPECT_NEAR(stable_norm(s), stable_norm(f), 1e-12);
  }
}

TEST(Subdivision, RejectsBadBreakpoints) {
  const CylFun f = CylFun::state(segment(), Group::SU2, {spin(1, 0, 0)});
  EXPECT_THROW(subdivide_edge(f, 0, {0.5, 0.4}), ValidationError);
  EXPECT_THROW(subdivide_edge(f, 0, 1.0), ValidationError);
  EXPECT_THROW(subdivide_edge(f, 3, 0.5), ValidationError);
}

TEST(Align, FunctionsOnCrossingGraphs) {
  Rng rng(9);
  const GraphPtr a = make_graph(Graph({PolyPath({v2(-1, 0), v2(1, 0)})}));
  const GraphPtr b = make_graph(Graph({PolyPath({v2(0, -1), v2(0, 1)})}));
  const CylFun f = CylFun::state(a, Group::SU2, {spin(1, 0, 1)});
  const CylFun h = CylFun::state(b, Group::SU2, {spin(1, 0, 1)});
  EXPECT_LE(std::abs(inner_product(f, h)), 1e-14);
  EXPECT_NEAR(inner_product(f, f).real(), 1.0, 1e-14);
  const auto [x, y] = align(f, h);
  EXPECT_EQ(x.graph()->size(), 4);
  EXPECT_TRUE(x.same_graph(y));
  EXPECT_NEAR(distance(f, h), std::sqrt(2.0), 1e-13);
  EXPECT_THROW(align(f, CylFun::constant(a, Group::U1)), ValidationError);
}

TEST(SpinNetworks, PredicateImpliesZeroInnerProduct) {
  Rng rng(10);
  int hits = 0;
  for (int k = 0; k < 300; ++k) {
    const GraphPtr g1 = fx::random_graph(rng, 1), g2 = fx::random_graph(rng, 1);
    const Irrep r1 = fx::random_irrep(Group::SU2, rng, 2), r2 = fx::random_irrep(Group::SU2, rng, 2);
    const CylFun a = CylFun::state(g1, Group::SU2, FactorVec(g1->size(), Factor{r1, 0, 0}));
    const CylFun b = k % 2 ? a : CylFun::state(g2, Group::SU2, FactorVec(g2->size(), Factor{r2, 0, r2.dim() - 1}));
    const OrthogonalityReason why = orthogonality_predicate(a, b);
    if (why != OrthogonalityReason::None) {
      ++hits;
      EXPECT_LE(std::abs(inner_product(a, b)), 1e-12);
    }
  }
  EXPECT_GT(hits, 50);
}

TEST(SpinNetworks, Recognition) {
  const GraphPtr g = two_edges();
  EXPECT_TRUE(is_gsn(CylFun::state(g, Group::SU2, {spin(1, 0, 1), spin(2, 1, 1)})));
  EXPECT_FALSE(is_gsn(CylFun::state(g, Group::SU2, {spin(1, 0, 1), spin(2, 1, 1)}, 2.0)));
  EXPECT_FALSE(is_gsn(CylFun::state(g, Group::SU2, {spin(1, 0, 1), Factor::trivial(Group::SU2)})));
  EXPECT_EQ(all_gsns(g, Group::SU2, 2).size(), 13u * 13u);
  EXPECT_EQ(all_gsns(g, Group::SU2, 2, true).size(), 14u * 14u);
  EXPECT_EQ(all_gsns(g, Group::U1, 2).size(), 16u);

  const PolyPath gamma({v2(0, 0), v2(1, 0), v2(1, 1)});
  EXPECT_TRUE(gamma_based(CylFun::state(g, Group::SU2, {spin(1, 0, 1), spin(1, 1, 0)}), gamma, Irrep::su2_twice_spin(1)));
  EXPECT_FALSE(gamma_based(CylFun::state(g, Group::SU2, {spin(1, 0, 1), spin(1, 0, 0)}), gamma, Irrep::su2_twice_spin(1)));
  EXPECT_FALSE(gamma_based(CylFun::state(g, Group::SU2, {spin(1, 0, 1), spin(1, 1, 0)}), gamma, Irrep::su2_twice_spin(2)));
}
