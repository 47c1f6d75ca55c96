#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "qgeom/estimates.hpp"
#include "qgeom/stratdiffeo.hpp"

using namespace qgeom;
using fx::v3;

namespace {

const Irrep kHalf = Irrep::su2_twice_spin(1);
const Irrep kOne = Irrep::su2_twice_spin(2);

}  // namespace

TEST(Xi, SpinHalfIsCosine) {
  const LieBasis b = canonical_basis(Group::SU2);
  EXPECT_EQ((xi(kHalf, b, 0.0) - CMat::Identity(2, 2)).norm(), 0.0);
  for (int k = 1; k <= 20; ++k) {
    const double t = -2.0 + 0.2 * k;
    EXPECT_LE((xi(kHalf, b, t) - std::cos(t) * CMat::Identity(2, 2)).norm(), 1e-12) << t;
  }
  EXPECT_LE((xi(kHalf, b, 0.1) - std::cos(0.1) * CMat::Identity(2, 2)).norm(), 1e-12);
}

TEST(Xi, EvenAndHermitian) {
  const LieBasis b = canonical_basis(Group::SU2);
  for (const Irrep& r : {kHalf, kOne, Irrep::su2_twice_spin(3)}) {
    const XiProfile p = xi_profile(r, b, {0.05, 0.3, 0.9, 1.7});
    for (std::size_t i = 0; i < p.ts.size(); ++i) {
      EXPECT_LE((p.values[i] - xi(r, b, -p.ts[i])).norm(), 1e-14);
      EXPECT_LE((p.values[i] - p.values[i].adjoint()).norm(), 1e-14);
    }
  }
}

TEST(CasimirGap, SpinHalfRatioApproachesOneTwelfth) {
  const LieBasis b = canonical_basis(Group::SU2);
  const CasimirGapReport r = casimir_gap_check(kHalf, b, 0.5, {0.2, 0.1, 0.05});
  EXPECT_TRUE(r.pass);
  EXPECT_DOUBLE_EQ(r.lambda, 1.0);
  for (std::size_t i = 0; i < r.ratios.size(); ++i) {
    const double t = r.ts[i];
    // series oracle: cos t - e^{-t^2/2} = -t^4/12 + t^6/45 ...
    EXPECT_NEAR(r.ratios[i], std::abs(std::cos(t) - std::exp(-t * t / 2)) / std::pow(t, 4), 1e-12);
    EXPECT_NEAR(r.ratios[i], 1.0 / 12, 0.1 / 12);
    if (i > 0) EXPECT_LT(std::abs(r.ratios[i] - 1.0 / 12), std::abs(r.ratios[i - 1] - 1.0 / 12));
  }
  EXPECT_LE(r.derivatives[1], 1e-8);
  EXPECT_LE(r.derivatives[3], 1e-8);
  EXPECT_THROW(casimir_gap_check(kHalf, b, 0.1, {0.2}), ValidationError);
}

TEST(CasimirGap, HigherSpinsAndAbelian) {
  for (const Irrep& r : {kOne, Irrep::su2_twice_spin(3), Irrep::su2_twice_spin(4)}) {
    EXPECT_TRUE(casimir_gap_check(r, canonical_basis(Group::SU2), 0.5, {0.3, 0.1, 0.03}).pass) << r.name();
  }
  // U1 with X = i: Xi(t) = cos(qt), lambda = q^2
  const CasimirGapReport u = casimir_gap_check(Irrep::u1(2), canonical_basis(Group::U1), 0.5, {0.1});
  EXPECT_TRUE(u.pass);
  EXPECT_DOUBLE_EQ(u.lambda, 4.0);
  EXPECT_NEAR(u.ratios[0], std::abs(std::cos(0.2) - std::exp(-0.02)) / 1e-4, 1e-10);
}

TEST(Opprod, TrivialCases) {
  Rng rng(1);
  const CMat A = 0.7 * random_unitary(3, rng);
  CMat p1 = CMat::Identity(3, 3), p2 = p1;
  for (int i = 0; i < 4; ++i) {
    const CMat B = 0.9 * random_unitary(3, rng);
    p1 = p1 * A * B;
    p2 = p2 * A * B;
  }
  EXPECT_EQ(op_norm(p1 - p2), 0.0);
  const BoundReport one = opprod_bound_check(1, 500, rng);
  EXPECT_EQ(one.violations, 0);
  EXPECT_THROW(opprod_bound_check(9, 1, rng), ValidationError);
}

TEST(Opprod, RandomBatches) {
  Rng rng(2);
  for (int N = 1; N <= 8; ++N) {
    const BoundReport r = opprod_bound_check(N, 1000, rng);
    EXPECT_EQ(r.violations, 0) << N;
    EXPECT_EQ(r.draws, 1000);
  }
}

TEST(TensorCasimir, SpinHalfClosedForm) {
  Rng rng(3);
  const LieBasis b = canonical_basis(Group::SU2);
  const TensorCasimirReport r = tensor_casimir_check(kHalf, b, 2, 0.5, {0.1}, 200, rng);
  EXPECT_EQ(r.bound.violations, 0);
  const double closed = std::abs(std::pow(std::cos(0.1), 2) - std::exp(-0.01));
  EXPECT_NEAR(closed, 1.66e-5, 1e-7);
  EXPECT_NEAR(r.bound.max_lhs, closed, 1e-12);
}

TEST(TensorCasimir, NoViolations) {
  Rng rng(4);
  const LieBasis b = canonical_basis(Group::SU2);
  for (int J : {2, 4, 6}) {
    for (const Irrep& r : {kHalf, kOne}) {
      const TensorCasimirReport rep = tensor_casimir_check(r, b, J, 0.5, {0.3, 0.1, 0.05}, 300, rng);
      EXPECT_EQ(rep.bound.violations, 0) << J << " " << r.name();
    }
  }
  EXPECT_THROW(tensor_casimir_check(kHalf, b, 3, 0.5, {0.1}, 1, rng), ValidationError);
}

TEST(SupNorm, FactorizedAndSampled) {
  Rng rng(5);
  const CylFun T = chain_state(kHalf, 0, 0, 2);
  EXPECT_NEAR(sup_norm(T, rng), std::sqrt(2.0), 1e-6);
  const CylFun U = chain_state(kOne, 0, 2, 0);
  // |rho^1(g)_{0,2}| peaks at 1 for the Weyl element
  EXPECT_NEAR(sup_norm(U, rng), std::sqrt(3.0), 1e-6);
}

TEST(Winding, TwoStepsAllAssignments) {
  Rng rng(6);
  const LieBasis b = canonical_basis(Group::SU2);
  const WindingReport r = winding_average_check(kHalf, b, 2, 0.2, 0, rng);
  EXPECT_EQ(r.assignments, 36);
  EXPECT_LE(r.identity_deviation, 1e-12);
  EXPECT_TRUE(r.pass());
  // Xi = cos t: the difference is sqrt(2)|cos^2 t - e^{-t^2}| times a unit-sup entry
  EXPECT_NEAR(r.lhs_sup, std::sqrt(2.0) * std::abs(std::pow(std::cos(0.2), 2) - std::exp(-0.04)), 1e-6);
}

TEST(Winding, ZeroTimeIsIdentity) {
  Rng rng(7);
  const LieBasis b = canonical_basis(Group::SU2);
  const WindingReport r = winding_average_check(kHalf, b, 2, 0.0, 1, rng);
  EXPECT_LE(r.identity_deviation, 1e-15);
  EXPECT_EQ(r.lhs_sup, 0.0);
}

TEST(Winding, FourStepsSpinOne) {
  Rng rng(8);
  const LieBasis b = canonical_basis(Group::SU2);
  const WindingReport r = winding_average_check(kOne, b, 4, 0.1, 1, rng);
  EXPECT_EQ(r.assignments, 1296);
  EXPECT_LE(r.identity_deviation, 1e-12);
  EXPECT_TRUE(r.pass()) << r.lhs_sup << " " << r.lhs_upper << " " << r.bound;
  EXPECT_GT(r.margin(), 0.0);
  EXPECT_THROW(winding_average_check(kHalf, b, 8, 0.1, 0, rng), UnsupportedError);
}

// The chain form matches the Weyl operator applied to a geometrically wound path.
TEST(Winding, ChainFormMatchesWoundPath) {
  const LieBasis b = canonical_basis(Group::SU2);
  const double t = 0.4, a = 0.3, eps = 0.05;
  const int n = 3;
  std::vector<double> zc;
  std::vector<OrientedSurface> S;
  for (int i = 0; i < 2 * n; ++i) {
    zc.push_back(0.2 + 0.1 * i);
    const Vec A = v3(0.0, a, zc[i] - 0.03), B = v3(1.0, a, zc[i] - 0.03), C = v3(1.0, a, zc[i] + 0.03),
              D = v3(0.0, a, zc[i] + 0.03);
    S.push_back(OrientedSurface({Simplex({A, B, C}, v3(0, 1, 0)), Simplex({A, C, D}, v3(0, 1, 0), {2})}));
  }
  const std::vector<double> taus{1.0 / 3, 2.0 / 3};
  for (const std::vector<int>& asg : {std::vector<int>{0, 4}, {2, 2}, {5, 1}}) {
    const StratMap m = winding_map(WindingParams{taus, asg, zc, a, eps});
    const PolyPath img = winding_image(m, 0.0, 1.0, 600, taus);
    int sign0 = 0;
    for (std::size_t j = 0; j < asg.size(); ++j) {
      const auto ps = punctures(img, S[asg[j]]);
      ASSERT_GE(ps.size(), 1u);
      for (const auto& p : ps) {
        if (std::abs(p.point(0) - taus[j]) < 1e-9) {
          if (j == 0) sign0 = p.sign();
          EXPECT_EQ(p.sign(), j % 2 == 0 ? sign0 : -sign0);
        }
      }
    }
    ASSERT_NE(sign0, 0);
    const GraphPtr g = make_graph(Graph({img}, {"gamma"}));
    CylFun f = CylFun::state(g, Group::SU2, {Factor{kHalf, 0, 1}});
    for (int i = 0; i < 2 * n; ++i) {
      const CMat X = i < n ? b.elements[i] : CMat(-b.elements[i - n]);
      f = apply_weyl(make_weyl(S[i], FluxLabels::constant(S[i], exp_alg(X, 0.5 * t))), f);
    }
    ASSERT_EQ(f.graph()->size(), 3);
    // insertion at tau_1 carries sign0, i.e. (-1)^{1+s} = sign0
    const int s = sign0 > 0 ? 1 : 0;
    const CylFun chain = winding_pullback(chain_state(kHalf, 0, 1, 2, 3), kHalf, b, asg, t, s);
    Rng rng(9);
    for (int k = 0; k < 20; ++k) {
      std::vector<GroupElement> h;
      for (int e = 0; e < 3; ++e) h.push_back(haar_sample(Group::SU2, rng));
      const cplx x = evaluate(f, RestrictedConnection{f.graph(), Group::SU2, h});
      const cplx y = evaluate(chain, RestrictedConnection{chain.graph(), Group::SU2, h});
      EXPECT_LE(std::abs(x - y), 1e-12);
    }
  }
}

TEST(NiceSurface, IdentityLabels) {
  const NiceConfig c = nice_segment_config(2);
  const GroupElement e = GroupElement::identity(Group::SU2);
  const NiceInnerReport r = nice_surface_inner_check(c, {Factor{kHalf, 0, 1}}, e, e);
  EXPECT_NEAR(r.formula.real(), 1.0, 1e-15);
  EXPECT_LE(r.deviation, 1e-12);
}

TEST(NiceSurface, RandomLabelsMatchFormula) {
  Rng rng(10);
  const NiceConfig c = nice_segment_config(2);
  for (const Irrep& rho : {kHalf, kOne}) {
    for (int k = 0; k < 20; ++k) {
      const Factor f{rho, static_cast<int>(rng() % rho.dim()), static_cast<int>(rng() % rho.dim())};
      const NiceInnerReport r =
          nice_surface_inner_check(c, {f}, haar_sample(Group::SU2, rng), haar_sample(Group::SU2, rng));
      EXPECT_LE(r.deviation, 1e-12) << rho.name();
    }
  }
}

TEST(NiceSurface, AbelianEigenvalue) {
  const NiceConfig c = nice_segment_config(2);
  for (double th : {0.3, 1.1, -2.5}) {
    const GroupElement g = GroupElement::u1(th);
    const NiceInnerReport r = nice_surface_inner_check(c, {Factor{Irrep::u1(1), 0, 0}}, g, g);
    EXPECT_LE(r.abelian_deviation, 1e-12);
    EXPECT_LE(r.deviation, 1e-12);
    const CylFun T = CylFun::state(c.graph, Group::U1, {Factor{Irrep::u1(1), 0, 0}});
    const CylFun w = apply_weyl(make_weyl(c.surfaces[0], FluxLabels::constant(c.surfaces[0], g)), T);
    EXPECT_LE(distance(w, T * std::polar(1.0, 2 * th)), 1e-12);
  }
}

TEST(NiceSurface, CharacterZeroGivesOrthonormalFamily) {
  const NiceConfig c = nice_segment_config(5);
  for (const Irrep& rho : {kHalf, kOne}) {
    const GroupElement g = find_character_zero(rho);
    EXPECT_LE(std::abs(character(rho, g.pow(2))), 1e-10);
    const CMat G = nice_family_gram(c, {Factor{rho, 0, 0}}, g);
    EXPECT_LE((G - CMat::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-12) << rho.name();
  }
}

TEST(NiceSurface, RejectsDegenerateConfigurations) {
  NiceConfig c = nice_segment_config(2);
  c.surfaces[1] = c.surfaces[0];
  const GroupElement e = GroupElement::identity(Group::SU2);
  EXPECT_THROW(nice_surface_inner_check(c, {Factor{kHalf, 0, 0}}, e, e), DomainError);
  NiceConfig d = nice_segment_config(1);
  d.surfaces.push_back(OrientedSurface({Simplex::oriented({fx::v2(2, -1), fx::v2(2, 1)})}));
  EXPECT_THROW(nice_surface_inner_check(d, {Factor{kHalf, 0, 0}}, e, e), DomainError);
}

TEST(Splitting, AdmissibleWindow) {
  EXPECT_EQ(admissible_J(0.0108, 0.3), 0);  // window [0.4, 0.8]
  EXPECT_EQ(admissible_J(0.108, 0.3), 4);
  const int J = admissible_J(0.05, 0.1);
  EXPECT_GE(J, 50);
  EXPECT_LE(J, 100);
  EXPECT_EQ(J % 2, 0);
}

TEST(Splitting, FundamentalWitness) {
  const LieBasis b = canonical_basis(Group::SU2);
  SplittingParams p;
  p.tau2 = 0.3;
  p.tau4 = 0.0777;  // J0 = 0.10796, t0 = min(0.36, 0.476, 1)
  p.eps = 0.01;
  const SplittingReport r = splitting_witness(kHalf, b, {0.3}, p);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].J, 4);
  EXPECT_EQ(r.rows[0].assignments, 1296);
  EXPECT_LE(r.rows[0].expectation, 1e-14);
  EXPECT_EQ(r.rows[0].vacuum_shift, 0.0);
  // avg = cos^4(t) T, so the averaged gap is 1 - cos^4 t
  EXPECT_NEAR(r.rows[0].averaged_gap, 1 - std::pow(std::cos(0.3), 4), 1e-12);
  EXPECT_TRUE(r.separated);
  const SplittingReport again = splitting_witness(kHalf, b, {0.3}, p);
  EXPECT_EQ(again.rows[0].nonconstant, r.rows[0].nonconstant);
  EXPECT_THROW(splitting_witness(kHalf, b, {0.5}, p), DomainError);
  EXPECT_THROW(splitting_witness(kOne, b, {0.3}, p), ValidationError);
}
