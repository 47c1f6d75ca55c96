#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace qgeom;
using fx::v2;

namespace {

OrientedSurface x_axis() { return OrientedSurface({Simplex::oriented({v2(-2, 0), v2(2, 0)})}); }

// Three S-external edges (one leaving S upward, one arriving from below, one
// away from S) and one edge inside S.
GraphPtr mixed_graph() {
  return make_graph(Graph({PolyPath({v2(0.3, 0), v2(0.1, 1)}), PolyPath({v2(-0.5, -1), v2(-0.4, 0)}),
                           PolyPath({v2(-1, 1.5), v2(1, 1.8)}), PolyPath({v2(0.8, 0), v2(1.5, 0)})}));
}

double max_dev(const RestrictedConnection& a, const RestrictedConnection& b) {
  double d = 0.0;
  for (int e = 0; e < a.graph->size(); ++e) d = std::max(d, a.at(e).distance(b.at(e)));
  return d;
}

}  // namespace

TEST(Connection, ValidatesShape) {
  const GraphPtr g = mixed_graph();
  EXPECT_THROW(RestrictedConnection(g, Group::SU2, {GroupElement::identity(Group::SU2)}), ValidationError);
  std::vector<GroupElement> wrong(g->size(), GroupElement::identity(Group::U1));
  EXPECT_THROW(RestrictedConnection(g, Group::SU2, wrong), ValidationError);
  EXPECT_THROW(RestrictedConnection(nullptr, Group::SU2, {}), ValidationError);
}

TEST(Connection, HolonomyOfWords) {
  Rng rng(3);
  const GraphPtr g = make_graph(Graph({PolyPath({v2(0, 0), v2(1, 0)}), PolyPath({v2(1, 0), v2(1, 1)})}));
  for (Group grp : {Group::SU2, Group::U1}) {
    const RestrictedConnection A = RestrictedConnection::haar(g, grp, rng);
    const GroupElement h = holonomy(A, Word{{0, false}, {1, false}});
    EXPECT_LE(h.distance(A.at(0) * A.at(1)), 1e-14);
    const GroupElement back = holonomy(A, Word{{1, true}, {0, true}});
    EXPECT_LE((h * back).distance(GroupElement::identity(grp)), 1e-13);
    const GroupElement via_path = holonomy(A, PolyPath({v2(0, 0), v2(1, 0), v2(1, 1)}));
    EXPECT_LE(via_path.distance(h), 1e-14);
    EXPECT_THROW(holonomy(A, Word{{5, false}}), DomainError);
  }
}

TEST(Connection, GaugeTransformIsIdentityOffSupport) {
  Rng rng(4);
  const GroupElement x = haar_sample(Group::SU2, rng);
  const GaugeTransform g{Group::SU2, {{v2(0.5, 0.5), x}}};
  EXPECT_LE(g.at(v2(0.5, 0.5)).distance(x), 0.0);
  EXPECT_LE(g.at(v2(0.5, 0.6)).distance(GroupElement::identity(Group::SU2)), 0.0);
}

TEST(FluxLabels, InverseAndProduct) {
  Rng rng(5);
  // the shared vertex belongs to the first piece only
  const OrientedSurface S({Simplex::oriented({v2(-2, 0), v2(0, 0)}), Simplex::oriented({v2(0, 0), v2(2, 0.3)}, {1})});
  const FluxLabels d = fx::random_labels(S, Group::SU2, rng);
  const FluxLabels e = d.times(d.inverse());
  for (int i = 0; i < S.strata(); ++i) EXPECT_LE(e.stratum(i).distance(GroupElement::identity(Group::SU2)), 1e-13);
  FluxLabels p = d;
  p.at_points.emplace_back(v2(-1, 0), haar_sample(Group::SU2, rng));
  EXPECT_LE(p.at(S, v2(-1, 0)).distance(p.at_points[0].second), 0.0);
  EXPECT_THROW(p.times(d), UnsupportedError);
  EXPECT_LE(d.at(S, v2(5, 5)).distance(GroupElement::identity(Group::SU2)), 0.0);
}

TEST(QuasiFlux, EndsFollowIntersectionFunctions) {
  Rng rng(6);
  const OrientedSurface S = x_axis();
  const GraphPtr g = mixed_graph();
  const GroupElement x = haar_sample(Group::SU2, rng);
  const FluxLabels d = FluxLabels::constant(S, x);
  const RestrictedConnection A = RestrictedConnection::haar(g, Group::SU2, rng);
  const RestrictedConnection B = quasi_flux(A, S, d);
  const int s0 = S.sigma_out(g->edges[0]), s1 = S.sigma_in(g->edges[1]);
  ASSERT_EQ(std::abs(s0), 1);
  ASSERT_EQ(std::abs(s1), 1);
  EXPECT_LE(B.at(0).distance(x.pow(s0) * A.at(0)), 1e-13);
  EXPECT_LE(B.at(1).distance(A.at(1) * x.pow(s1)), 1e-13);
  EXPECT_LE(B.at(2).distance(A.at(2)), 1e-14);
  EXPECT_LE(B.at(3).distance(A.at(3)), 1e-14);
}

TEST(QuasiFlux, InverseLabelsUndoTheAction) {
  Rng rng(7);
  for (int k = 0; k < 50; ++k) {
    const Group grp = k % 2 ? Group::U1 : Group::SU2;
    const fx::Instance in = fx::random_instance(rng, grp);
    const SurfaceRefinement ref = refine_for_surface(*in.graph, in.S);
    const FluxLabels d = fx::random_labels(in.S, grp, rng);
    const RestrictedConnection A = RestrictedConnection::haar(ref.graph, grp, rng);
    EXPECT_LE(max_dev(quasi_flux(quasi_flux(A, in.S, d), in.S, d.inverse()), A), 1e-12);
  }
}

TEST(QuasiFlux, RejectsEdgesCrossingTheSurface) {
  Rng rng(8);
  const OrientedSurface S = x_axis();
  const GraphPtr g = make_graph(Graph({PolyPath({v2(0, -1), v2(0, 1)})}));
  const RestrictedConnection A = RestrictedConnection::haar(g, Group::SU2, rng);
  EXPECT_THROW(quasi_flux(A, S, FluxLabels::constant(S, haar_sample(Group::SU2, rng))), ValidationError);
}

TEST(Admissible, FluxMapAgreesWithQuasiFlux) {
  Rng rng(9);
  for (int k = 0; k < 50; ++k) {
    const Group grp = k % 3 == 2 ? Group::U1 : Group::SU2;
    const fx::Instance in = fx::random_instance(rng, grp, 1 + k % 2);
    const SurfaceRefinement ref = refine_for_surface(*in.graph, in.S);
    const FluxLabels d = fx::random_labels(in.S, grp, rng);
    const RestrictedConnection A = RestrictedConnection::haar(ref.graph, grp, rng);
    const AdmissibleMap r = flux_admissible(in.S, d);
    EXPECT_LE(max_dev(admissible_to_map(r, A), quasi_flux(A, in.S, d)), 1e-12);
    EXPECT_LE(max_dev(admissible_to_map(inverse_admissible(r), admissible_to_map(r, A)), A), 1e-12);
  }
}

TEST(Germ, PureGaugeGermIsPathIndependent) {
  Rng rng(10);
  const OrientedSurface S = x_axis();
  std::vector<CMat> gauge{0.7 * cplx(0, 1) * pauli(1), -0.4 * cplx(0, 1) * pauli(3)};
  const std::vector<CMat> zero(2, CMat::Zero(2, 2));
  const Germ q = constant_germ(S, Group::SU2, zero, zero, gauge);
  const PolyPath a({v2(-1, -1), v2(0.2, 1)});
  const PolyPath b({v2(-1, -1), v2(1, -0.5), v2(0.7, 0.2), v2(0.2, 1)});
  const GroupElement ha = germ_extend(q, a), hb = germ_extend(q, b);
  EXPECT_LE(ha.distance(hb), 1e-12);
  const GroupElement expect = exp_alg(-gauge[0] - gauge[1], 1.0).inverse() * exp_alg(0.2 * gauge[0] + gauge[1], 1.0);
  EXPECT_LE(ha.distance(expect), 1e-12);
}

TEST(Germ, ExtensionIgnoresExtraBreakpoints) {
  Rng rng(11);
  const OrientedSurface S = x_axis();
  auto rnd = [&] {
    std::vector<CMat> v;
    for (int mu = 0; mu < 2; ++mu) {
      CMat x = CMat::Zero(2, 2);
      for (int k = 1; k <= 3; ++k) x += fx::uniform(rng, -1, 1) * cplx(0, 1) * pauli(k);
      v.push_back(x);
    }
    return v;
  };
  for (int k = 0; k < 30; ++k) {
    const Germ q = constant_germ(S, Group::SU2, rnd(), rnd(), rnd());
    const PolyPath g({v2(-1.5, -1), v2(-0.5, 0), v2(0.5, 0), v2(1, 1), v2(1.2, -0.6)});
    const GroupElement h0 = germ_extend(q, g);
    const GroupElement h1 = germ_extend(q, g, {fx::uniform(rng, 0.05, 0.95), fx::uniform(rng, 0.05, 0.95)});
    EXPECT_LE(h0.distance(h1), 1e-12);
  }
}
