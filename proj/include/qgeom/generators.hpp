#pragma once

// Random graphs, surfaces, labels and functions used by the verification
// suites and the tests.

#include <random>
#include <vector>

#include "qgeom/weylops.hpp"

namespace qgeom::gen {

inline Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

inline Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

/// Graph from a few random segments in [-1,1]^2, split at their crossings.
inline GraphPtr random_graph(Rng& rng, int n_paths) {
  std::vector<PolyPath> paths;
  for (int i = 0; i < n_paths; ++i) {
    paths.push_back(PolyPath({v2(uniform(rng, -1, 1), uniform(rng, -1, 1)), v2(uniform(rng, -1, 1), uniform(rng, -1, 1))}));
  }
  return make_graph(build_graph(paths).graph);
}

/// One or two nearly horizontal pieces in separate bands, normals from orientation.
inline OrientedSurface random_surface(Rng& rng, int pieces = 1, double y0 = 0.0) {
  std::vector<Simplex> s;
  for (int i = 0; i < pieces; ++i) {
    const double y = y0 + 0.6 * i;
    Vec a = v2(uniform(rng, -1.5, -0.2), y + uniform(rng, -0.2, 0.2));
    Vec b = v2(uniform(rng, 0.2, 1.5), y + uniform(rng, -0.2, 0.2));
    if (rng() % 2) std::swap(a, b);
    s.push_back(Simplex::oriented({a, b}));
  }
  return OrientedSurface(std::move(s));
}

inline FluxLabels random_labels(const OrientedSurface& S, Group g, Rng& rng) {
  FluxLabels d{g, {}, {}};
  for (int i = 0; i < S.strata(); ++i) d.per_stratum.emplace(i, haar_sample(g, rng));
  return d;
}

inline Irrep random_irrep(Group g, Rng& rng, int max_label) {
  const int l = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_label));
  if (g == Group::SU2) return Irrep::su2_twice_spin(l);
  return Irrep::u1(rng() % 2 ? l : -l);
}

inline Factor random_factor(Group g, Rng& rng, int max_label, double p_trivial = 0.4) {
  if (uniform(rng, 0, 1) < p_trivial) return Factor::trivial(g);
  const Irrep r = random_irrep(g, rng, max_label);
  return {r, static_cast<int>(rng() % r.dim()), static_cast<int>(rng() % r.dim())};
}

inline CylFun random_cylfun(const GraphPtr& graph, Group g, Rng& rng, int monomials = 2, int max_label = 2) {
  CylFun f(graph, g);
  for (int k = 0; k < monomials; ++k) {
    FactorVec fv;
    for (int e = 0; e < graph->size(); ++e) fv.push_back(random_factor(g, rng, max_label));
    f.add(cplx(uniform(rng, -1, 1), uniform(rng, -1, 1)), std::move(fv));
  }
  return f;
}

inline GroupElement torus_element(double phi) {
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = std::polar(1.0, phi);
  m(1, 1) = std::polar(1.0, -phi);
  return GroupElement::from_matrix(Group::SU2, m);
}

/// Random invertible affine map of the plane with bounded distortion.
inline AffineMap random_affine(Rng& rng) {
  while (true) {
    Mat m(2, 2);
    m << uniform(rng, -1.5, 1.5), uniform(rng, -1.5, 1.5), uniform(rng, -1.5, 1.5), uniform(rng, -1.5, 1.5);
    if (std::abs(m.determinant()) > 0.3) return {m, v2(uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5))};
  }
}

/// Random graph with a surface and labels over group g.
struct Instance {
  GraphPtr graph;
  OrientedSurface S;
  WeylDescriptor W;
};

inline Instance random_instance(Rng& rng, Group g, int pieces = 1) {
  GraphPtr graph = random_graph(rng, 3);
  OrientedSurface S = random_surface(rng, pieces);
  WeylDescriptor W = make_weyl(S, random_labels(S, g, rng));
  return {graph, S, W};
}

}  // namespace qgeom::gen
