#pragma once

// Weyl operators w^{S}_d acting symbolically on cylindrical functions,
// together with the graphomorphism and gauge actions.

#include <algorithm>
#include <cmath>
#include <vector>

#include "qgeom/cylindrical.hpp"

namespace qgeom {

/// Weyl operator data: surface, rule selection and stratum labels.
/// With inverse_rule the surface orientation is flipped, which is the adjoint.
struct WeylDescriptor {
  OrientedSurface surface;
  bool inverse_rule = false;
  FluxLabels labels;

  OrientedSurface effective_surface() const { return inverse_rule ? surface.inverse() : surface; }
};

inline WeylDescriptor make_weyl(OrientedSurface S, FluxLabels d, bool inverse_rule = false) {
  for (const auto& [k, v] : d.per_stratum) {
    if (k < 0 || k >= S.strata()) throw ValidationError("label refers to a missing stratum");
    if (v.group() != d.group) throw ValidationError("label belongs to the wrong group");
  }
  return {std::move(S), inverse_rule, std::move(d)};
}

inline WeylDescriptor adjoint_weyl(const WeylDescriptor& W) {
  return {W.surface, !W.inverse_rule, W.labels};
}

/// d = exp(t X) on every stratum.
inline WeylDescriptor weyl_one_param(const OrientedSurface& S, Group group, const CMat& X, double t,
                                     bool inverse_rule = false) {
  if (X.rows() != fundamental_dim(group) || !is_anti_hermitian(X)) {
    throw ValidationError("generator must be anti-hermitian in the fundamental representation");
  }
  return make_weyl(S, FluxLabels::constant(S, exp_alg(X, t)), inverse_rule);
}

/// A graph split so that every edge is S-internal or S-external.
struct SurfaceRefinement {
  GraphPtr graph;
  std::vector<Word> words;     // per original edge, over the refined edges
  std::vector<bool> internal;  // per refined edge
};

inline SurfaceRefinement refine_for_surface(const Graph& g, const OrientedSurface& S) {
  Graph out;
  SurfaceRefinement r;
  for (int e = 0; e < g.size(); ++e) {
    const Decomposition d = decompose_minimal(g.edges[e], S);
    Word w;
    for (std::size_t i = 0; i < d.pieces.size(); ++i) {
      w.push_back({static_cast<int>(out.edges.size()), false});
      out.edges.push_back(d.pieces[i].path);
      out.ids.push_back(d.pieces.size() == 1 ? g.ids[e] : g.ids[e] + "." + std::to_string(i));
      r.internal.push_back(d.pieces[i].internal);
    }
    r.words.push_back(std::move(w));
  }
  r.graph = std::make_shared<const Graph>(std::move(out));
  return r;
}

/// Connection on the coarse graph whose values are the holonomies along words.
inline RestrictedConnection coarsen(const RestrictedConnection& fine, GraphPtr coarse, const std::vector<Word>& words) {
  std::vector<GroupElement> v;
  v.reserve(words.size());
  for (const auto& w : words) v.push_back(holonomy(fine, w));
  return {std::move(coarse), fine.group, std::move(v)};
}

/// (W f)(A) = f(Theta_d(A)) on the S-refined graph of f.
inline CylFun apply_weyl(const WeylDescriptor& W, const CylFun& f) {
  if (W.labels.group != f.group()) throw ValidationError("labels and function over different groups");
  const OrientedSurface S = W.effective_surface();
  const SurfaceRefinement ref = refine_for_surface(*f.graph(), S);
  CylFun out = reexpress(f, ref.graph, ref.words);
  for (int e = 0; e < ref.graph->size(); ++e) {
    if (ref.internal[e]) continue;
    const PolyPath& p = ref.graph->edges[e];
    const int s_out = S.sigma_out(p), s_in = S.sigma_in(p);
    if (s_out == 0 && s_in == 0) continue;
    const GroupElement L = W.labels.at(S, p.start()).pow(s_out);
    const GroupElement R = W.labels.at(S, p.end()).pow(s_in);
    out = out.map_edge(e, [&](const Factor& x) { return sandwiched_factor(x, L, R); });
  }
  return out.canonical();
}

/// Theta_d on a connection over an S-refined graph.
inline RestrictedConnection apply_flux(const WeylDescriptor& W, const RestrictedConnection& A) {
  return quasi_flux(A, W.effective_surface(), W.labels);
}

/// (beta_g f)(A) = f(A o g), with (A o g)(e) = g(e(0))^{-1} A(e) g(e(1)).
inline CylFun apply_gauge(const GaugeTransform& g, const CylFun& f) {
  if (g.group != f.group()) throw ValidationError("gauge transform and function over different groups");
  CylFun out = f;
  for (int e = 0; e < f.graph()->size(); ++e) {
    const PolyPath& p = f.graph()->edges[e];
    const GroupElement L = g.at(p.start()).inverse(), R = g.at(p.end());
    if (L.distance(GroupElement::identity(g.group)) == 0.0 && R.distance(GroupElement::identity(g.group)) == 0.0) {
      continue;
    }
    out = out.map_edge(e, [&](const Factor& x) { return sandwiched_factor(x, L, R); });
  }
  return out.canonical();
}

inline GaugeTransform inverse_gauge(const GaugeTransform& g) {
  GaugeTransform r{g.group, {}};
  for (const auto& [p, v] : g.support) r.support.emplace_back(p, v.inverse());
  return r;
}

inline RestrictedConnection gauge_connection(const GaugeTransform& g, const RestrictedConnection& A) {
  std::vector<GroupElement> v;
  for (int e = 0; e < A.graph->size(); ++e) {
    const PolyPath& p = A.graph->edges[e];
    v.push_back(g.at(p.start()).inverse() * A.at(e) * g.at(p.end()));
  }
  return {A.graph, A.group, std::move(v)};
}

/// Weyl operator with labels g d g^{-1}.
inline WeylDescriptor gauge_weyl(const GaugeTransform& g, const WeylDescriptor& W) {
  return {W.surface, W.inverse_rule, W.labels.conjugated(W.surface, g)};
}

/// Moves the graph forward by phi; factors stay on the image edges. Exact for
/// maps that are affine on every edge, otherwise vertices are mapped.
template <class F>
CylFun apply_graphomorphism(const F& phi, const CylFun& f) {
  Graph g;
  for (int e = 0; e < f.graph()->size(); ++e) {
    g.edges.push_back(map_path(phi, f.graph()->edges[e]));
    g.ids.push_back(f.graph()->ids[e]);
  }
  CylFun out(make_graph(std::move(g)), f.group());
  for (const auto& mo : f.monomials()) out.add_product(mo.coeff, mo.edges);
  return out;
}

/// Weyl data over (phi S, phi sigma, d o phi^{-1}) for an affine phi.
inline WeylDescriptor transport_weyl(const AffineMap& phi, const WeylDescriptor& W) {
  return {map_surface(phi, W.surface), W.inverse_rule, W.labels.pushed(phi)};
}

/// Max deviations of the composition laws on the given functions.
struct ComposeReport {
  double multiplicative = 0.0;  // |W1 W2 f - W_{d1 d2} f|, same surface
  double commutator = 0.0;      // |W1 W2 f - W2 W1 f|
};

inline ComposeReport compose_check(const WeylDescriptor& W1, const WeylDescriptor& W2, const std::vector<CylFun>& fs) {
  ComposeReport r;
  const bool same_surface = W1.inverse_rule == W2.inverse_rule && W1.surface.strata() == W2.surface.strata() &&
                            W1.labels.at_points.empty() && W2.labels.at_points.empty();
  for (const auto& f : fs) {
    const CylFun a = apply_weyl(W1, apply_weyl(W2, f));
    const CylFun b = apply_weyl(W2, apply_weyl(W1, f));
    r.commutator = std::max(r.commutator, distance(a, b));
    if (same_surface) {
      const WeylDescriptor P{W1.surface, W1.inverse_rule, W1.labels.times(W2.labels)};
      r.multiplicative = std::max(r.multiplicative, distance(a, apply_weyl(P, f)));
    }
  }
  return r;
}

/// <T, w T> for a spin-network state T = sqrt(d) rho^m_n on one edge that
/// starts on S and otherwise stays off it: rho(d(start)^{sigma})_{mm}.
inline cplx overlap_starting_edge(const WeylDescriptor& W, const PolyPath& edge, const Factor& f) {
  const OrientedSurface S = W.effective_surface();
  if (f.is_trivial()) return 1.0;
  const GroupElement L = W.labels.at(S, edge.start()).pow(S.sigma_out(edge));
  return f.rho(L)(f.m, f.m);
}

}  // namespace qgeom
