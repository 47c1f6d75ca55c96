#pragma once

// Connections restricted to a graph, germs on Q_S and their extension, and
// the quasi-flux action together with its admissible-map form.

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "qgeom/geometry.hpp"
#include "qgeom/liegroup.hpp"

namespace qgeom {

using GraphPtr = std::shared_ptr<const Graph>;

inline GraphPtr make_graph(Graph g) {
  g.validate();
  return std::make_shared<const Graph>(std::move(g));
}

/// One group element per graph edge.
struct RestrictedConnection {
  GraphPtr graph;
  Group group = Group::SU2;
  std::vector<GroupElement> values;

  RestrictedConnection() = default;
  RestrictedConnection(GraphPtr g, Group grp, std::vector<GroupElement> v)
      : graph(std::move(g)), group(grp), values(std::move(v)) {
    if (!graph) throw ValidationError("connection needs a graph");
    if (static_cast<int>(values.size()) != graph->size()) {
      throw ValidationError("connection must assign exactly one element per edge");
    }
    for (const auto& x : values) {
      if (x.group() != group) throw ValidationError("connection values belong to the wrong group");
    }
  }

  static RestrictedConnection trivial(GraphPtr g, Group grp) {
    std::vector<GroupElement> v(g->size(), GroupElement::identity(grp));
    return {std::move(g), grp, std::move(v)};
  }

  static RestrictedConnection haar(GraphPtr g, Group grp, Rng& rng) {
    std::vector<GroupElement> v;
    v.reserve(g->size());
    for (int i = 0; i < g->size(); ++i) v.push_back(haar_sample(grp, rng));
    return {std::move(g), grp, std::move(v)};
  }

  const GroupElement& at(int edge) const { return values.at(edge); }
};

inline GroupElement holonomy(const RestrictedConnection& A, const Word& w) {
  GroupElement h = GroupElement::identity(A.group);
  for (const auto& u : w) {
    if (u.edge < 0 || u.edge >= A.graph->size()) throw DomainError("word refers to a missing edge");
    h = h * (u.reversed ? A.at(u.edge).inverse() : A.at(u.edge));
  }
  return h;
}

inline GroupElement holonomy(const RestrictedConnection& A, const PolyPath& p) {
  return holonomy(A, express(*A.graph, p));
}

/// Generalized gauge transform with finite support; e elsewhere.
struct GaugeTransform {
  Group group = Group::SU2;
  std::vector<std::pair<Vec, GroupElement>> support;

  GroupElement at(const Vec& x) const {
    for (const auto& [p, g] : support) {
      if (p.size() == x.size() && (p - x).norm() <= kGeomEps) return g;
    }
    return GroupElement::identity(group);
  }
};

/// Group labels on a surface: constant per stratum, with optional values at
/// isolated points overriding the stratum value. Unlabeled strata carry e.
struct FluxLabels {
  Group group = Group::SU2;
  std::map<int, GroupElement> per_stratum;
  std::vector<std::pair<Vec, GroupElement>> at_points;

  static FluxLabels constant(const OrientedSurface& S, const GroupElement& g) {
    FluxLabels d{g.group(), {}, {}};
    for (int i = 0; i < S.strata(); ++i) d.per_stratum.emplace(i, g);
    return d;
  }

  GroupElement stratum(int i) const {
    const auto it = per_stratum.find(i);
    return it == per_stratum.end() ? GroupElement::identity(group) : it->second;
  }

  GroupElement at(const OrientedSurface& S, const Vec& x) const {
    for (const auto& [p, g] : at_points) {
      if (p.size() == x.size() && (p - x).norm() <= kGeomEps) return g;
    }
    const auto s = S.locate(x);
    return s ? stratum(*s) : GroupElement::identity(group);
  }

  FluxLabels inverse() const {
    FluxLabels r{group, {}, {}};
    for (const auto& [k, v] : per_stratum) r.per_stratum.emplace(k, v.inverse());
    for (const auto& [p, v] : at_points) r.at_points.emplace_back(p, v.inverse());
    return r;
  }

  /// Pointwise product d * o, for stratum-constant labels.
  FluxLabels times(const FluxLabels& o) const {
    if (!at_points.empty() || !o.at_points.empty()) throw UnsupportedError("product of point-dependent labels");
    FluxLabels r{group, {}, {}};
    for (const auto& [k, v] : per_stratum) r.per_stratum.emplace(k, v * o.stratum(k));
    for (const auto& [k, v] : o.per_stratum) {
      if (!per_stratum.count(k)) r.per_stratum.emplace(k, v);
    }
    return r;
  }

  /// g d g^{-1}: only points of the gauge support change.
  FluxLabels conjugated(const OrientedSurface& S, const GaugeTransform& g) const {
    FluxLabels r = *this;
    r.at_points.clear();
    for (const auto& [p, gp] : g.support) {
      if (!S.contains(p)) continue;
      r.at_points.emplace_back(p, gp * at(S, p) * gp.inverse());
    }
    for (const auto& [p, v] : at_points) {
      bool done = false;
      for (const auto& q : r.at_points) done = done || (q.first - p).norm() <= kGeomEps;
      if (!done) r.at_points.emplace_back(p, v);
    }
    return r;
  }

  /// d o phi^{-1} for a map keeping the stratum order.
  template <class F>
  FluxLabels pushed(const F& phi) const {
    FluxLabels r{group, per_stratum, {}};
    for (const auto& [p, v] : at_points) r.at_points.emplace_back(phi(p), v);
    return r;
  }
};

/// Left and right multipliers the flux puts on an S-external path.
struct FluxEnds {
  GroupElement left, right;
};

inline bool is_q_path(const PolyPath& p, const OrientedSurface& S, bool* internal = nullptr) {
  const Decomposition d = decompose_minimal(p, S);
  if (d.pieces.size() != 1) return false;
  if (internal) *internal = d.pieces.front().internal;
  return true;
}

inline FluxEnds flux_ends(const PolyPath& p, const OrientedSurface& S, const FluxLabels& d) {
  bool internal = false;
  if (!is_q_path(p, S, &internal)) throw ValidationError("path is neither S-internal nor S-external");
  if (internal) return {GroupElement::identity(d.group), GroupElement::identity(d.group)};
  return {d.at(S, p.start()).pow(S.sigma_out(p)), d.at(S, p.end()).pow(S.sigma_in(p))};
}

/// Quasi-flux action on a connection whose edges are S-internal or S-external.
inline RestrictedConnection quasi_flux(const RestrictedConnection& A, const OrientedSurface& S,
                                       const FluxLabels& d) {
  std::vector<GroupElement> v;
  v.reserve(A.values.size());
  for (int e = 0; e < A.graph->size(); ++e) {
    const FluxEnds ends = flux_ends(A.graph->edges[e], S, d);
    v.push_back(ends.left * A.at(e) * ends.right);
  }
  return {A.graph, A.group, std::move(v)};
}

/// Map on the paths of Q_S satisfying the germ laws.
struct Germ {
  OrientedSurface surface;
  Group group = Group::SU2;
  std::function<GroupElement(const PolyPath&, bool internal)> rule;

  GroupElement operator()(const PolyPath& p) const {
    bool internal = false;
    if (!is_q_path(p, surface, &internal)) throw DomainError("germ evaluated outside Q_S");
    return rule(p, internal);
  }
};

/// Germ of a connection with constant components, separately for internal
/// and external paths, twisted by the gauge field x -> exp(sum x_mu B_mu).
inline Germ constant_germ(const OrientedSurface& S, Group group, std::vector<CMat> a_ext, std::vector<CMat> a_int,
                          std::vector<CMat> gauge) {
  auto field_exp = [group](const std::vector<CMat>& comps, const Vec& dx) {
    const int n = fundamental_dim(group);
    CMat x = CMat::Zero(n, n);
    for (std::size_t mu = 0; mu < comps.size() && static_cast<int>(mu) < dx.size(); ++mu) x += dx(mu) * comps[mu];
    return exp_alg(x, 1.0);
  };
  auto rule = [=](const PolyPath& p, bool internal) {
    const auto& comps = internal ? a_int : a_ext;
    GroupElement h = GroupElement::identity(group);
    const auto& v = p.vertices();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) h = h * field_exp(comps, v[i + 1] - v[i]);
    return field_exp(gauge, p.start()).inverse() * h * field_exp(gauge, p.end());
  };
  return {S, group, rule};
}

/// Product of germ values over a Q_S-decomposition of g; extra breakpoints
/// refine the minimal decomposition.
inline GroupElement germ_extend(const Germ& q, const PolyPath& g, const std::vector<double>& extra = {}) {
  Decomposition d;
  try {
    d = extra.empty() ? decompose_minimal(g, q.surface) : decompose_refined(g, q.surface, extra);
  } catch (const DomainError& e) {
    throw DomainError(std::string("no Q_S-decomposition: ") + e.what());
  }
  GroupElement h = GroupElement::identity(q.group);
  for (const auto& piece : d.pieces) h = h * q.rule(piece.path, piece.internal);
  return h;
}

/// Admissible map r on Q_S.
struct AdmissibleMap {
  OrientedSurface surface;
  Group group = Group::SU2;
  std::function<GroupElement(const PolyPath&)> rule;

  GroupElement operator()(const PolyPath& p) const {
    if (!is_q_path(p, surface)) throw DomainError("admissible map evaluated outside Q_S");
    return rule(p);
  }
};

/// r(g, d) = d(g(0))^{-sigma(g)} on external paths, e on internal ones.
inline AdmissibleMap flux_admissible(const OrientedSurface& S, const FluxLabels& d) {
  auto rule = [S, d](const PolyPath& p) {
    bool internal = false;
    is_q_path(p, S, &internal);
    if (internal) return GroupElement::identity(d.group);
    return d.at(S, p.start()).pow(-S.sigma_out(p));
  };
  return {S, d.group, rule};
}

/// r'(g) = r(g)^{-1}; its induced map inverts that of r.
inline AdmissibleMap inverse_admissible(const AdmissibleMap& r) {
  auto base = r.rule;
  return {r.surface, r.group, [base](const PolyPath& p) { return base(p).inverse(); }};
}

/// Per edge: r(g)^{-1} A(g) r(g^{-1}).
inline RestrictedConnection admissible_to_map(const AdmissibleMap& r, const RestrictedConnection& A) {
  std::vector<GroupElement> v;
  for (int e = 0; e < A.graph->size(); ++e) {
    const PolyPath& p = A.graph->edges[e];
    v.push_back(r(p).inverse() * A.at(e) * r(p.reversed()));
  }
  return {A.graph, A.group, std::move(v)};
}

}  // namespace qgeom
