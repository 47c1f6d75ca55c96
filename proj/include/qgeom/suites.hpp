#pragma once

// Named verification suites. Each returns a list of checks
// {name, measured, bound, pass}; the CLI and the acceptance binary share them.

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qgeom/estimates.hpp"
#include "qgeom/generators.hpp"
#include "qgeom/serialization.hpp"
#include "qgeom/stratdiffeo.hpp"

namespace qgeom {

struct Check {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool at_least = false;  // pass means measured >= bound instead of <=
  bool pass = false;
};

inline Check check_le(std::string name, double measured, double bound) {
  return {std::move(name), measured, bound, false, std::isfinite(measured) && measured <= bound};
}

inline Check check_ge(std::string name, double measured, double bound) {
  return {std::move(name), measured, bound, true, std::isfinite(measured) && measured >= bound};
}

using Checks = std::vector<Check>;

inline void append(Checks& a, const Checks& b) { a.insert(a.end(), b.begin(), b.end()); }

inline bool all_pass(const Checks& cs) {
  for (const auto& c : cs) {
    if (!c.pass) return false;
  }
  return !cs.empty();
}

/// Parameter lookup with defaults; every value read is recorded so the
/// report shows the effective parameters.
class Params {
 public:
  explicit Params(json given = json::object()) : given_(std::move(given)) {
    if (!given_.is_object()) throw ValidationError("suite params must be a JSON object");
  }

  template <class T>
  T get(const std::string& key, const T& def) {
    T v = given_.contains(key) ? given_.at(key).get<T>() : def;
    used_[key] = v;
    return v;
  }

  const json& used() const { return used_; }

 private:
  json given_;
  json used_ = json::object();
};

namespace suites {

using gen::Instance;
using gen::random_instance;

// ---------------------------------------------------------------------------
// Haar measure and quasi-flux invariance

/// Largest |z| of the first and second moments of fundamental matrix entries
/// against their Haar values, over all edges (pairs of edges for cross terms).
inline double moment_zscore(const std::vector<std::vector<CMat>>& samples) {
  const std::size_t N = samples.size();
  if (N == 0) return 0.0;
  const int E = static_cast<int>(samples[0].size());
  const int d = static_cast<int>(samples[0][0].rows());
  double worst = 0.0;
  auto z = [&](const std::function<cplx(const std::vector<CMat>&)>& f, cplx expect) {
    cplx s = 0.0;
    double sr = 0.0, si = 0.0;
    for (const auto& x : samples) {
      const cplx v = f(x);
      s += v;
      sr += v.real() * v.real();
      si += v.imag() * v.imag();
    }
    const double n = static_cast<double>(N);
    const cplx m = s / n;
    const double vr = std::max(sr / n - m.real() * m.real(), 0.0), vi = std::max(si / n - m.imag() * m.imag(), 0.0);
    const double er = std::sqrt(vr / n), ei = std::sqrt(vi / n);
    const double zr = er > 0 ? std::abs(m.real() - expect.real()) / er : (m.real() == expect.real() ? 0.0 : 1e300);
    const double zi = ei > 0 ? std::abs(m.imag() - expect.imag()) / ei : (std::abs(m.imag() - expect.imag()) < 1e-15 ? 0.0 : 1e300);
    worst = std::max({worst, zr, zi});
  };
  for (int e = 0; e < E; ++e) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        z([&](const std::vector<CMat>& x) { return x[e](i, j); }, 0.0);
        for (int k = 0; k < d; ++k) {
          for (int l = 0; l < d; ++l) {
            const cplx expect = (i == k && j == l) ? 1.0 / d : 0.0;
            z([&](const std::vector<CMat>& x) { return x[e](i, j) * std::conj(x[e](k, l)); }, expect);
            if (e + 1 < E) z([&](const std::vector<CMat>& x) { return x[e](i, j) * std::conj(x[e + 1](k, l)); }, 0.0);
          }
        }
      }
    }
  }
  return worst;
}

inline Checks haar_checks(Params& p, Rng& rng) {
  const int samples = p.get<int>("samples", 100000);
  Checks out;
  for (Group g : {Group::SU2, Group::U1}) {
    const std::string gn = to_string(g);
    std::vector<std::vector<CMat>> xs;
    std::vector<Irrep> reps = g == Group::SU2
                                  ? std::vector<Irrep>{Irrep::su2_twice_spin(0), Irrep::su2_twice_spin(1), Irrep::su2_twice_spin(2)}
                                  : std::vector<Irrep>{Irrep::u1(0), Irrep::u1(1), Irrep::u1(-2)};
    std::vector<std::vector<cplx>> chars(samples);
    for (int s = 0; s < samples; ++s) {
      const GroupElement a = haar_sample(g, rng), b = haar_sample(g, rng);
      xs.push_back({a.matrix(), b.matrix()});
      for (const auto& r : reps) chars[s].push_back(character(r, a));
    }
    out.push_back(check_le(gn + "_fundamental_moment_max_z", moment_zscore(xs), 4.0));
    double worst = 0.0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      for (std::size_t j = 0; j < reps.size(); ++j) {
        cplx m = 0.0;
        double sq = 0.0;
        for (int s = 0; s < samples; ++s) {
          const cplx v = std::conj(chars[s][i]) * chars[s][j];
          m += v;
          sq += std::norm(v);
        }
        m /= static_cast<double>(samples);
        const double se = std::sqrt(std::max(sq / samples - std::norm(m), 0.0) / samples);
        const double dev = std::abs(m - (i == j ? 1.0 : 0.0));
        worst = std::max(worst, se > 0 ? dev / se : (dev < 1e-12 ? 0.0 : 1e300));
      }
    }
    out.push_back(check_le(gn + "_character_orthonormality_max_z", worst, 4.0));
  }
  return out;
}

/// Moments of edge holonomies before and after the quasi-flux action.
inline Checks quasi_flux_checks(Params& p, Rng& rng) {
  const int samples = p.get<int>("samples", 100000);
  Checks out;
  for (Group g : {Group::SU2, Group::U1}) {
    const Instance in = random_instance(rng, g);
    const SurfaceRefinement ref = refine_for_surface(*in.graph, in.S);
    std::vector<std::vector<CMat>> before, after;
    for (int s = 0; s < samples; ++s) {
      const RestrictedConnection A = RestrictedConnection::haar(ref.graph, g, rng);
      const RestrictedConnection B = apply_flux(in.W, A);
      std::vector<CMat> a, b;
      for (int e = 0; e < ref.graph->size(); ++e) {
        a.push_back(A.at(e).matrix());
        b.push_back(B.at(e).matrix());
      }
      before.push_back(std::move(a));
      after.push_back(std::move(b));
    }
    out.push_back(check_le(to_string(g) + "_moments_before_max_z", moment_zscore(before), 4.0));
    out.push_back(check_le(to_string(g) + "_moments_after_flux_max_z", moment_zscore(after), 4.0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spin networks

inline GraphPtr three_edge_graph() {
  return make_graph(Graph({PolyPath({gen::v2(0, 0), gen::v2(1, 0)}), PolyPath({gen::v2(0, 0), gen::v2(0, 1)}),
                           PolyPath({gen::v2(-1, -1), gen::v2(0, 0)})}));
}

inline Checks gsn_checks(Params& p, Rng& rng) {
  const int max_label = p.get<int>("max_label", 2);
  const int mc_samples = p.get<int>("mc_samples", 100000);
  const int mc_pairs = p.get<int>("mc_pairs", 6);
  const GraphPtr g = three_edge_graph();
  const std::vector<CylFun> states = all_gsns(g, Group::SU2, max_label, true);
  const std::size_t n = states.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const cplx v = inner_product_exact(states[i], states[j]);
      worst = std::max(worst, std::abs(v - (i == j ? 1.0 : 0.0)));
    }
  }
  Checks out{check_le("gram_identity_max_dev_" + std::to_string(n) + "_states", worst, 1e-12)};
  double zmax = 0.0;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (int k = 0; k < mc_pairs; ++k) {
    const std::size_t i = pick(rng), j = k % 2 == 0 ? i : pick(rng);
    const McEstimate mc = inner_product_mc(states[i], states[j], mc_samples, rng);
    const cplx exact = inner_product_exact(states[i], states[j]);
    const double dev = std::abs(mc.value - exact);
    zmax = std::max(zmax, mc.std_error > 0 ? dev / mc.std_error : (dev < 1e-12 ? 0.0 : 1e300));
  }
  out.push_back(check_le("monte_carlo_agreement_max_sigma", zmax, 3.0));
  return out;
}

inline Checks subdivision_checks(Params& p, Rng& rng) {
  const int instances = p.get<int>("subdivision_instances", 100);
  double eval = 0.0, inner = 0.0, expansion = 0.0;
  for (int k = 0; k < instances; ++k) {
    const Group grp = k % 4 == 3 ? Group::U1 : Group::SU2;
    const GraphPtr g = gen::random_graph(rng, 2);
    const CylFun f = gen::random_cylfun(g, grp, rng);
    const CylFun h = gen::random_cylfun(g, grp, rng);
    const int e = static_cast<int>(rng() % static_cast<unsigned>(g->size()));
    const double t = gen::uniform(rng, 0.1, 0.9);
    const CylFun fs = subdivide_edge(f, e, t), hs = subdivide_edge(h, e, t);
    for (int s = 0; s < 3; ++s) {
      const RestrictedConnection A = RestrictedConnection::haar(fs.graph(), grp, rng);
      const Word w{{e, false}, {e + 1, false}};
      std::vector<GroupElement> coarse;
      for (int q = 0; q < g->size(); ++q) {
        if (q < e) coarse.push_back(A.at(q));
        if (q == e) coarse.push_back(holonomy(A, w));
        if (q > e) coarse.push_back(A.at(q + 1));
      }
      eval = std::max(eval, std::abs(evaluate(fs, A) - evaluate(f, RestrictedConnection{g, grp, coarse})));
    }
    inner = std::max(inner, std::abs(inner_product(fs, hs) - inner_product(f, h)));
    // a single spin-network factor splits into d terms with coefficient 1/sqrt(d)
    const Irrep rho = gen::random_irrep(grp, rng, 3);
    const Factor fac{rho, static_cast<int>(rng() % rho.dim()), static_cast<int>(rng() % rho.dim())};
    const CylFun T = CylFun::state(make_graph(Graph({PolyPath({gen::v2(0, 0), gen::v2(1, 0.5)})})), grp, {fac});
    const CylFun Ts = subdivide_edge(T, 0, t).canonical();
    const double c = 1.0 / std::sqrt(static_cast<double>(rho.dim()));
    double dev = Ts.size() == static_cast<std::size_t>(rho.dim()) ? 0.0 : 1e300;
    for (const auto& mo : Ts.monomials()) {
      const FactorVec fv = mo.factors();
      const bool shape = fv[0].rho == rho && fv[1].rho == rho && fv[0].m == fac.m && fv[1].n == fac.n && fv[0].n == fv[1].m;
      dev = std::max(dev, shape ? std::abs(mo.coeff - c) : 1e300);
    }
    expansion = std::max(expansion, dev);
  }
  return {check_le("subdivision_evaluation_max_dev", eval, 1e-12),
          check_le("subdivision_inner_product_max_dev", inner, 1e-12),
          check_le("subdivision_gsn_expansion_max_dev", expansion, 1e-12)};
}

// ---------------------------------------------------------------------------
// Weyl operators

inline Checks weyl_unitarity_checks(Params& p, Rng& rng) {
  const int instances = p.get<int>("instances", 100);
  double unit = 0.0, adj = 0.0, rev = 0.0;
  for (int k = 0; k < instances; ++k) {
    const Group g = k % 5 == 4 ? Group::U1 : Group::SU2;
    const Instance in = random_instance(rng, g, 1 + k % 2);
    const CylFun f = gen::random_cylfun(in.graph, g, rng);
    const CylFun h = gen::random_cylfun(in.graph, g, rng);
    const CylFun wf = apply_weyl(in.W, f);
    unit = std::max(unit, std::abs(inner_product(wf, apply_weyl(in.W, h)) - inner_product(f, h)));
    const WeylDescriptor reversed = make_weyl(in.S.inverse(), in.W.labels);
    adj = std::max(adj, std::abs(inner_product(wf, h) - inner_product(f, apply_weyl(reversed, h))));
    rev = std::max(rev, distance(apply_weyl(adjoint_weyl(in.W), wf), f));
  }
  return {check_le("unitarity_max_dev", unit, 1e-12), check_le("adjoint_is_orientation_reversal_max_dev", adj, 1e-12),
          check_le("adjoint_inverts_max_dev", rev, 1e-12)};
}

/// |w_t T - T| from the engine against sqrt(2 - 2 Re rho(e^{tX})_{mm}) for an
/// edge starting on the surface, on t = 2^{-k}.
inline Checks regularity_checks(Params& p, Rng&) {
  const int kmax = p.get<int>("regularity_kmax", 20);
  const OrientedSurface S({Simplex::oriented({gen::v2(-2, 0), gen::v2(2, 0)})});
  const PolyPath edge({gen::v2(0.3, 0), gen::v2(0.1, 1)});
  const GraphPtr graph = make_graph(Graph({edge}));
  const CMat X = cplx(0, 1) * pauli(3);
  double dev = 0.0, increases = 0.0, last = 1e300;
  for (int l = 1; l <= 2; ++l) {
    const Factor fac{Irrep::su2_twice_spin(l), 0, 0};
    const CylFun T = CylFun::state(graph, Group::SU2, {fac});
    double prev = 1e300;
    for (int k = 0; k <= kmax; ++k) {
      const double t = std::ldexp(1.0, -k);
      const WeylDescriptor W = weyl_one_param(S, Group::SU2, X, t);
      const double direct = distance(apply_weyl(W, T), T);
      const double formula = std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap_starting_edge(W, edge, fac).real()));
      dev = std::max(dev, std::abs(direct - formula));
      if (!(direct < prev)) increases += 1;
      prev = direct;
    }
    last = std::min(last, prev);
  }
  return {check_le("regularity_two_routes_max_dev", dev, 1e-12),
          check_le("regularity_non_decreasing_steps", increases, 0.0),
          check_le("regularity_value_at_smallest_t", last, 1e-5)};
}

inline Checks weyl_algebra_checks(Params& p, Rng& rng) {
  const int instances = p.get<int>("instances", 100);
  double mult = 0.0, comm = 0.0, disj = 0.0;
  for (int k = 0; k < instances; ++k) {
    const Instance in = random_instance(rng, Group::SU2);
    const WeylDescriptor W1 = make_weyl(in.S, FluxLabels::constant(in.S, gen::torus_element(gen::uniform(rng, -3, 3))));
    const WeylDescriptor W2 = make_weyl(in.S, FluxLabels::constant(in.S, gen::torus_element(gen::uniform(rng, -3, 3))));
    const ComposeReport r = compose_check(W1, W2, {gen::random_cylfun(in.graph, Group::SU2, rng)});
    mult = std::max(mult, r.multiplicative);
    comm = std::max(comm, r.commutator);
    const GraphPtr graph = gen::random_graph(rng, 3);
    const OrientedSurface S1 = gen::random_surface(rng, 1, -0.5);
    const OrientedSurface S2 = gen::random_surface(rng, 1, 0.5);
    const WeylDescriptor D1 = make_weyl(S1, gen::random_labels(S1, Group::SU2, rng));
    const WeylDescriptor D2 = make_weyl(S2, gen::random_labels(S2, Group::SU2, rng));
    disj = std::max(disj, compose_check(D1, D2, {gen::random_cylfun(graph, Group::SU2, rng)}).commutator);
  }
  return {check_le("commuting_labels_multiplicative_max_dev", mult, 1e-12),
          check_le("commuting_labels_commutator_max_dev", comm, 1e-12),
          check_le("disjoint_surfaces_commutator_max_dev", disj, 1e-12)};
}

inline Checks covariance_checks(Params& p, Rng& rng) {
  const int instances = p.get<int>("instances", 50);
  double graph_dev = 0.0, gauge_dev = 0.0;
  for (int k = 0; k < instances; ++k) {
    const Instance in = random_instance(rng, Group::SU2);
    const CylFun f = gen::random_cylfun(in.graph, Group::SU2, rng);
    const AffineMap phi = gen::random_affine(rng);
    const CylFun lhs = apply_graphomorphism(phi, apply_weyl(in.W, apply_graphomorphism(phi.inverse(), f)));
    graph_dev = std::max(graph_dev, distance(lhs, apply_weyl(transport_weyl(phi, in.W), f)));

    const SurfaceRefinement ref = refine_for_surface(*in.graph, in.S);
    GaugeTransform g{Group::SU2, {}};
    for (const auto& e : ref.graph->edges) {
      for (const Vec& q : {e.start(), e.end()}) {
        if (g.at(q).distance(GroupElement::identity(Group::SU2)) == 0.0) g.support.emplace_back(q, haar_sample(Group::SU2, rng));
      }
    }
    // same function on the S-adapted graph, so gauging does not re-split edge sums
    const CylFun fr = reexpress(f, ref.graph, ref.words);
    const CylFun a = apply_gauge(g, apply_weyl(in.W, apply_gauge(inverse_gauge(g), fr)));
    gauge_dev = std::max(gauge_dev, distance(a, apply_weyl(gauge_weyl(g, in.W), f)));
  }
  return {check_le("graphomorphism_conjugation_max_dev", graph_dev, 1e-12),
          check_le("gauge_conjugation_max_dev", gauge_dev, 1e-12)};
}

// ---------------------------------------------------------------------------
// Minimal decompositions

inline std::optional<double> crossing_param_2d(const Vec& p0, const Vec& p1, const Vec& q0, const Vec& q1) {
  const double a = p1(0) - p0(0), b = -(q1(0) - q0(0));
  const double c = p1(1) - p0(1), d = -(q1(1) - q0(1));
  const double det = a * d - b * c;
  if (det == 0.0) return std::nullopt;
  const double rx = q0(0) - p0(0), ry = q0(1) - p0(1);
  const double u = (rx * d - b * ry) / det, v = (a * ry - c * rx) / det;
  if (u < 0 || u > 1 || v < 0 || v > 1) return std::nullopt;
  return u;
}

inline int distinct_interior(std::vector<double> ts) {
  std::sort(ts.begin(), ts.end());
  int n = 0;
  double last = -1;
  for (double t : ts) {
    if (t <= 1e-9 || t >= 1 - 1e-9) continue;
    if (n == 0 || t - last > 1e-9) ++n;
    last = t;
  }
  return n;
}

inline Checks decomposition_checks(Params& p, Rng& rng, const Scene* scene) {
  const int pairs = p.get<int>("pairs", 200);
  std::uniform_real_distribution<double> ud(-2.0, 2.0), uu(0.02, 0.98);
  int checked = 0, draws = 0, count_mismatch = 0, not_refined = 0, not_minimal = 0, internal = 0;
  while (checked < pairs && draws < 20 * pairs) {
    ++draws;
    std::vector<Vec> pv;
    for (int i = 0; i < 4; ++i) pv.push_back(gen::v2(-2.0 + i + 0.4 * uu(rng), ud(rng)));
    const PolyPath g(pv);
    std::vector<Simplex> simp;
    for (int i = 0; i < 3; ++i) {
      const double y = -1.5 + 1.5 * i;
      simp.push_back(Simplex::oriented({gen::v2(ud(rng), y + 0.15 * ud(rng)), gen::v2(ud(rng), y + 0.15 * ud(rng))}));
    }
    OrientedSurface S;
    Decomposition d;
    try {
      S = OrientedSurface(simp);
      d = decompose_minimal(g, S);
    } catch (const ValidationError&) {
      continue;
    } catch (const PrecisionError&) {
      continue;
    }
    ++checked;
    std::vector<double> oracle;
    for (int j = 0; j < g.segments(); ++j) {
      for (const auto& s : simp) {
        const auto u = crossing_param_2d(pv[j], pv[j + 1], s.vertices()[0], s.vertices()[1]);
        if (u) oracle.push_back((j + *u) / g.segments());
      }
    }
    if (static_cast<int>(d.breakpoints().size()) != distinct_interior(oracle)) ++count_mismatch;
    if (d.has_internal()) ++internal;
    std::vector<double> cuts = oracle;
    for (int k = 0; k < 3; ++k) cuts.push_back(uu(rng));
    if (!refines(decompose_at(g, cuts, S.hits(g)), d)) ++not_refined;
    const auto bps = d.breakpoints();
    for (std::size_t k = 0; k < bps.size(); ++k) {
      std::vector<double> fewer = bps;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(k));
      try {
        decompose_at(g, fewer, S.hits(g));
        ++not_minimal;
      } catch (const DomainError&) {
      }
    }
  }
  Checks out{check_ge("random_pairs_checked", checked, pairs),
             check_le("breakpoint_count_mismatches", count_mismatch, 0),
             check_le("unexpected_internal_pieces", internal, 0),
             check_le("perturbed_decompositions_not_refining", not_refined, 0),
             check_le("removable_breakpoints", not_minimal, 0)};
  if (scene) {
    int scene_fail = 0;
    for (const auto& path : scene->paths) {
      for (const auto& S : scene->surfaces) {
        const Decomposition d = decompose_minimal(path, S);
        std::vector<double> cuts = d.breakpoints();
        cuts.push_back(uu(rng));
        if (!refines(decompose_refined(path, S, {cuts.back()}), d)) ++scene_fail;
      }
    }
    out.push_back(check_le("scene_pairs_not_refined", scene_fail, 0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stratified maps

inline Checks strat_checks(Params& p, Rng& rng, const Scene* scene = nullptr) {
  const int samples = p.get<int>("samples", 10000);
  Checks out;
  const double tau = 1.0, eps = 0.2, a = 0.5;
  for (int n : {2, 3, 4}) {
    const StratMap m = bump_map(-tau, tau, eps, a, n);
    Vec x = Vec::Zero(n), y = Vec::Zero(n), l = Vec::Zero(n);
    x(0) = -tau;
    y(0) = -tau;
    y(1) = a;
    l(0) = -tau - eps;
    out.push_back(check_le("bump_n" + std::to_string(n) + "_anchor_dev", (m(x) - y).norm(), 1e-12));
    out.push_back(check_le("bump_n" + std::to_string(n) + "_left_anchor_dev", (m(l) - l).norm(), 0.0));
  }
  const Minkowski tri = Minkowski::simplex({gen::v2(1, 0), gen::v2(-0.5, 0.9), gen::v2(-0.5, -0.9)});
  Mat X = Mat::Zero(3, 3);
  X(0, 1) = -1.1;
  X(1, 0) = 1.1;
  std::vector<std::pair<std::string, StratMap>> maps{
      {"bump_n2", bump_map(-1, 1, 0.2, 0.5, 2)},
      {"bump_n3", bump_map(-1, 1, 0.2, 0.5, 3)},
      {"bump_n4", bump_map(0.2, 1.4, 0.15, 0.3, 4)},
      {"scaling_ball_up", scaling_map(Minkowski::ball(1), 2.0, 0.1, 3)},
      {"scaling_ball_down", scaling_map(Minkowski::ball(1), 0.5, 0.3, 2)},
      {"scaling_simplex", scaling_map(tri, 1.7, 0.2, 2)},
      {"interp_ball", interp_two_surfaces(Minkowski::ball(1), Minkowski::ball(std::sqrt(2.0)), 0.35, 1.4,
                                          1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 3)},
      {"rotation", rotation_map(X, 2.0, 1.0)},
      {"path_rotation", path_rotation_map(0.7, 1, 0.25)},
      {"winding_J2", winding_map(WindingParams{{0.3, 0.7}, {0, 0}, {0.5}, 0.4, 0.08})},
      {"composite", compose({bump_map(-1, 1, 0.2, 0.5, 3), rotation_map(X, 1.5, 0.8)})}};
  if (scene) {
    if (scene->extra.contains("maps")) {
      int k = 0;
      for (const auto& j : scene->extra.at("maps")) maps.emplace_back("scene_map" + std::to_string(k++), stratmap_from_json(j));
    }
    if (scene->extra.contains("winding")) maps.emplace_back("scene_winding", stratmap_from_json(scene->extra.at("winding")));
  }
  for (const auto& [name, m] : maps) {
    const StratReport r = verify_stratified(m, samples, rng);
    out.push_back(check_le(name + "_boundary_mismatch", r.boundary_mismatch, 1e-9));
    out.push_back(check_le(name + "_roundtrip", r.roundtrip, 1e-10));
    out.push_back(check_le(name + "_identity_outside_violations", r.support_violations, 0));
    out.push_back(check_le(name + "_singular_jacobians", r.singular_jacobians, 0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Casimir estimates

inline Checks casimir_checks(Params& p, Rng& rng) {
  const int draws = p.get<int>("draws", 1000);
  const int grid_points = p.get<int>("grid_points", 20);
  const LieBasis b = canonical_basis(Group::SU2);
  const Irrep half = Irrep::su2_twice_spin(1);
  Checks out;
  double cos_dev = 0.0;
  for (int k = 1; k <= grid_points; ++k) {
    const double t = 2.0 * k / grid_points;
    cos_dev = std::max(cos_dev, (xi(half, b, t) - std::cos(t) * CMat::Identity(2, 2)).norm());
  }
  out.push_back(check_le("xi_equals_cos_max_dev", cos_dev, 1e-12));
  const CasimirGapReport gap = casimir_gap_check(half, b, 0.5, {0.2, 0.1, 0.05, 0.025});
  out.push_back(check_le("gap_ratio_rel_dev_from_1_12", std::abs(gap.ratios.back() * 12 - 1), 0.1));
  double approach = 0.0;
  for (std::size_t i = 1; i < gap.ratios.size(); ++i) {
    if (std::abs(gap.ratios[i] - 1.0 / 12) >= std::abs(gap.ratios[i - 1] - 1.0 / 12)) approach += 1;
  }
  out.push_back(check_le("gap_ratio_non_approaching_steps", approach, 0));
  for (int k = 1; k <= 3; ++k) {
    out.push_back(check_le("difference_derivative_order_" + std::to_string(k), gap.derivatives[k], gap.derivative_tol[k]));
  }
  int viol = 0;
  for (int N = 1; N <= 8; ++N) viol += opprod_bound_check(N, draws / 8 + 1, rng).violations;
  out.push_back(check_le("opprod_bound_violations", viol, 0));
  for (int J : {2, 4, 6}) {
    int v = 0;
    for (const Irrep& r : {half, Irrep::su2_twice_spin(2)}) {
      v += tensor_casimir_check(r, b, J, 0.5, {0.3, 0.1, 0.05}, draws / 6 + 1, rng).bound.violations;
    }
    out.push_back(check_le("tensor_casimir_J" + std::to_string(J) + "_violations", v, 0));
  }
  return out;
}

inline Checks winding_checks(Params& p, Rng& rng) {
  const double t = p.get<double>("t", 0.1);
  const std::vector<int> Js = p.get<std::vector<int>>("J", {2, 4});
  const int twice_spin = p.get<int>("twice_spin", 1);
  const LieBasis b = canonical_basis(Group::SU2);
  Checks out;
  for (int J : Js) {
    const WindingReport r = winding_average_check(Irrep::su2_twice_spin(twice_spin), b, J, t, 0, rng);
    const std::string k = "J" + std::to_string(J);
    out.push_back(check_le(k + "_average_vs_xi_tensor_dev", r.identity_deviation, 1e-12));
    out.push_back(check_le(k + "_engine_vs_matrix_dev", r.engine_deviation, 1e-12));
    out.push_back(check_le(k + "_sup_difference_vs_bound", std::max(r.lhs_sup, r.lhs_upper), r.bound));
    out.push_back(check_ge(k + "_bound_margin", r.margin(), 0.0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Nice surfaces and irreducibility evidence

inline NiceConfig nice_config_from_scene(const Scene& s) {
  if (s.surfaces.size() < 2) throw ValidationError("nice-surface scene needs two surfaces");
  NiceConfig c{s.graph(), 0, {s.surfaces[0], s.surfaces[1]}};
  if (s.extra.contains("gamma")) c.edge = c.graph->index_of(s.extra.at("gamma").get<std::string>());
  return c;
}

inline Checks nice_surface_checks(Params& p, Rng& rng, const Scene* scene) {
  const int pairs = p.get<int>("pairs", 20);
  const NiceConfig c = scene ? nice_config_from_scene(*scene) : nice_segment_config(2);
  Checks out;
  for (int l : {1, 2}) {
    const Irrep rho = Irrep::su2_twice_spin(l);
    double dev = 0.0;
    for (int k = 0; k < pairs; ++k) {
      FactorVec fv(c.graph->size(), Factor::trivial(Group::SU2));
      fv[c.edge] = {rho, static_cast<int>(rng() % rho.dim()), static_cast<int>(rng() % rho.dim())};
      dev = std::max(dev, nice_surface_inner_check(c, fv, haar_sample(Group::SU2, rng), haar_sample(Group::SU2, rng)).deviation);
    }
    out.push_back(check_le("inner_product_formula_" + rho.name() + "_max_dev", dev, 1e-12));
  }
  double ab = 0.0;
  for (int k = 0; k < pairs; ++k) {
    FactorVec fv(c.graph->size(), Factor::trivial(Group::U1));
    fv[c.edge] = {Irrep::u1(1), 0, 0};
    const GroupElement g = haar_sample(Group::U1, rng);
    const NiceInnerReport r = nice_surface_inner_check(c, fv, g, g);
    ab = std::max({ab, r.abelian_deviation, r.deviation});
  }
  out.push_back(check_le("abelian_eigenvalue_max_dev", ab, 1e-12));
  return out;
}

/// Character zeros of g^2 and the resulting orthonormal family over five punctures.
inline Checks character_zero_checks(Params&, Rng&) {
  Checks out;
  const NiceConfig five = nice_segment_config(5);
  for (int l : {1, 2}) {
    const Irrep rho = Irrep::su2_twice_spin(l);
    const GroupElement g = find_character_zero(rho);
    out.push_back(check_le("character_zero_" + rho.name(), std::abs(character(rho, g.pow(2))), 1e-10));
    const CMat G = nice_family_gram(five, {Factor{rho, 0, 0}}, g);
    out.push_back(check_le("five_puncture_gram_identity_" + rho.name(), (G - CMat::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-12));
  }
  return out;
}

inline Checks splitting_checks(Params& p, Rng&) {
  SplittingParams sp;
  sp.tau0 = p.get<double>("tau0", 1.0);
  sp.tau2 = p.get<double>("tau2", 0.3);
  sp.tau4 = p.get<double>("tau4", 0.0777);
  sp.eps = p.get<double>("eps", 0.01);
  const std::vector<double> ts = p.get<std::vector<double>>("ts", {0.3});
  const SplittingReport r = splitting_witness(Irrep::su2_twice_spin(1), canonical_basis(Group::SU2), ts, sp);
  Checks out;
  for (const auto& row : r.rows) {
    const std::string k = "t" + std::to_string(row.t) + "_J" + std::to_string(row.J);
    out.push_back(check_le(k + "_mu0_expectation", row.expectation, 1e-12));
    out.push_back(check_le(k + "_vacuum_shift", row.vacuum_shift, 0.0));
    out.push_back(check_ge(k + "_averaged_gap", row.averaged_gap, sp.eps));
    out.push_back(check_ge(k + "_nonconstant_part", row.nonconstant, sp.eps));
  }
  return out;
}

}  // namespace suites

// ---------------------------------------------------------------------------
// Registry

struct SuiteReport {
  std::string suite;
  json params;
  std::uint64_t seed = 0;
  Checks checks;
  double wallclock = 0.0;

  bool pass() const { return all_pass(checks); }

  json to_json(bool with_wallclock = true) const {
    json cs = json::array();
    for (const auto& c : checks) {
      cs.push_back({{"name", c.name},
                    {"measured", c.measured},
                    {"bound", c.bound},
                    {"relation", c.at_least ? ">=" : "<="},
                    {"pass", c.pass}});
    }
    json j{{"schema", kSchema}, {"suite", suite}, {"params", params}, {"seed", seed}, {"checks", cs}, {"pass", pass()}};
    if (with_wallclock) j["wallclock"] = wallclock;
    return j;
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"haar",       "gsn-orthonormality", "weyl-unitarity", "weyl-algebra-laws",
                                              "covariance", "strat-diffeo",       "casimir",        "winding",
                                              "nice-surface", "splitting",        "decomposition"};
  return names;
}

inline SuiteReport run_suite(const std::string& name, const json& params, std::uint64_t seed, const Scene* scene = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  Params p(params);
  Rng rng(seed);
  Checks cs;
  if (name == "haar") {
    append(cs, suites::haar_checks(p, rng));
    append(cs, suites::quasi_flux_checks(p, rng));
  } else if (name == "gsn-orthonormality") {
    append(cs, suites::gsn_checks(p, rng));
    append(cs, suites::subdivision_checks(p, rng));
  } else if (name == "weyl-unitarity") {
    append(cs, suites::weyl_unitarity_checks(p, rng));
    append(cs, suites::regularity_checks(p, rng));
  } else if (name == "weyl-algebra-laws") {
    cs = suites::weyl_algebra_checks(p, rng);
  } else if (name == "covariance") {
    cs = suites::covariance_checks(p, rng);
  } else if (name == "strat-diffeo") {
    cs = suites::strat_checks(p, rng, scene);
  } else if (name == "casimir") {
    cs = suites::casimir_checks(p, rng);
  } else if (name == "winding") {
    cs = suites::winding_checks(p, rng);
  } else if (name == "nice-surface") {
    append(cs, suites::nice_surface_checks(p, rng, scene));
    append(cs, suites::character_zero_checks(p, rng));
  } else if (name == "splitting") {
    cs = suites::splitting_checks(p, rng);
  } else if (name == "decomposition") {
    cs = suites::decomposition_checks(p, rng, scene);
  } else {
    throw ValidationError("unknown suite '" + name + "'");
  }
  SuiteReport r{name, p.used(), seed, std::move(cs), 0.0};
  r.wallclock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// ---------------------------------------------------------------------------
// Scene templates

inline json scene_template(const std::string& kind) {
  using gen::v2;
  using gen::v3;
  Scene s;
  if (kind == "crossing") {
    s.dimension = 2;
    s.path_ids = {"gamma"};
    s.paths = {PolyPath({v2(-1, -0.5), v2(1, 0.5)})};
    s.surface_ids = {"S"};
    s.surfaces = {OrientedSurface({Simplex::oriented({v2(-1, 0), v2(1, 0)})})};
  } else if (kind == "nice-surface") {
    s.dimension = 3;
    s.path_ids = {"gamma"};
    s.paths = {PolyPath({v3(0, 0, 0), v3(1, 0, 0)})};
    for (int i = 1; i <= 2; ++i) {
      const double x = i / 3.0, r = 0.2;
      const Vec A = v3(x, -r, -r), B = v3(x, r, -r), C = v3(x, r, r), D = v3(x, -r, r);
      s.surface_ids.push_back("S" + std::to_string(i));
      s.surfaces.push_back(OrientedSurface({Simplex({A, B, C}, v3(1, 0, 0)), Simplex({A, C, D}, v3(1, 0, 0), {2})}));
    }
    s.extra["gamma"] = "gamma";
  } else if (kind == "winding") {
    const double a = 0.4, eps = 0.08;
    const std::vector<double> taus{0.3, 0.7}, zc{0.5};
    s.dimension = 3;
    s.path_ids = {"gamma"};
    s.paths = {PolyPath({v3(0, 0, 0), v3(1, 0, 0)})};
    s.surface_ids = {"S0"};
    const Vec A = v3(0, a, 0.45), B = v3(1, a, 0.45), C = v3(1, a, 0.55), D = v3(0, a, 0.55);
    s.surfaces = {OrientedSurface({Simplex({A, B, C}, v3(0, 1, 0)), Simplex({A, C, D}, v3(0, 1, 0), {2})})};
    s.extra["chart_box"] = {{"lo", {taus.front() - eps, -2 * eps, -2 * eps}}, {"hi", {taus.back() + eps, 2 * a + 2 * eps, 2 * eps}}};
    s.extra["winding"] = {{"family", "winding"}, {"taus", taus}, {"levels", {0, 0}}, {"z_centers", zc}, {"a", a}, {"eps", eps}};
  } else if (kind == "diffeo") {
    s.dimension = 3;
    s.extra["maps"] = json::array(
        {{{"family", "bump"}, {"tau1", -1.0}, {"tau2", 1.0}, {"eps", 0.2}, {"a", 0.5}, {"n", 3}},
         {{"family", "scaling"}, {"body", {{"ball", 1.0}}}, {"lambda", 2.0}, {"eps", 0.1}, {"n", 3}},
         {{"family", "rotation"}, {"X", {{0.0, -1.1, 0.0}, {1.1, 0.0, 0.0}, {0.0, 0.0, 0.0}}}, {"r1", 2.0}, {"r2", 1.0}}});
  } else {
    throw ValidationError("unknown template kind '" + kind + "'");
  }
  return scene_to_json(s);
}

}  // namespace qgeom
