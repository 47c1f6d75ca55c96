#pragma once

// Casimir averages Xi(t), the operator-product and tensor-Casimir bounds, the
// winding-average identity, nice-surface inner products and the splitting
// witness.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "qgeom/weylops.hpp"

namespace qgeom {

inline double op_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

/// (1/2n) sum_i (rho(e^{tX_i}) + rho(e^{-tX_i})).
inline CMat xi(const Irrep& rho, const LieBasis& basis, double t) {
  if (rho.group() != basis.group) throw ValidationError("xi: basis and irrep of different groups");
  const int d = rho.dim();
  if (t == 0.0) return CMat::Identity(d, d);
  CMat acc = CMat::Zero(d, d);
  for (const CMat& x : basis.elements) acc += rho(exp_alg(x, t)) + rho(exp_alg(x, -t));
  return acc / (2.0 * static_cast<double>(basis.size()));
}

struct XiProfile {
  Irrep rho;
  LieBasis basis;
  std::vector<double> ts;
  std::vector<CMat> values;
};

inline XiProfile xi_profile(const Irrep& rho, const LieBasis& basis, std::vector<double> ts) {
  XiProfile p{rho, basis, std::move(ts), {}};
  for (double t : p.ts) p.values.push_back(xi(rho, basis, t));
  return p;
}

/// Haar-random unitary of size d.
inline CMat random_unitary(int d, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMat z(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) z(i, j) = cplx(n(rng), n(rng));
  }
  Eigen::HouseholderQR<CMat> qr(z);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Casimir gap

struct CasimirGapReport {
  double lambda = 0.0;
  std::vector<double> ts;
  std::vector<double> ratios;        // |Xi(t) - e^{-lambda t^2/2} I| / t^4
  double eta_hat = 0.0;              // sup of the ratios
  std::vector<double> derivatives;   // orders 0..3 of the difference at 0
  std::vector<double> derivative_tol;
  bool pass = false;
};

/// Difference D(t) = Xi(t) - e^{-lambda t^2/2} I; its first four Taylor
/// coefficients vanish. Derivatives use Richardson-extrapolated central
/// differences with base step h.
inline CasimirGapReport casimir_gap_check(const Irrep& rho, const LieBasis& basis, double t0,
                                          const std::vector<double>& grid, double h = 1e-2) {
  if (!(t0 > 0)) throw ValidationError("casimir gap: t0 must be positive");
  CasimirGapReport r;
  r.lambda = casimir_eigenvalue(basis, rho);
  const int d = rho.dim();
  auto D = [&](double t) -> CMat {
    return xi(rho, basis, t) - std::exp(-0.5 * r.lambda * t * t) * CMat::Identity(d, d);
  };
  bool finite = true;
  for (double t : grid) {
    if (t == 0.0 || std::abs(t) >= t0) throw ValidationError("casimir gap: grid must lie in (-t0, t0) without 0");
    const double g = op_norm(D(t)) / std::pow(t, 4);
    finite = finite && std::isfinite(g);
    r.ts.push_back(t);
    r.ratios.push_back(g);
    r.eta_hat = std::max(r.eta_hat, g);
  }
  auto central = [&](int k, double s) -> CMat {
    switch (k) {
      case 1:
        return (D(s) - D(-s)) / (2 * s);
      case 2:
        return (D(s) - 2.0 * D(0) + D(-s)) / (s * s);
      default:
        return (D(2 * s) - 2.0 * D(s) + 2.0 * D(-s) - D(-2 * s)) / (2 * s * s * s);
    }
  };
  r.derivatives.push_back(op_norm(D(0)));
  for (int k = 1; k <= 3; ++k) {
    const CMat rich = (4.0 * central(k, h / 2) - central(k, h)) / 3.0;
    r.derivatives.push_back(op_norm(rich));
  }
  r.derivative_tol = {0.0, 1e-8, 1e-6, 1e-5};
  bool deriv_ok = true;
  for (int k = 0; k <= 3; ++k) deriv_ok = deriv_ok && r.derivatives[k] <= r.derivative_tol[k];
  r.pass = finite && deriv_ok;
  return r;
}

// ---------------------------------------------------------------------------
// Operator-product bound

struct BoundReport {
  int draws = 0;
  int violations = 0;
  double max_lhs = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();  // rhs - lhs
  bool pass() const { return violations == 0; }
};

/// |prod A_i B_i - prod A B_i| <= prod (1 + |A_i - A|) - 1 for contractions
/// A, B_i. Half of the draws take A_i close to A.
inline BoundReport opprod_bound_check(int N, int draws, Rng& rng, int dim = 3) {
  if (N < 1 || N > 8) throw ValidationError("opprod bound: N must be in [1, 8]");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BoundReport rep;
  for (int k = 0; k < draws; ++k) {
    const CMat A = u(rng) * random_unitary(dim, rng);
    const bool near = k % 2 == 0;
    CMat lhs1 = CMat::Identity(dim, dim), lhs2 = lhs1;
    double rhs = 1.0;
    for (int i = 0; i < N; ++i) {
      const CMat B = u(rng) * random_unitary(dim, rng);
      const CMat Ai = near ? CMat(A + 1e-2 * u(rng) * random_unitary(dim, rng)) : CMat(u(rng) * random_unitary(dim, rng));
      lhs1 = lhs1 * Ai * B;
      lhs2 = lhs2 * A * B;
      rhs *= 1.0 + op_norm(Ai - A);
    }
    rhs -= 1.0;
    const double lhs = op_norm(lhs1 - lhs2);
    ++rep.draws;
    rep.max_lhs = std::max(rep.max_lhs, lhs);
    rep.min_margin = std::min(rep.min_margin, rhs - lhs);
    if (lhs > rhs + 1e-14) ++rep.violations;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Tensor-Casimir bound

struct TensorCasimirReport {
  BoundReport bound;
  double eta_used = 0.0;  // eta_hat with the 5% safety factor
  CasimirGapReport gap;
};

/// Samples g_0..g_J and checks
/// |rho(g0) prod (Xi(t) rho(g_j)) - e^{-lambda J t^2/2} prod rho(g_j)| <= e^{eta J t^4} - 1.
inline TensorCasimirReport tensor_casimir_check(const Irrep& rho, const LieBasis& basis, int J, double t0,
                                                const std::vector<double>& grid, int samples, Rng& rng) {
  if (J < 2 || J > 6 || J % 2 != 0) throw ValidationError("tensor casimir: J must be even and at most 6");
  TensorCasimirReport rep;
  rep.gap = casimir_gap_check(rho, basis, t0, grid);
  rep.eta_used = 1.05 * rep.gap.eta_hat;
  const double lambda = rep.gap.lambda;
  for (double t : grid) {
    const CMat X = xi(rho, basis, t);
    const double damp = std::exp(-0.5 * lambda * J * t * t);
    const double rhs = std::expm1(rep.eta_used * J * std::pow(t, 4));
    for (int s = 0; s < samples; ++s) {
      CMat a = rho(haar_sample(rho.group(), rng));
      CMat b = a;
      for (int j = 1; j <= J; ++j) {
        const CMat g = rho(haar_sample(rho.group(), rng));
        a = a * X * g;
        b = b * g;
      }
      const double lhs = op_norm(a - damp * b);
      ++rep.bound.draws;
      rep.bound.max_lhs = std::max(rep.bound.max_lhs, lhs);
      rep.bound.min_margin = std::min(rep.bound.min_margin, rhs - lhs);
      if (lhs > rhs + 1e-14) ++rep.bound.violations;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Sup norms

namespace detail {

inline GroupElement element_from_params(Group g, const double* p) {
  if (g == Group::U1) return GroupElement::u1(p[0]);
  // hyperspherical angles on S^3
  const double a0 = std::cos(p[0]);
  const double a1 = std::sin(p[0]) * std::cos(p[1]);
  const double a2 = std::sin(p[0]) * std::sin(p[1]) * std::cos(p[2]);
  const double a3 = std::sin(p[0]) * std::sin(p[1]) * std::sin(p[2]);
  return GroupElement::su2_from_quaternion(a0, a1, a2, a3);
}

inline int params_per_edge(Group g) { return g == Group::U1 ? 1 : 3; }

struct Maximum {
  double value = 0.0;
  std::vector<GroupElement> at;
};

/// max |f| over G^E by random restarts and compass search.
inline Maximum maximize_abs(const std::function<cplx(const std::vector<GroupElement>&)>& f, int E, Group g, Rng& rng,
                           int restarts) {
  const int k = params_per_edge(g);
  const int P = E * k;
  auto value = [&](const std::vector<double>& p) {
    std::vector<GroupElement> els;
    for (int e = 0; e < E; ++e) els.push_back(element_from_params(g, p.data() + e * k));
    return std::abs(f(els));
  };
  std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
  Maximum best;
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> p(P);
    if (r == 0) {
      std::fill(p.begin(), p.end(), 0.0);
    } else {
      for (auto& x : p) x = u(rng);
    }
    double v = value(p);
    for (double step = 0.5; step > 1e-9; step *= 0.5) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (int i = 0; i < P; ++i) {
          for (double s : {step, -step}) {
            p[i] += s;
            const double w = value(p);
            if (w > v) {
              v = w;
              improved = true;
            } else {
              p[i] -= s;
            }
          }
        }
      }
    }
    if (v >= best.value || best.at.empty()) {
      best.value = v;
      best.at.clear();
      for (int e = 0; e < E; ++e) best.at.push_back(element_from_params(g, p.data() + e * k));
    }
  }
  return best;
}

}  // namespace detail

/// sup |f| over the group. Single-product functions factor over edges; each
/// factor and the general case use a compass search (accuracy about 1e-6).
inline double sup_norm(const CylFun& f, Rng& rng, int restarts = 8) {
  const CylFun c = f.canonical();
  const Group g = c.group();
  if (c.size() == 0) return 0.0;
  if (c.size() == 1) {
    const auto& mo = c.monomials().front();
    double s = std::abs(mo.coeff);
    for (const auto& sum : mo.edges) {
      if (sum.size() == 1 && sum.front().f.is_trivial()) {
        s *= std::abs(sum.front().c);
        continue;
      }
      auto fe = [&](const std::vector<GroupElement>& h) {
        cplx v = 0.0;
        for (const auto& term : sum) v += term.c * factor_value(term.f, h[0]);
        return v;
      };
      s *= detail::maximize_abs(fe, 1, g, rng, restarts).value;
    }
    return s;
  }
  const GraphPtr graph = c.graph();
  auto fa = [&](const std::vector<GroupElement>& h) { return evaluate(c, RestrictedConnection{graph, g, h}); };
  return detail::maximize_abs(fa, graph->size(), g, rng, restarts).value;
}

// ---------------------------------------------------------------------------
// Winding average

namespace detail {

/// Sum of many functions on one graph, merged by pure monomial.
class Accumulator {
 public:
  Accumulator(GraphPtr graph, Group group) : graph_(std::move(graph)), group_(group) {}

  void add(const CylFun& f, cplx scale = 1.0) {
    const CylFun e = f.expanded();
    for (const auto& mo : e.monomials()) acc_[mo.factors()] += scale * mo.coeff;
  }

  CylFun result(cplx scale = 1.0) const {
    CylFun out(graph_, group_);
    for (const auto& [fv, c] : acc_) {
      if (c != cplx(0.0, 0.0)) out.add(scale * c, fv);
    }
    return out;
  }

 private:
  GraphPtr graph_;
  Group group_;
  std::map<FactorVec, cplx> acc_;
};

}  // namespace detail

/// Edge factor sqrt(d) (M rho(h))_{mn} for a matrix M.
inline std::vector<FactorTerm> left_multiplied(const Factor& f, const CMat& M) {
  if (f.is_trivial()) return {{1.0, f}};
  std::vector<FactorTerm> out;
  for (int r = 0; r < f.rho.dim(); ++r) {
    if (M(f.m, r) != cplx(0.0, 0.0)) out.push_back({M(f.m, r), {f.rho, r, f.n}});
  }
  return out;
}

/// T = sqrt(d) rho_{kl} on [0,1] along the first axis, split into J+1
/// equal pieces.
inline CylFun chain_state(const Irrep& rho, int k, int l, int J, int dim = 2) {
  Vec a = Vec::Zero(dim), b = Vec::Zero(dim);
  b(0) = 1.0;
  const GraphPtr g = make_graph(Graph({PolyPath::segment(a, b)}, {"gamma"}));
  const CylFun T = CylFun::state(g, rho.group(), {Factor{rho, k, l}});
  if (J == 0) return T;
  std::vector<double> cuts;
  for (int j = 1; j <= J; ++j) cuts.push_back(static_cast<double>(j) / (J + 1));
  return subdivide_edge(T, 0, cuts);
}

/// Chain state with rho(e^{(-1)^{j+s} X_{a(j)} t}) inserted on piece j.
inline CylFun winding_pullback(const CylFun& chain, const Irrep& rho, const LieBasis& basis,
                               const std::vector<int>& assignment, double t, int s) {
  const int n = static_cast<int>(basis.size());
  CylFun out = chain;
  for (std::size_t j = 1; j <= assignment.size(); ++j) {
    const int i = assignment[j - 1];
    const double sign = ((static_cast<int>(j) + s) % 2 == 0) ? 1.0 : -1.0;
    const double sx = i < n ? sign : -sign;  // X_{i+n} = -X_i
    const CMat M = rho(exp_alg(basis.elements[i % n], sx * t));
    out = out.map_edge(static_cast<int>(j), [&](const Factor& f) { return left_multiplied(f, M); });
  }
  return out.canonical();
}

struct WindingReport {
  long long assignments = 0;
  double identity_deviation = 0.0;  // brute-force average vs tensor-of-Xi form
  double engine_deviation = 0.0;    // engine vs matrix form at the maximizer
  double lhs_sup = 0.0;             // sup of the averaged difference
  double lhs_upper = 0.0;           // operator-norm bound through the Xi gap
  double bound = 0.0;               // |T|_inf (e^{eta J t^4} - 1)
  double t_sup = 0.0;
  double eta_used = 0.0;
  double margin() const { return bound - std::max(lhs_sup, lhs_upper); }
  bool pass() const {
    return identity_deviation <= 1e-12 && engine_deviation <= 1e-12 && lhs_sup <= bound + 1e-12 && lhs_upper <= bound + 1e-12;
  }
};

/// Brute-force average over all (2n)^J assignments compared against the
/// tensor-of-Xi form, then the sup-norm bound. eta_grid feeds the gap estimate
/// and is extended by t itself.
inline WindingReport winding_average_check(const Irrep& rho, const LieBasis& basis, int J, double t, int s, Rng& rng,
                                           std::vector<double> eta_grid = {0.2, 0.1, 0.05}, int k = 0) {
  if (J < 2 || J % 2 != 0) throw ValidationError("winding average: J must be positive and even");
  const int n2 = 2 * static_cast<int>(basis.size());
  const double count = std::pow(static_cast<double>(n2), J);
  if (count > 1e6) throw UnsupportedError("winding average: (2n)^J exceeds 1e6 assignments");
  WindingReport rep;
  rep.assignments = static_cast<long long>(count);
  const CylFun chain = chain_state(rho, k, k, J);
  const int d = rho.dim();

  std::vector<int> a(J, 0);
  detail::Accumulator acc(chain.graph(), chain.group());
  while (true) {
    acc.add(winding_pullback(chain, rho, basis, a, t, s));
    int j = 0;
    while (j < J && ++a[j] == n2) a[j++] = 0;
    if (j == J) break;
  }
  const CylFun avg = acc.result(1.0 / count);

  const CMat X = xi(rho, basis, t);
  CylFun tens = chain;
  for (int j = 1; j <= J; ++j) tens = tens.map_edge(j, [&](const Factor& f) { return left_multiplied(f, X); });
  tens = tens.expanded().canonical();
  rep.identity_deviation = distance(avg, tens);

  const double tmax = std::max(std::abs(t), 1e-3);
  std::vector<double> grid = eta_grid;
  if (t != 0.0) grid.push_back(t);
  double t0 = 0.0;
  for (double x : grid) t0 = std::max(t0, std::abs(x));
  const CasimirGapReport gap = casimir_gap_check(rho, basis, 1.01 * std::max(t0, tmax), grid);
  rep.eta_used = 1.05 * gap.eta_hat;
  const double damp = std::exp(-0.5 * gap.lambda * J * t * t);
  const CylFun diff = (tens + chain * (-damp)).canonical();
  rep.t_sup = sup_norm(chain, rng);
  // sup of the difference through its matrix form; the engine value is
  // compared at the maximizer
  auto matrix_form = [&](const std::vector<GroupElement>& h) {
    CMat x = rho(h[0]), y = x;
    for (int j = 1; j <= J; ++j) {
      const CMat r = rho(h[j]);
      x = x * X * r;
      y = y * r;
    }
    return std::sqrt(static_cast<double>(d)) * (x - damp * y)(k, k);
  };
  const detail::Maximum mx = detail::maximize_abs(matrix_form, J + 1, rho.group(), rng, 8);
  rep.lhs_sup = mx.value;
  rep.engine_deviation =
      std::abs(evaluate(diff, RestrictedConnection{diff.graph(), rho.group(), mx.at}) - matrix_form(mx.at));
  const double delta = op_norm(X - std::exp(-0.5 * gap.lambda * t * t) * CMat::Identity(d, d));
  rep.lhs_upper = std::sqrt(static_cast<double>(d)) * (std::pow(1.0 + delta, J) - 1.0);
  rep.bound = rep.t_sup * std::expm1(rep.eta_used * J * std::pow(t, 4));
  return rep;
}

// ---------------------------------------------------------------------------
// Nice surfaces

/// Graph plus one distinguished edge and surfaces each crossing it once,
/// transversally, away from the other edges.
struct NiceConfig {
  GraphPtr graph;
  int edge = 0;
  std::vector<OrientedSurface> surfaces;
};

/// Validates niceness; returns the crossing sign of each surface.
inline std::vector<int> nice_signs(const NiceConfig& c) {
  std::vector<int> signs;
  std::vector<double> params;
  for (const auto& S : c.surfaces) {
    for (int e = 0; e < c.graph->size(); ++e) {
      const auto ps = punctures(c.graph->edges[e], S);
      if (e != c.edge) {
        if (!ps.empty() || decompose_minimal(c.graph->edges[e], S).has_internal()) {
          throw DomainError("configuration not nice: surface meets another edge");
        }
        continue;
      }
      if (ps.size() != 1 || !ps[0].is_puncture || ps[0].t <= kParamTol || ps[0].t >= 1 - kParamTol) {
        throw DomainError("configuration not nice: need one interior transversal crossing");
      }
      for (double q : params) {
        if (std::abs(q - ps[0].t) <= kParamTol) throw DomainError("configuration not nice: punctures coincide");
      }
      params.push_back(ps[0].t);
      signs.push_back(ps[0].sign());
    }
  }
  return signs;
}

/// k vertical crossings of the segment (0,0)-(1,0), each with sign +1.
inline NiceConfig nice_segment_config(int k) {
  if (k < 1) throw ValidationError("need at least one surface");
  Vec a(2), b(2);
  a << 0, 0;
  b << 1, 0;
  NiceConfig c{make_graph(Graph({PolyPath::segment(a, b)}, {"gamma"})), 0, {}};
  for (int i = 0; i < k; ++i) {
    const double x = (i + 1.0) / (k + 1.0);
    Vec p(2), q(2);
    p << x, -0.25;
    q << x, 0.25;
    OrientedSurface S({Simplex::oriented({p, q})});
    if (punctures(c.graph->edges[0], S).at(0).sign() < 0) S = S.inverse();
    c.surfaces.push_back(std::move(S));
  }
  return c;
}

struct NiceInnerReport {
  cplx engine;
  cplx formula;
  double deviation = 0.0;
  double abelian_deviation = 0.0;  // |w T - rho(g^2) T| on the first surface, abelian only
  bool pass() const { return deviation <= 1e-12 && abelian_deviation <= 1e-12; }
};

/// <w^{S1}_{g1} T, w^{S2}_{g2} T> against conj(chi(g1^2)) chi(g2^2) / d^2.
inline NiceInnerReport nice_surface_inner_check(const NiceConfig& c, const FactorVec& factors, const GroupElement& g1,
                                                const GroupElement& g2) {
  if (c.surfaces.size() != 2) throw ValidationError("nice surface check needs exactly two surfaces");
  const std::vector<int> sg = nice_signs(c);
  const Factor& f = factors.at(c.edge);
  if (f.is_trivial()) throw ValidationError("distinguished edge must carry a nontrivial irrep");
  const CylFun T = CylFun::state(c.graph, g1.group(), factors);
  const WeylDescriptor W1 = make_weyl(c.surfaces[0], FluxLabels::constant(c.surfaces[0], g1));
  const WeylDescriptor W2 = make_weyl(c.surfaces[1], FluxLabels::constant(c.surfaces[1], g2));
  const CylFun a = apply_weyl(W1, T), b = apply_weyl(W2, T);
  NiceInnerReport r;
  r.engine = inner_product(a, b);
  const double d = f.rho.dim();
  r.formula = std::conj(character(f.rho, g1.pow(2 * sg[0]))) * character(f.rho, g2.pow(2 * sg[1])) / (d * d);
  r.deviation = std::abs(r.engine - r.formula);
  if (f.rho.is_abelian()) r.abelian_deviation = distance(a, T * f.rho(g1.pow(2 * sg[0]))(0, 0));
  return r;
}

/// Gram matrix of {w^{S_i}_g T} computed with the exact engine.
inline CMat nice_family_gram(const NiceConfig& c, const FactorVec& factors, const GroupElement& g) {
  nice_signs(c);
  const CylFun T = CylFun::state(c.graph, g.group(), factors);
  std::vector<CylFun> fs;
  for (const auto& S : c.surfaces) fs.push_back(apply_weyl(make_weyl(S, FluxLabels::constant(S, g)), T));
  const int k = static_cast<int>(fs.size());
  CMat G(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) G(i, j) = inner_product(fs[i], fs[j]);
  }
  return G;
}

// ---------------------------------------------------------------------------
// Splitting witness

struct SplittingParams {
  double tau0 = 1.0;
  double tau2 = 1.0;  // e^{-lambda tau/2} < eps for tau > tau2
  double tau4 = 1.0;  // |T|_inf (e^{eta tau} - 1) < eps for tau < tau4
  double eps = 0.25;
  int s = 0;
};

struct SplittingRow {
  double t = 0.0;
  int J = 0;
  long long assignments = 0;
  double expectation = 0.0;    // max |<1, (w_t - 1)(phi T) 1>|
  double nonconstant = 0.0;    // max |(w_t - 1)(phi T)|
  double averaged_gap = 0.0;   // |avg_phi phi^{-1}(w_t) T - T|
  double vacuum_shift = 0.0;   // |w_t 1 - 1|
};

struct SplittingReport {
  double J0 = 0.0;
  double t0 = 0.0;
  std::vector<SplittingRow> rows;
  bool separated = false;  // averaged_gap >= eps on every row
};

/// Admissible even J for t: J0/t^3 <= J <= 2 J0/t^3, or 0 if none.
inline int admissible_J(double J0, double t) {
  const double lo = J0 / std::pow(std::abs(t), 3), hi = 2 * lo;
  int J = static_cast<int>(std::ceil(lo - 1e-12));
  if (J % 2) ++J;
  if (J < 2) J = 2;
  return J <= hi + 1e-12 ? J : 0;
}

/// Winding enumeration for f = 1 + T in the fundamental representation with
/// psi = 1. Expectations vanish identically under mu_0; the report keeps the
/// norm of the nonconstant part as the separation.
inline SplittingReport splitting_witness(const Irrep& rho, const LieBasis& basis, const std::vector<double>& ts,
                                         const SplittingParams& p) {
  if (rho.dim() != fundamental_dim(rho.group()) || rho.is_trivial()) {
    throw ValidationError("splitting witness runs in the fundamental representation");
  }
  SplittingReport rep;
  rep.J0 = 0.5 * std::sqrt(2 * p.tau2 * p.tau4);
  rep.t0 = std::min({rep.J0 / p.tau2, std::cbrt(rep.J0), p.tau0});
  const int n2 = 2 * static_cast<int>(basis.size());
  rep.separated = true;
  for (double t : ts) {
    if (!(std::abs(t) > 0 && std::abs(t) < rep.t0)) throw DomainError("splitting witness: t outside (0, t0)");
    const int J = admissible_J(rep.J0, t);
    if (J == 0) throw DomainError("splitting witness: no admissible J for t; grid too coarse");
    const double count = std::pow(static_cast<double>(n2), J);
    if (count > 1e6) throw UnsupportedError("splitting witness: (2n)^J exceeds 1e6 assignments");
    SplittingRow row{t, J, static_cast<long long>(count)};
    const CylFun chain = chain_state(rho, 0, 0, J);
    const CylFun one = CylFun::constant(chain.graph(), chain.group());
    const CylFun f = one + chain;
    std::vector<int> a(J, 0);
    detail::Accumulator acc(chain.graph(), chain.group());
    while (true) {
      const CylFun w = one + winding_pullback(chain, rho, basis, a, t, p.s);
      const CylFun diff = (w + f * (-1.0)).canonical();
      row.expectation = std::max(row.expectation, std::abs(inner_product(one, diff)));
      row.nonconstant = std::max(row.nonconstant, stable_norm(diff));
      row.vacuum_shift = std::max(row.vacuum_shift, distance(winding_pullback(one, rho, basis, a, t, p.s), one));
      acc.add(w + one * (-1.0));
      int j = 0;
      while (j < J && ++a[j] == n2) a[j++] = 0;
      if (j == J) break;
    }
    const CylFun avg = acc.result(1.0 / count);
    row.averaged_gap = distance(avg, chain);
    rep.separated = rep.separated && row.averaged_gap >= p.eps && row.vacuum_shift == 0.0;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace qgeom
