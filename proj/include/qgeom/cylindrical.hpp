#pragma once

// Cylindrical functions as finite sums of per-edge normalized matrix
// functions sqrt(dim rho) rho^m_n, with the exact (Schur) and Monte Carlo
// inner products, subdivision, re-expression over refined graphs, and the
// spin-network predicates.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qgeom/connections.hpp"

namespace qgeom {

/// Factor sqrt(dim rho) rho^m_n on one edge; the trivial irrep is the constant 1.
struct Factor {
  Irrep rho;
  int m = 0, n = 0;

  static Factor trivial(Group g) { return {Irrep::trivial(g), 0, 0}; }
  bool is_trivial() const { return rho.is_trivial(); }
  auto operator<=>(const Factor&) const = default;
};

using FactorVec = std::vector<Factor>;

/// Same edges in the same order and orientation.
inline bool same_edges(const Graph& a, const Graph& b) {
  if (&a == &b) return true;
  if (a.size() != b.size()) return false;
  for (int e = 0; e < a.size(); ++e) {
    if (!a.edges[e].same_geometry(b.edges[e])) return false;
  }
  return true;
}

/// Linear combination c * Factor.
struct FactorTerm {
  cplx c;
  Factor f;
};

/// Linear combination of factors on one edge, merged by factor.
using EdgeSum = std::vector<FactorTerm>;

inline EdgeSum normalized(EdgeSum s) {
  std::map<Factor, cplx> acc;
  for (const auto& t : s) acc[t.f] += t.c;
  EdgeSum out;
  for (const auto& [f, c] : acc) {
    if (c != cplx(0.0, 0.0)) out.push_back({c, f});
  }
  return out;
}

/// Exact L2 pairing of two edge sums: factors are orthonormal.
inline cplx edge_inner(const EdgeSum& a, const EdgeSum& b) {
  cplx s = 0.0;
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (x.f == y.f) s += std::conj(x.c) * y.c;
    }
  }
  return s;
}

/// Finite sum of products over edges of per-edge factor sums. A monomial is
/// pure when every edge carries a single factor with coefficient 1.
class CylFun {
 public:
  struct Monomial {
    cplx coeff;
    std::vector<EdgeSum> edges;  // one per graph edge

    bool pure() const {
      for (const auto& s : edges) {
        if (s.size() != 1 || s.front().c != cplx(1.0, 0.0)) return false;
      }
      return true;
    }
    FactorVec factors() const {
      FactorVec fv;
      for (const auto& s : edges) {
        if (s.size() != 1) throw ValidationError("monomial is not a plain product of factors");
        fv.push_back(s.front().f);
      }
      return fv;
    }
  };

  CylFun() = default;
  CylFun(GraphPtr graph, Group group) : graph_(std::move(graph)), group_(group) {
    if (!graph_) throw ValidationError("cylindrical function needs a graph");
  }

  static CylFun constant(GraphPtr graph, Group group, cplx c = 1.0) {
    CylFun f(graph, group);
    f.add(c, FactorVec(graph->size(), Factor::trivial(group)));
    return f;
  }

  /// Single-monomial state with the given factors.
  static CylFun state(GraphPtr graph, Group group, FactorVec factors, cplx c = 1.0) {
    CylFun f(graph, group);
    f.add(c, std::move(factors));
    return f;
  }

  void add(cplx c, const FactorVec& factors) {
    std::vector<EdgeSum> sums;
    for (const auto& x : factors) sums.push_back({{1.0, x}});
    add_product(c, std::move(sums));
  }

  void add_product(cplx c, std::vector<EdgeSum> sums) {
    if (static_cast<int>(sums.size()) != graph_->size()) {
      throw ValidationError("monomial must carry one factor per edge");
    }
    for (const auto& s : sums) {
      if (s.empty()) throw ValidationError("empty edge sum");
      for (const auto& t : s) {
        const Factor& x = t.f;
        if (x.rho.group() != group_) throw ValidationError("factor irrep belongs to the wrong group");
        if (x.m < 0 || x.n < 0 || x.m >= x.rho.dim() || x.n >= x.rho.dim()) {
          throw ValidationError("factor index out of range");
        }
        if (!std::isfinite(t.c.real()) || !std::isfinite(t.c.imag())) throw ValidationError("coefficient is not finite");
      }
    }
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw ValidationError("coefficient is not finite");
    monos_.push_back({c, std::move(sums)});
  }

  const GraphPtr& graph() const { return graph_; }
  Group group() const { return group_; }
  const std::vector<Monomial>& monomials() const { return monos_; }
  std::size_t size() const { return monos_.size(); }

  /// Single-term edge sums folded into the coefficient, equal factor tuples
  /// merged, exact zeros dropped. Products of longer sums are kept.
  CylFun canonical() const {
    std::map<FactorVec, cplx> acc;
    CylFun r(graph_, group_);
    for (const auto& mo : monos_) {
      Monomial m{mo.coeff, {}};
      bool single = true;
      for (const auto& s : mo.edges) {
        EdgeSum n = normalized(s);
        if (n.empty()) {
          m.coeff = 0.0;
          break;
        }
        if (n.size() == 1) {
          m.coeff *= n.front().c;
          n.front().c = 1.0;
        } else {
          single = false;
        }
        m.edges.push_back(std::move(n));
      }
      if (m.coeff == cplx(0.0, 0.0)) continue;
      if (single) {
        acc[m.factors()] += m.coeff;
      } else {
        r.monos_.push_back(std::move(m));
      }
    }
    std::vector<Monomial> pure;
    for (auto& [k, c] : acc) {
      if (c == cplx(0.0, 0.0)) continue;
      Monomial m{c, {}};
      for (const auto& x : k) m.edges.push_back({{1.0, x}});
      pure.push_back(std::move(m));
    }
    r.monos_.insert(r.monos_.begin(), pure.begin(), pure.end());
    return r;
  }

  /// Every monomial multiplied out into plain products of factors.
  CylFun expanded() const {
    CylFun r(graph_, group_);
    for (const auto& mo : monos_) {
      std::vector<std::pair<cplx, FactorVec>> acc{{mo.coeff, {}}};
      for (const auto& s : mo.edges) {
        std::vector<std::pair<cplx, FactorVec>> next;
        for (const auto& [c, fv] : acc) {
          for (const auto& t : s) {
            FactorVec g = fv;
            g.push_back(t.f);
            next.push_back({c * t.c, std::move(g)});
          }
        }
        acc = std::move(next);
      }
      for (auto& [c, fv] : acc) r.add(c, fv);
    }
    return r.canonical();
  }

  CylFun operator*(cplx s) const {
    CylFun r = *this;
    for (auto& mo : r.monos_) mo.coeff *= s;
    return r;
  }

  CylFun operator+(const CylFun& o) const {
    require_same_graph(o);
    CylFun r = *this;
    r.monos_.insert(r.monos_.end(), o.monos_.begin(), o.monos_.end());
    return r;
  }

  CylFun operator-(const CylFun& o) const { return *this + o * cplx(-1.0, 0.0); }

  /// Applies a linear map, given on single factors, to every sum on one edge.
  template <class F>
  CylFun map_edge(int edge, const F& expand) const {
    CylFun r(graph_, group_);
    for (const auto& mo : monos_) {
      Monomial m = mo;
      EdgeSum s;
      for (const auto& t : mo.edges[edge]) {
        for (const auto& u : expand(t.f)) s.push_back({t.c * u.c, u.f});
      }
      m.edges[edge] = normalized(std::move(s));
      if (m.edges[edge].empty()) continue;
      r.monos_.push_back(std::move(m));
    }
    return r;
  }

  bool same_graph(const CylFun& o) const { return graph_ == o.graph_ || same_edges(*graph_, *o.graph_); }

  void require_same_graph(const CylFun& o) const {
    if (group_ != o.group_) throw ValidationError("cylindrical functions over different groups");
    if (!same_graph(o)) throw ValidationError("cylindrical functions live on different graphs");
  }

 private:
  GraphPtr graph_;
  Group group_ = Group::SU2;
  std::vector<Monomial> monos_;
};

inline cplx factor_value(const Factor& f, const GroupElement& g) {
  if (f.is_trivial()) return 1.0;
  return std::sqrt(static_cast<double>(f.rho.dim())) * f.rho(g)(f.m, f.n);
}

inline cplx evaluate(const CylFun& f, const RestrictedConnection& A) {
  if (!same_edges(*A.graph, *f.graph())) {
    throw ValidationError("connection and function live on different graphs");
  }
  const int E = f.graph()->size();
  // cache represented matrices per (edge, irrep)
  std::vector<std::map<Irrep, CMat>> cache(E);
  cplx total = 0.0;
  for (const auto& mo : f.monomials()) {
    cplx v = mo.coeff;
    for (int e = 0; e < E && v != cplx(0.0, 0.0); ++e) {
      cplx s = 0.0;
      for (const auto& t : mo.edges[e]) {
        const Factor& x = t.f;
        if (x.is_trivial()) {
          s += t.c;
          continue;
        }
        auto it = cache[e].find(x.rho);
        if (it == cache[e].end()) it = cache[e].emplace(x.rho, x.rho(A.at(e))).first;
        s += t.c * std::sqrt(static_cast<double>(x.rho.dim())) * it->second(x.m, x.n);
      }
      v *= s;
    }
    total += v;
  }
  return total;
}

/// Exact L2(mu_0) inner product, conjugate-linear in the first argument. Haar
/// measure factorizes over edges, so each monomial pair is a product of
/// per-edge pairings.
inline cplx inner_product_exact(const CylFun& a, const CylFun& b) {
  a.require_same_graph(b);
  const CylFun x = a.canonical(), y = b.canonical();
  std::map<FactorVec, cplx> pure_x;
  std::vector<const CylFun::Monomial*> rest_x, rest_y;
  for (const auto& mo : x.monomials()) {
    if (mo.pure()) {
      pure_x[mo.factors()] += mo.coeff;
    } else {
      rest_x.push_back(&mo);
    }
  }
  cplx s = 0.0;
  for (const auto& mo : y.monomials()) {
    if (!mo.pure()) {
      rest_y.push_back(&mo);
      continue;
    }
    const auto it = pure_x.find(mo.factors());
    if (it != pure_x.end()) s += std::conj(it->second) * mo.coeff;
  }
  auto pair = [](const CylFun::Monomial& p, const CylFun::Monomial& q) {
    cplx v = std::conj(p.coeff) * q.coeff;
    for (std::size_t e = 0; e < p.edges.size() && v != cplx(0.0, 0.0); ++e) v *= edge_inner(p.edges[e], q.edges[e]);
    return v;
  };
  for (const auto* p : rest_x) {
    for (const auto& q : y.monomials()) s += pair(*p, q);
  }
  for (const auto& p : x.monomials()) {
    if (!p.pure()) continue;
    for (const auto* q : rest_y) s += pair(p, *q);
  }
  return s;
}

inline double norm_sq(const CylFun& f) { return std::max(0.0, inner_product_exact(f, f).real()); }

struct McEstimate {
  cplx value;
  double std_error = 0.0;
};

/// (1/N) sum conj(a(A_i)) b(A_i) over Haar-random connections.
inline McEstimate inner_product_mc(const CylFun& a, const CylFun& b, int samples, Rng& rng) {
  a.require_same_graph(b);
  if (samples < 1000) throw ValidationError("Monte Carlo inner product needs at least 1000 samples");
  cplx sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto A = RestrictedConnection::haar(a.graph(), a.group(), rng);
    const cplx v = std::conj(evaluate(a, A)) * evaluate(b, A);
    sum += v;
    sq += std::norm(v);
  }
  const cplx mean = sum / static_cast<double>(samples);
  const double var = std::max(0.0, sq / samples - std::norm(mean));
  return {mean, std::sqrt(var / samples)};
}

/// Intertwiner with conj(rho(g)) = J rho(g) J^{-1}; image of the fundamental
/// epsilon = [[0,1],[-1,0]] for SU(2).
inline CMat dual_intertwiner(const Irrep& rho) {
  if (rho.group() != Group::SU2) throw UnsupportedError("dual intertwiner is only needed for SU(2)");
  CMat eps = CMat::Zero(2, 2);
  eps(0, 1) = 1.0;
  eps(1, 0) = -1.0;
  return rho(GroupElement::from_matrix(Group::SU2, eps));
}

/// Factor on g^{-1} written as factors on g.
inline std::vector<FactorTerm> reversed_factor(const Factor& f) {
  if (f.is_trivial()) return {{1.0, f}};
  if (f.rho.group() == Group::U1) return {{1.0, {Irrep::u1(-f.rho.label()), 0, 0}}};
  // sqrt(d) rho(h^-1)_{ab} = sum J_{b a'} sqrt(d) rho(h)_{a'b'} (J^-1)_{b'a}
  const CMat J = dual_intertwiner(f.rho);
  const CMat Ji = J.inverse();
  std::vector<FactorTerm> out;
  for (int a2 = 0; a2 < f.rho.dim(); ++a2) {
    for (int b2 = 0; b2 < f.rho.dim(); ++b2) {
      const cplx c = J(f.n, a2) * Ji(b2, f.m);
      if (c != cplx(0.0, 0.0)) out.push_back({c, {f.rho, a2, b2}});
    }
  }
  return out;
}

/// Factor sqrt(d) rho(L h R)_{mn} written as factors on h.
inline std::vector<FactorTerm> sandwiched_factor(const Factor& f, const GroupElement& L, const GroupElement& R) {
  if (f.is_trivial()) return {{1.0, f}};
  const CMat rl = f.rho(L), rr = f.rho(R);
  std::vector<FactorTerm> out;
  for (int r = 0; r < f.rho.dim(); ++r) {
    if (rl(f.m, r) == cplx(0.0, 0.0)) continue;
    for (int s = 0; s < f.rho.dim(); ++s) {
      const cplx c = rl(f.m, r) * rr(s, f.n);
      if (c != cplx(0.0, 0.0)) out.push_back({c, {f.rho, r, s}});
    }
  }
  return out;
}

/// Partial monomial over refined edges: (edge, factor) pairs with a coefficient.
struct PartialMonomial {
  cplx c;
  std::vector<std::pair<int, Factor>> factors;
};

/// Factor on a path written as a sum over the edge word that composes it.
inline std::vector<PartialMonomial> expand_along_word(const Factor& f, const Word& w) {
  if (f.is_trivial()) {
    PartialMonomial pm{1.0, {}};
    for (const auto& u : w) pm.factors.push_back({u.edge, f});
    return {pm};
  }
  const int d = f.rho.dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  // running sums indexed by the open column index
  std::vector<std::vector<PartialMonomial>> open(d);
  auto piece_terms = [&](const EdgeUse& u, int a, int b) {
    const Factor x{f.rho, a, b};
    return u.reversed ? reversed_factor(x) : std::vector<FactorTerm>{{1.0, x}};
  };
  const int L = static_cast<int>(w.size());
  for (int b = 0; b < d; ++b) {
    if (L == 1 && b != f.n) continue;
    for (const auto& t : piece_terms(w[0], f.m, b)) open[b].push_back({t.c, {{w[0].edge, t.f}}});
  }
  for (int i = 1; i < L; ++i) {
    std::vector<std::vector<PartialMonomial>> next(d);
    for (int a = 0; a < d; ++a) {
      for (const auto& pm : open[a]) {
        for (int b = 0; b < d; ++b) {
          if (i == L - 1 && b != f.n) continue;
          for (const auto& t : piece_terms(w[i], a, b)) {
            PartialMonomial q = pm;
            q.c *= t.c * scale;
            q.factors.push_back({w[i].edge, t.f});
            next[b].push_back(std::move(q));
          }
        }
      }
    }
    open = std::move(next);
  }
  return open[f.n];
}

/// Re-expresses f over a refined graph, given for every edge of f's graph the
/// word over the refined edges composing it. Edges kept whole keep their sums.
inline CylFun reexpress(const CylFun& f, GraphPtr refined, const std::vector<Word>& words) {
  if (static_cast<int>(words.size()) != f.graph()->size()) throw ValidationError("one word per edge required");
  CylFun r(refined, f.group());
  const EdgeSum triv{{1.0, Factor::trivial(f.group())}};
  auto is_trivial_sum = [](const EdgeSum& s) { return s.size() == 1 && s.front().f.is_trivial(); };
  struct Partial {
    cplx c;
    std::vector<EdgeSum> sums;
  };
  for (const auto& mo : f.monomials()) {
    std::vector<Partial> acc{{mo.coeff, std::vector<EdgeSum>(refined->size(), triv)}};
    auto place = [&](std::vector<EdgeSum>& sums, int edge, EdgeSum s) {
      if (!is_trivial_sum(sums[edge]) && !is_trivial_sum(s)) throw ValidationError("refined edge covered twice");
      if (!is_trivial_sum(s)) sums[edge] = std::move(s);
    };
    for (int e = 0; e < f.graph()->size(); ++e) {
      const Word& w = words[e];
      const EdgeSum& src = mo.edges[e];
      if (w.size() == 1) {
        EdgeSum s;
        for (const auto& t : src) {
          if (!w[0].reversed) {
            s.push_back(t);
            continue;
          }
          for (const auto& u : reversed_factor(t.f)) s.push_back({t.c * u.c, u.f});
        }
        s = normalized(std::move(s));
        if (s.empty()) {
          acc.clear();
          break;
        }
        for (auto& p : acc) place(p.sums, w[0].edge, s);
        continue;
      }
      std::vector<PartialMonomial> ex;
      for (const auto& t : src) {
        for (auto pm : expand_along_word(t.f, w)) {
          pm.c *= t.c;
          ex.push_back(std::move(pm));
        }
      }
      std::vector<Partial> next;
      next.reserve(acc.size() * ex.size());
      for (const auto& a : acc) {
        for (const auto& b : ex) {
          Partial q = a;
          q.c *= b.c;
          for (const auto& [edge, x] : b.factors) place(q.sums, edge, {{1.0, x}});
          next.push_back(std::move(q));
        }
      }
      acc = std::move(next);
    }
    for (auto& p : acc) r.add_product(p.c, std::move(p.sums));
  }
  return r.canonical();
}

/// Splits one edge at the breakpoints ts (increasing, in (0,1)); the pieces
/// take the edge's slot in order.
inline CylFun subdivide_edge(const CylFun& f, int edge, const std::vector<double>& ts) {
  const Graph& g = *f.graph();
  if (edge < 0 || edge >= g.size()) throw ValidationError("edge index out of range");
  std::vector<double> cuts{0.0};
  for (double t : ts) {
    if (!(t > cuts.back() && t < 1.0)) throw ValidationError("subdivision breakpoints must increase inside (0,1)");
    cuts.push_back(t);
  }
  cuts.push_back(1.0);
  Graph out;
  std::vector<Word> words;
  for (int e = 0; e < g.size(); ++e) {
    if (e != edge) {
      words.push_back({{static_cast<int>(out.edges.size()), false}});
      out.edges.push_back(g.edges[e]);
      out.ids.push_back(g.ids[e]);
      continue;
    }
    Word w;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      w.push_back({static_cast<int>(out.edges.size()), false});
      out.edges.push_back(g.edges[e].sub(cuts[i], cuts[i + 1]));
      out.ids.push_back(g.ids[e] + "." + std::to_string(i));
    }
    words.push_back(std::move(w));
  }
  return reexpress(f, std::make_shared<const Graph>(std::move(out)), words);
}

inline CylFun subdivide_edge(const CylFun& f, int edge, double t) {
  return subdivide_edge(f, edge, std::vector<double>{t});
}

/// Both functions re-expressed over the common refinement of their graphs.
inline std::pair<CylFun, CylFun> align(const CylFun& a, const CylFun& b) {
  if (a.group() != b.group()) throw ValidationError("cylindrical functions over different groups");
  if (a.same_graph(b)) return {a, b};
  std::vector<PolyPath> paths = a.graph()->edges;
  paths.insert(paths.end(), b.graph()->edges.begin(), b.graph()->edges.end());
  RefinedGraph rg = build_graph(paths);
  auto graph = std::make_shared<const Graph>(std::move(rg.graph));
  const auto na = static_cast<std::ptrdiff_t>(a.graph()->size());
  std::vector<Word> wa(rg.words.begin(), rg.words.begin() + na);
  std::vector<Word> wb(rg.words.begin() + na, rg.words.end());
  return {reexpress(a, graph, wa), reexpress(b, graph, wb)};
}

/// Exact inner product after aligning graphs.
inline cplx inner_product(const CylFun& a, const CylFun& b) {
  const auto [x, y] = align(a, b);
  return inner_product_exact(x, y);
}

/// L2 norm by an edge-by-edge orthogonal sweep: the coefficient matrix over
/// (orthonormal partial basis) x (monomials) is QR-reduced after each edge,
/// so cancellations between monomials cost only rounding in the norm itself
/// rather than in its square.
inline double stable_norm(const CylFun& f) {
  const CylFun c = f.canonical();
  const int N = static_cast<int>(c.size());
  if (N == 0) return 0.0;
  // distinct plain products are orthonormal
  if (std::all_of(c.monomials().begin(), c.monomials().end(), [](const auto& m) { return m.pure(); })) {
    double s = 0.0;
    for (const auto& m : c.monomials()) s += std::norm(m.coeff);
    return std::sqrt(s);
  }
  CMat K(1, N);
  for (int i = 0; i < N; ++i) K(0, i) = c.monomials()[i].coeff;
  for (int e = 0; e < c.graph()->size(); ++e) {
    std::map<Factor, int> index;
    for (const auto& mo : c.monomials()) {
      for (const auto& t : mo.edges[e]) index.emplace(t.f, 0);
    }
    int F = 0;
    for (auto& [k, v] : index) v = F++;
    const int r = static_cast<int>(K.rows());
    CMat B = CMat::Zero(static_cast<Eigen::Index>(r) * F, N);
    for (int i = 0; i < N; ++i) {
      for (const auto& t : c.monomials()[i].edges[e]) {
        const int fi = index.at(t.f);
        for (int k = 0; k < r; ++k) B(static_cast<Eigen::Index>(k) * F + fi, i) = K(k, i) * t.c;
      }
    }
    if (B.rows() <= N) {
      K = std::move(B);
      continue;
    }
    Eigen::HouseholderQR<CMat> qr(B);
    const Eigen::Index rows = std::min<Eigen::Index>(B.rows(), N);
    K = qr.matrixQR().topRows(rows).template triangularView<Eigen::Upper>();
  }
  return K.rowwise().sum().norm();
}

/// L2 distance after aligning graphs.
inline double distance(const CylFun& a, const CylFun& b) {
  const auto [x, y] = align(a, b);
  return stable_norm(x - y);
}

/// All single-monomial states with labels of twice-spin (SU2) or |charge| (U1)
/// in [1, max_label] on every edge; with_trivial also allows label 0.
inline std::vector<CylFun> all_gsns(const GraphPtr& graph, Group group, int max_label, bool with_trivial = false) {
  std::vector<Factor> choices;
  if (with_trivial) choices.push_back(Factor::trivial(group));
  for (int l = 1; l <= max_label; ++l) {
    std::vector<Irrep> reps;
    if (group == Group::SU2) {
      reps.push_back(Irrep::su2_twice_spin(l));
    } else {
      reps.push_back(Irrep::u1(l));
      reps.push_back(Irrep::u1(-l));
    }
    for (const auto& rho : reps) {
      for (int m = 0; m < rho.dim(); ++m) {
        for (int n = 0; n < rho.dim(); ++n) choices.push_back({rho, m, n});
      }
    }
  }
  std::vector<CylFun> out;
  const int E = graph->size();
  std::vector<int> idx(E, 0);
  while (true) {
    FactorVec fv;
    for (int e = 0; e < E; ++e) fv.push_back(choices[idx[e]]);
    out.push_back(CylFun::state(graph, group, fv));
    int e = 0;
    while (e < E && ++idx[e] == static_cast<int>(choices.size())) idx[e++] = 0;
    if (e == E) break;
  }
  return out;
}

inline bool is_gsn(const CylFun& f) {
  const CylFun c = f.canonical();
  if (c.size() != 1 || !c.monomials().front().pure() || c.monomials().front().coeff != cplx(1.0, 0.0)) return false;
  for (const auto& x : c.monomials().front().factors()) {
    if (x.is_trivial()) return false;
  }
  return true;
}

enum class OrthogonalityReason { None, DistinctImages, IrrepMismatch, IndexMismatch };

/// Sufficient condition for orthogonality of two spin-network states. A
/// non-None answer implies a vanishing exact inner product.
inline OrthogonalityReason orthogonality_predicate(const CylFun& a, const CylFun& b) {
  if (!is_gsn(a) || !is_gsn(b)) throw ValidationError("orthogonality predicate expects spin-network states");
  const auto [xa, ya] = align(a, b);
  const CylFun x = xa.expanded(), y = ya.expanded();
  const int E = x.graph()->size();
  // images: a refined edge carrying a label in one state and none in the other
  std::vector<int> cov_x(E, 0), cov_y(E, 0);
  std::vector<std::optional<Irrep>> lab_x(E), lab_y(E);
  for (const auto& mo : x.monomials()) {
    for (int e = 0; e < E; ++e) {
      if (!mo.factors()[e].is_trivial()) {
        cov_x[e] = 1;
        lab_x[e] = mo.factors()[e].rho;
      }
    }
  }
  for (const auto& mo : y.monomials()) {
    for (int e = 0; e < E; ++e) {
      if (!mo.factors()[e].is_trivial()) {
        cov_y[e] = 1;
        lab_y[e] = mo.factors()[e].rho;
      }
    }
  }
  if (cov_x != cov_y) return OrthogonalityReason::DistinctImages;
  for (int e = 0; e < E; ++e) {
    if (lab_x[e] && lab_y[e] && *lab_x[e] != *lab_y[e]) return OrthogonalityReason::IrrepMismatch;
  }
  std::map<FactorVec, int> keys;
  for (const auto& mo : x.monomials()) keys[mo.factors()] = 1;
  for (const auto& mo : y.monomials()) {
    if (keys.count(mo.factors())) return OrthogonalityReason::None;
  }
  return OrthogonalityReason::IndexMismatch;
}

/// Rotates a closed path to start at parameter t.
inline PolyPath rotate_loop(const PolyPath& g, double t) {
  if (t <= kParamTol || t >= 1 - kParamTol) return g;
  return g.sub(t, 1.0).then(g.sub(0.0, t));
}

/// Whether a single-monomial state is (gamma, rho)-based.
inline bool gamma_based(const CylFun& T, const PolyPath& gamma, const Irrep& rho) {
  const CylFun c = T.canonical();
  if (c.size() != 1 || !c.monomials().front().pure()) return false;
  const FactorVec fv = c.monomials().front().factors();
  const Graph& g = *T.graph();
  std::vector<PolyPath> candidates{gamma};
  if (gamma.closed()) {
    for (const auto& e : g.edges) {
      for (int j = 0; j < gamma.segments(); ++j) {
        const Vec& a = gamma.vertices()[j];
        const Vec d = gamma.vertices()[j + 1] - a;
        const double u = (e.start() - a).dot(d) / d.squaredNorm();
        if (u < 0 || u > 1 || (a + u * d - e.start()).norm() > kGeomEps) continue;
        candidates.push_back(rotate_loop(gamma, (j + u) / gamma.segments()));
      }
    }
  }
  for (const auto& c : candidates) {
    Word w;
    try {
      w = express(g, c);
    } catch (const DomainError&) {
      continue;
    }
    if (static_cast<int>(w.size()) != g.size()) continue;
    std::vector<int> seen(g.size(), 0);
    bool ok = true;
    for (const auto& u : w) {
      if (u.reversed || seen[u.edge]++) ok = false;
    }
    if (!ok) continue;
    for (const auto& u : w) {
      if (fv[u.edge].rho != rho) ok = false;
    }
    for (std::size_t k = 0; ok && k + 1 < w.size(); ++k) {
      if (fv[w[k + 1].edge].m != fv[w[k].edge].n) ok = false;
    }
    if (ok && gamma.closed() && fv[w.front().edge].m != fv[w.back().edge].n) ok = false;
    if (ok) return true;
  }
  return false;
}

}  // namespace qgeom
