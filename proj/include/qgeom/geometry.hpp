#pragma once

// Piecewise-linear paths and oriented simplicial surfaces: membership, the
// minimal S-admissible decomposition, intersection functions, punctures and
// graph refinement.
//
// Numerics are double precision with side tests at kGeomEps. Values that land
// in (kGeomEps, kAmbiguity] are neither clearly zero nor clearly nonzero and
// raise PrecisionError instead of being guessed.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgeom/errors.hpp"

namespace qgeom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kGeomEps = 1e-9;
inline constexpr double kAmbiguity = 1e-6;
inline constexpr double kParamTol = 1e-10;

namespace detail {

// -1, 0, +1 with the ambiguity band rejected.
inline int robust_sign(double v, const char* what) {
  const double a = std::abs(v);
  if (a <= kGeomEps) return 0;
  if (a <= kAmbiguity) throw PrecisionError(std::string("ambiguous side test: ") + what);
  return v > 0 ? 1 : -1;
}

}  // namespace detail

/// Finite polyline in R^k with uniform parametrization over its segments.
class PolyPath {
 public:
  PolyPath() = default;
  explicit PolyPath(std::vector<Vec> vertices) : v_(std::move(vertices)) {
    if (v_.size() < 2) throw ValidationError("path needs at least two vertices");
    const auto k = v_.front().size();
    if (k < 1) throw ValidationError("path vertices must be nonempty vectors");
    for (const Vec& p : v_) {
      if (p.size() != k) throw ValidationError("path vertices have inconsistent dimensions");
      if (!p.allFinite()) throw ValidationError("path vertex is not finite");
    }
    for (std::size_t i = 0; i + 1 < v_.size(); ++i) {
      if ((v_[i + 1] - v_[i]).norm() <= kGeomEps) throw ValidationError("consecutive path vertices coincide");
    }
  }

  static PolyPath segment(const Vec& a, const Vec& b) { return PolyPath({a, b}); }

  int dim() const { return static_cast<int>(v_.front().size()); }
  int segments() const { return static_cast<int>(v_.size()) - 1; }
  const std::vector<Vec>& vertices() const { return v_; }
  const Vec& start() const { return v_.front(); }
  const Vec& end() const { return v_.back(); }
  bool closed() const { return (v_.front() - v_.back()).norm() <= kGeomEps; }

  Vec point(double t) const {
    const auto [j, u] = locate(t);
    return v_[j] + u * (v_[j + 1] - v_[j]);
  }

  /// Segment index and local parameter for a global parameter.
  std::pair<int, double> locate(double t) const {
    const int L = segments();
    t = std::clamp(t, 0.0, 1.0);
    int j = std::min(static_cast<int>(std::floor(t * L)), L - 1);
    return {j, t * L - j};
  }

  PolyPath reversed() const {
    std::vector<Vec> r(v_.rbegin(), v_.rend());
    return PolyPath(std::move(r));
  }

  /// Restriction to [t0, t1], reparametrized.
  PolyPath sub(double t0, double t1) const {
    if (!(t0 < t1)) throw ValidationError("sub-path needs t0 < t1");
    const int L = segments();
    std::vector<Vec> out{point(t0)};
    for (int j = 1; j < L; ++j) {
      const double tj = static_cast<double>(j) / L;
      if (tj > t0 + kParamTol && tj < t1 - kParamTol) out.push_back(v_[j]);
    }
    out.push_back(point(t1));
    std::vector<Vec> cleaned{out.front()};
    for (std::size_t i = 1; i < out.size(); ++i) {
      if ((out[i] - cleaned.back()).norm() > kGeomEps) cleaned.push_back(out[i]);
    }
    if (cleaned.size() < 2) throw DomainError("sub-path degenerates to a point");
    return PolyPath(std::move(cleaned));
  }

  /// Concatenation; the end of this path must equal the start of the other.
  PolyPath then(const PolyPath& o) const {
    if ((end() - o.start()).norm() > kGeomEps) throw DomainError("paths do not compose");
    std::vector<Vec> r = v_;
    r.insert(r.end(), o.v_.begin() + 1, o.v_.end());
    return PolyPath(std::move(r));
  }

  /// Vertex list with straight-through collinear vertices removed.
  std::vector<Vec> canonical_vertices() const {
    std::vector<Vec> r{v_.front()};
    for (std::size_t i = 1; i + 1 < v_.size(); ++i) {
      const Vec a = v_[i] - r.back();
      const Vec b = v_[i + 1] - v_[i];
      const double cross = std::sqrt(std::max(0.0, a.squaredNorm() * b.squaredNorm() - std::pow(a.dot(b), 2)));
      if (cross > kGeomEps * a.norm() * b.norm() || a.dot(b) < 0) r.push_back(v_[i]);
    }
    r.push_back(v_.back());
    return r;
  }

  bool same_geometry(const PolyPath& o) const {
    const auto a = canonical_vertices();
    const auto b = o.canonical_vertices();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].size() != b[i].size() || (a[i] - b[i]).norm() > 1e-8) return false;
    }
    return true;
  }

  /// Edge condition: no self-intersections except possibly a closed loop.
  bool is_edge() const;

 private:
  std::vector<Vec> v_;
};

/// Intersection of two segments [a,a+b] and [c,c+e] in local parameters.
struct SegmentHit {
  enum Kind { None, Point, Overlap } kind = None;
  double u0 = 0, u1 = 0;  // on the first segment
  double v0 = 0, v1 = 0;  // on the second segment, matching u0/u1
};

inline SegmentHit intersect_segments(const Vec& p0, const Vec& p1, const Vec& q0, const Vec& q1) {
  SegmentHit h;
  const Vec b = p1 - p0, e = q1 - q0, w = q0 - p0;
  const double bb = b.dot(b), ee = e.dot(e), be = b.dot(e);
  const double denom = bb * ee - be * be;
  if (denom <= 1e-14 * bb * ee) {
    // parallel: collinear iff q0 lies on the line of p
    const double s = w.dot(b) / bb;
    if ((w - s * b).norm() > kGeomEps) return h;
    double a0 = s, a1 = (q1 - p0).dot(b) / bb;
    const bool flip = a0 > a1;
    if (flip) std::swap(a0, a1);
    const double lo = std::max(0.0, a0), hi = std::min(1.0, a1);
    const double tol = kGeomEps / std::sqrt(bb);
    if (lo > hi + tol) return h;
    auto to_v = [&](double u) { return (p0 + u * b - q0).dot(e) / ee; };
    if (hi - lo <= tol) {
      h.kind = SegmentHit::Point;
      h.u0 = h.u1 = 0.5 * (lo + hi);
      h.v0 = h.v1 = std::clamp(to_v(h.u0), 0.0, 1.0);
      return h;
    }
    h.kind = SegmentHit::Overlap;
    h.u0 = lo;
    h.u1 = hi;
    h.v0 = std::clamp(to_v(lo), 0.0, 1.0);
    h.v1 = std::clamp(to_v(hi), 0.0, 1.0);
    return h;
  }
  const double wb = w.dot(b), we = w.dot(e);
  double u = (wb * ee - we * be) / denom;
  double v = (wb * be - we * bb) / denom;
  const double tu = kGeomEps / std::sqrt(bb), tv = kGeomEps / std::sqrt(ee);
  if (u < -tu || u > 1 + tu || v < -tv || v > 1 + tv) return h;
  u = std::clamp(u, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  if ((p0 + u * b - (q0 + v * e)).norm() > kGeomEps) return h;
  h.kind = SegmentHit::Point;
  h.u0 = h.u1 = u;
  h.v0 = h.v1 = v;
  return h;
}

inline bool PolyPath::is_edge() const {
  const int L = segments();
  const bool loop = closed();
  for (int i = 0; i < L; ++i) {
    for (int j = i + 1; j < L; ++j) {
      const SegmentHit h = intersect_segments(v_[i], v_[i + 1], v_[j], v_[j + 1]);
      if (h.kind == SegmentHit::None) continue;
      if (h.kind == SegmentHit::Overlap) return false;
      const bool adjacent = (j == i + 1) && h.u0 >= 1 - kParamTol && h.v0 <= kParamTol;
      const bool wrap = loop && i == 0 && j == L - 1 && L > 2 && h.u0 <= kParamTol && h.v0 >= 1 - kParamTol;
      if (!adjacent && !wrap) return false;
    }
  }
  return true;
}

/// Interval of a parameter line with open/closed ends. lo == hi means a point.
struct ParamInterval {
  double lo = 0, hi = 0;
  bool lo_closed = true, hi_closed = true;

  bool is_point() const { return hi - lo <= kParamTol; }
  bool contains(double t) const {
    if (t > lo + kParamTol && t < hi - kParamTol) return true;
    if (std::abs(t - lo) <= kParamTol) return lo_closed;
    if (std::abs(t - hi) <= kParamTol) return hi_closed;
    return false;
  }
};

/// Sorted disjoint union of intervals.
class ParamSet {
 public:
  void add(ParamInterval iv) { raw_.push_back(iv); dirty_ = true; }

  const std::vector<ParamInterval>& intervals() const {
    if (dirty_) normalize();
    return merged_;
  }

  bool contains(double t) const {
    for (const auto& iv : intervals()) {
      if (iv.contains(t)) return true;
    }
    return false;
  }

  /// Whether [0, d) lies in the set for some d > 0.
  bool contains_initial() const {
    const auto& ivs = intervals();
    return !ivs.empty() && ivs.front().lo <= kParamTol && !ivs.front().is_point();
  }
  bool contains_final() const {
    const auto& ivs = intervals();
    return !ivs.empty() && ivs.back().hi >= 1 - kParamTol && !ivs.back().is_point();
  }

 private:
  void normalize() const {
    std::vector<ParamInterval> v = raw_;
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      if (std::abs(a.lo - b.lo) > kParamTol) return a.lo < b.lo;
      return a.lo_closed && !b.lo_closed;
    });
    merged_.clear();
    for (const auto& iv : v) {
      if (!merged_.empty()) {
        ParamInterval& cur = merged_.back();
        const bool overlaps = iv.lo < cur.hi - kParamTol;
        const bool touches = std::abs(iv.lo - cur.hi) <= kParamTol && (cur.hi_closed || iv.lo_closed);
        if (overlaps || touches) {
          if (std::abs(iv.lo - cur.lo) <= kParamTol) cur.lo_closed = cur.lo_closed || iv.lo_closed;
          if (iv.hi > cur.hi + kParamTol) {
            cur.hi = iv.hi;
            cur.hi_closed = iv.hi_closed;
          } else if (std::abs(iv.hi - cur.hi) <= kParamTol) {
            cur.hi_closed = cur.hi_closed || iv.hi_closed;
          }
          continue;
        }
      }
      merged_.push_back(iv);
    }
    dirty_ = false;
  }

  std::vector<ParamInterval> raw_;
  mutable std::vector<ParamInterval> merged_;
  mutable bool dirty_ = false;
};

/// Affine simplex of dimension q < k. Facet i is the face opposite vertex i;
/// listed open facets do not belong to the simplex.
class Simplex {
 public:
  Simplex() = default;
  Simplex(std::vector<Vec> vertices, std::optional<Vec> normal = std::nullopt, std::vector<int> open_faces = {})
      : v_(std::move(vertices)), open_(std::move(open_faces)) {
    if (v_.empty()) throw ValidationError("simplex needs vertices");
    const int k = static_cast<int>(v_.front().size());
    const int q = static_cast<int>(v_.size()) - 1;
    if (q >= k) throw ValidationError("simplex dimension must be below the ambient dimension");
    for (const Vec& p : v_) {
      if (p.size() != k) throw ValidationError("simplex vertices have inconsistent dimensions");
    }
    e_ = Mat(k, q);
    for (int i = 0; i < q; ++i) e_.col(i) = v_[i + 1] - v_[0];
    if (q > 0) {
      Eigen::FullPivLU<Mat> lu(e_);
      lu.setThreshold(1e-10);
      if (lu.rank() != q) throw ValidationError("simplex vertices are affinely dependent");
      gram_inv_ = (e_.transpose() * e_).inverse();
    }
    for (int f : open_) {
      if (f < 0 || f > q) throw ValidationError("open face index out of range");
    }
    if (normal) {
      if (q != k - 1) throw ValidationError("normals are only defined for codimension-1 simplices");
      if (std::abs(normal->norm() - 1.0) > 1e-12) throw ValidationError("simplex normal must be a unit vector");
      if (q > 0 && (e_.transpose() * *normal).norm() > 1e-9) {
        throw ValidationError("simplex normal is not orthogonal to the simplex");
      }
      n_ = *normal;
    }
  }

  /// Codimension-1 simplex with the normal making (edges..., n) positively oriented.
  static Simplex oriented(std::vector<Vec> vertices, std::vector<int> open_faces = {}) {
    const int k = static_cast<int>(vertices.front().size());
    const int q = static_cast<int>(vertices.size()) - 1;
    if (q != k - 1) throw ValidationError("oriented simplex must have codimension 1");
    Mat e(k, q);
    for (int i = 0; i < q; ++i) e.col(i) = vertices[i + 1] - vertices[0];
    Vec n;
    if (q == 0) {
      n = Vec::Unit(k, 0);
    } else {
      Eigen::FullPivLU<Mat> lu(e.transpose());
      Mat ker = lu.kernel();
      if (ker.cols() != 1) throw ValidationError("simplex vertices are affinely dependent");
      n = ker.col(0).normalized();
      Mat full(k, k);
      full.leftCols(q) = e;
      full.col(q) = n;
      if (full.determinant() < 0) n = -n;
    }
    return Simplex(std::move(vertices), n, std::move(open_faces));
  }

  int ambient_dim() const { return static_cast<int>(v_.front().size()); }
  int dim() const { return static_cast<int>(v_.size()) - 1; }
  const std::vector<Vec>& vertices() const { return v_; }
  const std::optional<Vec>& normal() const { return n_; }
  const std::vector<int>& open_faces() const { return open_; }
  bool face_open(int i) const { return std::find(open_.begin(), open_.end(), i) != open_.end(); }

  Vec barycentric(const Vec& x) const {
    const int q = dim();
    Vec beta(q + 1);
    if (q == 0) {
      beta(0) = 1.0;
      return beta;
    }
    const Vec mu = gram_inv_ * e_.transpose() * (x - v_[0]);
    beta(0) = 1.0 - mu.sum();
    beta.tail(q) = mu;
    return beta;
  }

  double hull_distance(const Vec& x) const {
    if (dim() == 0) return (x - v_[0]).norm();
    const Vec mu = gram_inv_ * e_.transpose() * (x - v_[0]);
    return (x - v_[0] - e_ * mu).norm();
  }

  bool contains(const Vec& x) const {
    if (detail::robust_sign(hull_distance(x), "point vs affine hull") != 0) return false;
    return bary_inside(barycentric(x));
  }

  /// Local parameters u in [0,1] with a + u(b-a) in the simplex.
  std::optional<ParamInterval> segment_hits(const Vec& a, const Vec& b) const {
    const Vec dir = b - a;
    const double len = dir.norm();
    const int q = dim();
    Vec ra, rb, ca, cd;
    if (q == 0) {
      ra = a - v_[0];
      rb = dir;
    } else {
      const Vec mua = gram_inv_ * e_.transpose() * (a - v_[0]);
      const Vec mub = gram_inv_ * e_.transpose() * dir;
      ra = a - v_[0] - e_ * mua;
      rb = dir - e_ * mub;
      ca.resize(q + 1);
      cd.resize(q + 1);
      ca(0) = 1.0 - mua.sum();
      cd(0) = -mub.sum();
      ca.tail(q) = mua;
      cd.tail(q) = mub;
    }
    if (rb.norm() <= kGeomEps * len) {
      // parallel to the hull
      if (detail::robust_sign(ra.norm(), "segment vs affine hull") != 0) return std::nullopt;
      if (q == 0) return std::nullopt;  // a segment cannot lie in a point
      ParamInterval iv{0.0, 1.0, true, true};
      for (int i = 0; i <= q; ++i) {
        const double c = ca(i), d = cd(i);
        const bool strict = face_open(i);
        if (std::abs(d) <= kGeomEps) {
          const int s = detail::robust_sign(c, "barycentric coordinate");
          if (s < 0 || (s == 0 && strict)) return std::nullopt;
          continue;
        }
        const double root = -c / d;
        if (d > 0) {
          if (root > iv.lo + kParamTol) {
            iv.lo = root;
            iv.lo_closed = !strict;
          } else if (std::abs(root - iv.lo) <= kParamTol) {
            iv.lo_closed = iv.lo_closed && !strict;
          }
        } else {
          if (root < iv.hi - kParamTol) {
            iv.hi = root;
            iv.hi_closed = !strict;
          } else if (std::abs(root - iv.hi) <= kParamTol) {
            iv.hi_closed = iv.hi_closed && !strict;
          }
        }
      }
      if (iv.lo > iv.hi + kParamTol) return std::nullopt;
      if (iv.hi - iv.lo <= kParamTol) {
        if (!(iv.lo_closed && iv.hi_closed)) return std::nullopt;
        iv.hi = iv.lo;
      }
      return iv;
    }
    const double u = -ra.dot(rb) / rb.dot(rb);
    const double ut = kGeomEps / len;
    if (u < -ut || u > 1 + ut) return std::nullopt;
    const double uc = std::clamp(u, 0.0, 1.0);
    const Vec x = a + uc * dir;
    if (detail::robust_sign((ra + uc * rb).norm(), "segment crossing point") != 0) return std::nullopt;
    if (!bary_inside(barycentric(x))) return std::nullopt;
    return ParamInterval{uc, uc, true, true};
  }

 private:
  bool bary_inside(const Vec& beta) const {
    for (int i = 0; i < beta.size(); ++i) {
      const int s = detail::robust_sign(beta(i), "barycentric coordinate");
      if (s < 0) return false;
      if (s == 0 && face_open(i)) return false;
    }
    return true;
  }

  std::vector<Vec> v_;
  std::optional<Vec> n_;
  std::vector<int> open_;
  Mat e_;
  Mat gram_inv_;
};

enum class IntersectionRule { Natural, Topological };

/// Oriented simplicial quasi-surface. Strata are the simplices (ids are their
/// indices). A surface is a list of components, each with its own rule and
/// sign; a single component is the plain case, sign -1 is the inverse rule,
/// several components realize the joint rule of disjoint surfaces.
class OrientedSurface {
 public:
  struct Component {
    int first = 0, count = 0;
    IntersectionRule rule = IntersectionRule::Natural;
    int sign = 1;
  };

  OrientedSurface() = default;
  OrientedSurface(std::vector<Simplex> simplices, IntersectionRule rule = IntersectionRule::Natural)
      : s_(std::move(simplices)) {
    if (s_.empty()) throw ValidationError("surface needs at least one simplex");
    const int k = s_.front().ambient_dim();
    for (const auto& s : s_) {
      if (s.ambient_dim() != k) throw ValidationError("surface simplices have inconsistent ambient dimension");
    }
    comps_.push_back({0, static_cast<int>(s_.size()), rule, 1});
    check_disjoint();
  }

  /// Same component layout as another surface, new simplices.
  static OrientedSurface with_components(std::vector<Simplex> simplices, std::vector<Component> comps) {
    OrientedSurface r(std::move(simplices));
    int total = 0;
    for (const auto& c : comps) total += c.count;
    if (total != r.strata()) throw ValidationError("component layout does not match simplex count");
    r.comps_ = std::move(comps);
    return r;
  }

  int ambient_dim() const { return s_.front().ambient_dim(); }
  const std::vector<Simplex>& simplices() const { return s_; }
  const std::vector<Component>& components() const { return comps_; }
  int strata() const { return static_cast<int>(s_.size()); }

  OrientedSurface inverse() const {
    OrientedSurface r = *this;
    for (auto& c : r.comps_) c.sign = -c.sign;
    return r;
  }

  /// Union of two disjoint surfaces with the joint intersection function.
  static OrientedSurface joint(const OrientedSurface& a, const OrientedSurface& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw ValidationError("joint surfaces need equal ambient dimension");
    OrientedSurface r = a;
    const int off = static_cast<int>(a.s_.size());
    r.s_.insert(r.s_.end(), b.s_.begin(), b.s_.end());
    for (auto c : b.comps_) {
      c.first += off;
      r.comps_.push_back(c);
    }
    r.check_disjoint();
    return r;
  }

  /// Stratum containing x, if any.
  std::optional<int> locate(const Vec& x) const { return locate_in(x, 0, strata()); }

  bool contains(const Vec& x) const { return locate(x).has_value(); }

  /// Global parameters of the path lying in the simplices [first, first+count).
  ParamSet hits(const PolyPath& g, int first = 0, int count = -1) const {
    if (count < 0) count = strata() - first;
    ParamSet set;
    const int L = g.segments();
    const auto& v = g.vertices();
    for (int j = 0; j < L; ++j) {
      for (int i = first; i < first + count; ++i) {
        auto iv = s_[i].segment_hits(v[j], v[j + 1]);
        if (!iv) continue;
        iv->lo = (j + iv->lo) / L;
        iv->hi = (j + iv->hi) / L;
        set.add(*iv);
      }
    }
    return set;
  }

  /// Outgoing intersection function.
  int sigma_out(const PolyPath& g) const {
    int total = 0;
    for (const auto& c : comps_) total += c.sign * component_sigma(c, g);
    return total;
  }

  /// Incoming intersection function, compatible with sigma_out.
  int sigma_in(const PolyPath& g) const { return -sigma_out(g.reversed()); }

 private:
  std::optional<int> locate_in(const Vec& x, int first, int count) const {
    for (int i = first; i < first + count; ++i) {
      if (s_[i].contains(x)) return i;
    }
    return std::nullopt;
  }

  int component_sigma(const Component& c, const PolyPath& g) const {
    const auto at = locate_in(g.start(), c.first, c.count);
    if (!at) return 0;
    // an initial path inside the component gives 0 for both rules
    if (hits(g.sub(0.0, 1.0 / g.segments()), c.first, c.count).contains_initial()) return 0;
    const auto& n = s_[*at].normal();
    if (!n) return 0;
    const Vec dir = (g.vertices()[1] - g.vertices()[0]).normalized();
    return detail::robust_sign(n->dot(dir), "initial direction vs normal");
  }

  void check_disjoint() const {
    for (std::size_t i = 0; i < s_.size(); ++i) {
      for (std::size_t j = i + 1; j < s_.size(); ++j) {
        if (simplices_meet(s_[i], s_[j]) || simplices_meet(s_[j], s_[i])) {
          throw ValidationError("surface simplices " + std::to_string(i) + " and " + std::to_string(j) +
                                " are not disjoint");
        }
      }
    }
  }

  // Whether some 1-face (or the vertex of a point simplex) of a shares a
  // point with both a and b.
  static bool simplices_meet(const Simplex& a, const Simplex& b) {
    const auto& v = a.vertices();
    for (const Vec& p : v) {
      if (a.contains(p) && b.contains(p)) return true;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        const auto iv = b.segment_hits(v[i], v[j]);
        if (!iv) continue;
        for (double u : {iv->lo, 0.5 * (iv->lo + iv->hi), iv->hi}) {
          const Vec p = v[i] + u * (v[j] - v[i]);
          if (a.contains(p) && b.contains(p)) return true;
        }
      }
    }
    return false;
  }

  std::vector<Simplex> s_;
  std::vector<Component> comps_;
};

enum class Direction { Outgoing, Incoming };

inline int sigma_eval(const OrientedSurface& S, const PolyPath& g, Direction d) {
  return d == Direction::Outgoing ? S.sigma_out(g) : S.sigma_in(g);
}

/// One piece of a decomposition with its parameter interval in the parent.
struct DecompPiece {
  PolyPath path;
  bool internal = false;
  double t0 = 0, t1 = 1;
};

struct Decomposition {
  std::vector<DecompPiece> pieces;

  std::vector<double> breakpoints() const {
    std::vector<double> r;
    for (std::size_t i = 1; i < pieces.size(); ++i) r.push_back(pieces[i].t0);
    return r;
  }
  bool has_internal() const {
    return std::any_of(pieces.begin(), pieces.end(), [](const auto& p) { return p.internal; });
  }
};

/// Parameters in (0,1) where membership in S can change.
inline std::vector<double> membership_events(const ParamSet& in) {
  std::vector<double> ev;
  for (const auto& iv : in.intervals()) {
    for (double t : {iv.lo, iv.hi}) {
      if (t > kParamTol && t < 1 - kParamTol) ev.push_back(t);
    }
  }
  std::sort(ev.begin(), ev.end());
  ev.erase(std::unique(ev.begin(), ev.end(), [](double a, double b) { return std::abs(a - b) <= kParamTol; }),
           ev.end());
  return ev;
}

/// Decomposition of g at the given interior breakpoints; throws if a piece is
/// neither S-internal nor S-external.
inline Decomposition decompose_at(const PolyPath& g, std::vector<double> cuts, const ParamSet& in) {
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> ts{0.0};
  for (double c : cuts) {
    if (c > ts.back() + kParamTol && c < 1 - kParamTol) ts.push_back(c);
  }
  ts.push_back(1.0);
  const auto ev = membership_events(in);
  Decomposition d;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double a = ts[i], b = ts[i + 1];
    for (double e : ev) {
      if (e > a + kParamTol && e < b - kParamTol) throw DomainError("decomposition piece is not S-admissible");
    }
    const bool internal = in.contains(0.5 * (a + b));
    d.pieces.push_back({g.sub(a, b), internal, a, b});
  }
  return d;
}

/// The unique minimal S-admissible decomposition of an edge.
inline Decomposition decompose_minimal(const PolyPath& g, const OrientedSurface& S) {
  const ParamSet in = S.hits(g);
  const auto ev = membership_events(in);
  std::vector<double> ts{0.0};
  ts.insert(ts.end(), ev.begin(), ev.end());
  ts.push_back(1.0);
  std::vector<bool> cls;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) cls.push_back(in.contains(0.5 * (ts[i] + ts[i + 1])));
  std::vector<double> keep;
  for (std::size_t k = 1; k + 1 < ts.size(); ++k) {
    const bool left = cls[k - 1], right = cls[k];
    const bool on = in.contains(ts[k]);
    const bool removable = (left == right) && (left == on);
    if (!removable) keep.push_back(ts[k]);
  }
  return decompose_at(g, keep, in);
}

inline Decomposition decompose_refined(const PolyPath& g, const OrientedSurface& S, std::vector<double> extra) {
  const ParamSet in = S.hits(g);
  auto base = decompose_minimal(g, S).breakpoints();
  base.insert(base.end(), extra.begin(), extra.end());
  return decompose_at(g, base, in);
}

/// Whether every breakpoint of the coarse decomposition is one of the fine one.
inline bool refines(const Decomposition& fine, const Decomposition& coarse) {
  const auto f = fine.breakpoints();
  for (double c : coarse.breakpoints()) {
    if (std::none_of(f.begin(), f.end(), [&](double x) { return std::abs(x - c) <= 1e-9; })) return false;
  }
  return true;
}

struct Puncture {
  double t = 0;
  Vec point;
  int sigma_before = 0;  // incoming value of the piece ending here
  int sigma_after = 0;   // outgoing value of the piece starting here
  bool is_puncture = false;
  int sign() const { return is_puncture ? sigma_after : 0; }
};

/// All gamma-punctures and half-punctures, in parameter order.
inline std::vector<Puncture> punctures(const PolyPath& g, const OrientedSurface& S) {
  const Decomposition d = decompose_minimal(g, S);
  std::vector<Puncture> out;
  const std::size_t n = d.pieces.size();
  for (std::size_t i = 0; i <= n; ++i) {
    Puncture p;
    p.t = i == n ? 1.0 : d.pieces[i].t0;
    p.point = g.point(p.t);
    if (i > 0) p.sigma_before = S.sigma_in(d.pieces[i - 1].path);
    if (i < n) p.sigma_after = S.sigma_out(d.pieces[i].path);
    if (p.sigma_before == 0 && p.sigma_after == 0) continue;
    p.is_puncture = i > 0 && i < n && p.sigma_before * p.sigma_after > 0;
    out.push_back(p);
  }
  return out;
}

inline bool completely_transversal(const PolyPath& g, const OrientedSurface& S) {
  if (decompose_minimal(g, S).has_internal()) return false;
  const auto ps = punctures(g, S);
  return std::all_of(ps.begin(), ps.end(), [](const Puncture& p) { return p.is_puncture; });
}

/// Graph: edges meeting at most in endpoints.
struct Graph {
  std::vector<PolyPath> edges;
  std::vector<std::string> ids;

  Graph() = default;
  explicit Graph(std::vector<PolyPath> e, std::vector<std::string> names = {}) : edges(std::move(e)) {
    if (names.empty()) {
      for (std::size_t i = 0; i < edges.size(); ++i) names.push_back("e" + std::to_string(i));
    }
    if (names.size() != edges.size()) throw ValidationError("graph ids do not match edges");
    ids = std::move(names);
  }

  int size() const { return static_cast<int>(edges.size()); }

  int index_of(const std::string& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] == id) return static_cast<int>(i);
    }
    throw DomainError("no edge with id '" + id + "'");
  }

  /// Throws ValidationError unless every edge is an edge and distinct edges
  /// meet only at endpoints.
  void validate() const;
};

inline bool is_endpoint_param(const PolyPath& p, int seg, double u) {
  return (seg == 0 && u <= kParamTol) || (seg == p.segments() - 1 && u >= 1 - kParamTol);
}

inline void Graph::validate() const {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!edges[i].is_edge()) throw ValidationError("graph edge " + ids[i] + " self-intersects");
  }
  for (std::size_t a = 0; a < edges.size(); ++a) {
    for (std::size_t b = a + 1; b < edges.size(); ++b) {
      const auto& pa = edges[a].vertices();
      const auto& pb = edges[b].vertices();
      for (int i = 0; i + 1 < static_cast<int>(pa.size()); ++i) {
        for (int j = 0; j + 1 < static_cast<int>(pb.size()); ++j) {
          const auto h = intersect_segments(pa[i], pa[i + 1], pb[j], pb[j + 1]);
          if (h.kind == SegmentHit::None) continue;
          if (h.kind == SegmentHit::Overlap || !is_endpoint_param(edges[a], i, h.u0) ||
              !is_endpoint_param(edges[b], j, h.v0)) {
            throw ValidationError("graph edges " + ids[a] + " and " + ids[b] + " meet away from endpoints");
          }
        }
      }
    }
  }
}

/// Signed edge occurrence in a word.
struct EdgeUse {
  int edge = 0;
  bool reversed = false;
  bool operator==(const EdgeUse&) const = default;
};
using Word = std::vector<EdgeUse>;

struct RefinedGraph {
  Graph graph;
  std::vector<Word> words;  // one per input path
};

/// Splits the paths at mutual intersections and collinear-overlap ends,
/// merges coincident pieces, and writes each input as a word in the result.
inline RefinedGraph build_graph(const std::vector<PolyPath>& paths) {
  std::vector<std::vector<double>> cuts(paths.size());
  for (std::size_t a = 0; a < paths.size(); ++a) {
    const auto& pa = paths[a].vertices();
    const int La = paths[a].segments();
    for (std::size_t b = a; b < paths.size(); ++b) {
      const auto& pb = paths[b].vertices();
      const int Lb = paths[b].segments();
      for (int i = 0; i < La; ++i) {
        for (int j = (a == b ? i + 1 : 0); j < Lb; ++j) {
          const auto h = intersect_segments(pa[i], pa[i + 1], pb[j], pb[j + 1]);
          if (h.kind == SegmentHit::None) continue;
          cuts[a].push_back((i + h.u0) / La);
          cuts[a].push_back((i + h.u1) / La);
          cuts[b].push_back((j + h.v0) / Lb);
          cuts[b].push_back((j + h.v1) / Lb);
        }
      }
    }
  }
  RefinedGraph out;
  for (std::size_t a = 0; a < paths.size(); ++a) {
    auto& c = cuts[a];
    c.push_back(0.0);
    c.push_back(1.0);
    std::sort(c.begin(), c.end());
    std::vector<double> ts{0.0};
    for (double t : c) {
      if (t > ts.back() + kParamTol) ts.push_back(t);
    }
    if (ts.back() < 1.0 - kParamTol) ts.push_back(1.0);
    ts.back() = 1.0;
    Word w;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      PolyPath piece = paths[a].sub(ts[i], ts[i + 1]);
      EdgeUse use{-1, false};
      for (int e = 0; e < out.graph.size(); ++e) {
        if (out.graph.edges[e].same_geometry(piece)) {
          use = {e, false};
          break;
        }
        if (out.graph.edges[e].same_geometry(piece.reversed())) {
          use = {e, true};
          break;
        }
      }
      if (use.edge < 0) {
        out.graph.edges.push_back(piece);
        out.graph.ids.push_back("e" + std::to_string(out.graph.edges.size() - 1));
        use = {out.graph.size() - 1, false};
      }
      w.push_back(use);
    }
    out.words.push_back(std::move(w));
  }
  return out;
}

/// Writes a path as a word over graph edges, or throws DomainError.
inline Word express(const Graph& g, const PolyPath& p) {
  std::vector<double> ts{0.0, 1.0};
  const auto& pv = p.vertices();
  const int L = p.segments();
  for (const auto& e : g.edges) {
    for (const Vec* x : {&e.start(), &e.end()}) {
      for (int j = 0; j < L; ++j) {
        const Vec d = pv[j + 1] - pv[j];
        const double u = (*x - pv[j]).dot(d) / d.squaredNorm();
        if (u < -kParamTol || u > 1 + kParamTol) continue;
        if ((pv[j] + std::clamp(u, 0.0, 1.0) * d - *x).norm() <= kGeomEps) {
          ts.push_back((j + std::clamp(u, 0.0, 1.0)) / L);
        }
      }
    }
  }
  std::sort(ts.begin(), ts.end());
  std::vector<double> t2{0.0};
  for (double t : ts) {
    if (t > t2.back() + kParamTol) t2.push_back(t);
  }
  t2.back() = 1.0;
  Word w;
  for (std::size_t i = 0; i + 1 < t2.size(); ++i) {
    const PolyPath piece = p.sub(t2[i], t2[i + 1]);
    bool found = false;
    for (int e = 0; e < g.size() && !found; ++e) {
      if (g.edges[e].same_geometry(piece)) {
        w.push_back({e, false});
        found = true;
      } else if (g.edges[e].same_geometry(piece.reversed())) {
        w.push_back({e, true});
        found = true;
      }
    }
    if (!found) throw DomainError("path is not a word over the graph edges");
  }
  return w;
}

/// Invertible affine map x -> M x + b.
struct AffineMap {
  Mat M;
  Vec b;

  static AffineMap identity(int k) { return {Mat::Identity(k, k), Vec::Zero(k)}; }
  static AffineMap rotation2d(double angle) {
    Mat m(2, 2);
    m << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return {m, Vec::Zero(2)};
  }

  Vec operator()(const Vec& x) const { return M * x + b; }
  AffineMap inverse() const {
    const Mat mi = M.inverse();
    return {mi, -mi * b};
  }
  AffineMap compose(const AffineMap& inner) const { return {M * inner.M, M * inner.b + b}; }
  bool invertible() const { return std::abs(M.determinant()) > 1e-12; }
};

/// Image polyline obtained by mapping the vertices.
template <class F>
PolyPath map_path(const F& f, const PolyPath& g) {
  std::vector<Vec> r;
  r.reserve(g.vertices().size());
  for (const Vec& v : g.vertices()) r.push_back(f(v));
  return PolyPath(std::move(r));
}

/// Image of a surface under an affine map; normals follow M^{-T}.
inline OrientedSurface map_surface(const AffineMap& A, const OrientedSurface& S) {
  if (!A.invertible()) throw ValidationError("surface image needs an invertible map");
  const Mat nt = A.M.inverse().transpose();
  std::vector<Simplex> out;
  for (const auto& s : S.simplices()) {
    std::vector<Vec> vs;
    for (const Vec& v : s.vertices()) vs.push_back(A(v));
    std::optional<Vec> n;
    if (s.normal()) n = (nt * *s.normal()).normalized();
    out.emplace_back(std::move(vs), n, s.open_faces());
  }
  return OrientedSurface::with_components(std::move(out), S.components());
}

}  // namespace qgeom
