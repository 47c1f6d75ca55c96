#pragma once

// Localized stratified diffeomorphisms of R^n given piecewise in closed form:
// radial maps between star bodies, scalings, rotations, y-bumps and the
// winding maps built from them, with numerical verification.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qgeom/errors.hpp"
#include "qgeom/geometry.hpp"
#include "qgeom/liegroup.hpp"

namespace qgeom {

inline constexpr double kPieceTol = 1e-9;

using Region = std::function<bool(const Vec&)>;
using PointMap = std::function<Vec(const Vec&)>;
using ScalarField = std::function<double(const Vec&)>;

/// Closed region with its forward and inverse formulas.
struct StratPiece {
  std::string name;
  Region contains;
  PointMap forward, inverse;
};

/// Piecewise map, the identity outside an open support. A composite applies
/// its chain in order and carries no pieces of its own.
class StratMap {
 public:
  int dim = 0;
  std::string family;
  std::map<std::string, double> params;
  std::vector<StratPiece> pieces;
  Region in_support;
  Vec box_lo, box_hi;  // contains the closure of the support
  std::function<Vec(Rng&)> sample_boundary;
  std::vector<StratMap> chain;

  bool composite() const { return !chain.empty(); }

  Vec operator()(const Vec& x) const {
    check_dim(x);
    if (composite()) {
      Vec y = x;
      for (const auto& m : chain) y = m(y);
      return y;
    }
    if (!in_support(x)) return x;
    for (const auto& p : pieces) {
      if (p.contains(x)) return p.forward(x);
    }
    throw PrecisionError("point in the support but in no piece of " + family);
  }

  Vec inverse(const Vec& y) const {
    check_dim(y);
    if (composite()) {
      Vec x = y;
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) x = it->inverse(x);
      return x;
    }
    if (!in_support(y)) return y;
    double best = std::numeric_limits<double>::infinity();
    Vec out = y;
    for (const auto& p : pieces) {
      const Vec x = p.inverse(y);
      if (!x.allFinite() || !p.contains(x)) continue;
      const double err = (p.forward(x) - y).norm();
      if (err < best) {
        best = err;
        out = x;
      }
    }
    if (!std::isfinite(best)) throw PrecisionError("no piece of " + family + " inverts the point");
    return out;
  }

  bool support_contains(const Vec& x) const {
    if (!composite()) return in_support(x);
    for (const auto& m : chain) {
      if (m.support_contains(x)) return true;
    }
    return false;
  }

 private:
  void check_dim(const Vec& x) const {
    if (x.size() != dim) throw ValidationError("point dimension does not match the map");
  }
};

namespace detail {

inline Vec sample_box(const Vec& lo, const Vec& hi, Rng& rng) {
  Vec x(lo.size());
  for (int i = 0; i < lo.size(); ++i) x(i) = std::uniform_real_distribution<double>(lo(i), hi(i))(rng);
  return x;
}

inline StratPiece identity_piece(std::string name, Region r) {
  auto id = [](const Vec& x) { return x; };
  return {std::move(name), std::move(r), id, id};
}

inline Vec unit_gaussian(int n, Rng& rng) {
  std::normal_distribution<double> nd;
  Vec v(n);
  do {
    for (int i = 0; i < n; ++i) v(i) = nd(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

}  // namespace detail

/// Minkowski functional of a ball of radius r or of a simplex containing the
/// origin in its interior.
struct Minkowski {
  enum class Kind { Ball, Simplex };
  Kind kind = Kind::Ball;
  double radius = 1.0;
  Mat normals;  // one row per facet, facet i opposite vertex i
  Vec offsets;
  std::vector<Vec> vertices;

  static Minkowski ball(double r) {
    if (!(r > 0)) throw ValidationError("ball radius must be positive");
    Minkowski m;
    m.radius = r;
    return m;
  }

  /// Simplex through the given k+1 vertices of R^k.
  static Minkowski simplex(const std::vector<Vec>& v) {
    const int k = static_cast<int>(v.size()) - 1;
    if (k < 1) throw ValidationError("simplex needs k+1 vertices in R^k");
    for (const auto& x : v) {
      if (x.size() != k) throw ValidationError("simplex needs k+1 vertices in R^k");
    }
    Mat N(k + 1, k);
    Vec c(k + 1);
    for (int i = 0; i <= k; ++i) {
      std::vector<Vec> face;
      for (int j = 0; j <= k; ++j) {
        if (j != i) face.push_back(v[j]);
      }
      Vec n;
      if (k == 1) {
        n = Vec::Ones(1);
      } else {
        Mat D(k - 1, k);
        for (int j = 1; j < k; ++j) D.row(j - 1) = (face[j] - face[0]).transpose();
        Eigen::FullPivLU<Mat> lu(D);
        if (lu.rank() != k - 1) throw ValidationError("degenerate simplex");
        n = lu.kernel().col(0);
      }
      n.normalize();
      if (n.dot(v[i] - face[0]) > 0) n = -n;
      N.row(i) = n.transpose();
      c(i) = n.dot(face[0]);
    }
    if ((c.array() <= kGeomEps).any()) throw ValidationError("origin must lie inside the simplex");
    Minkowski m;
    m.kind = Kind::Simplex;
    m.normals = std::move(N);
    m.offsets = std::move(c);
    m.vertices = v;
    return m;
  }

  double operator()(const Vec& x) const {
    if (kind == Kind::Ball) return x.norm() / radius;
    return (normals * x).cwiseQuotient(offsets).maxCoeff();
  }

  /// Largest |x| on the unit level set.
  double outer_radius() const {
    if (kind == Kind::Ball) return radius;
    double r = 0.0;
    for (const auto& v : vertices) r = std::max(r, v.norm());
    return r;
  }
};

/// x -> (a + b/p)(x) x on U, inverse y -> (1/a)(1 - b/p)(y) y. The scalar
/// fields a, b must be homogeneous of degree 0 and a, p, pa + b positive;
/// both are checked on the probe points.
inline StratPiece radial_map(ScalarField a, ScalarField b, Minkowski p, Region U, const std::vector<Vec>& probes,
                             std::string name = "radial") {
  for (const Vec& x : probes) {
    if (!U(x)) continue;
    const double px = p(x), ax = a(x), bx = b(x);
    if (!(ax > 0) || !(px > 0) || !(px * ax + bx > 0)) throw DomainError("radial map positivity violated");
    const double s = 1.7;
    if (std::abs(a(s * x) - ax) > 1e-9 * (1 + std::abs(ax)) || std::abs(b(s * x) - bx) > 1e-9 * (1 + std::abs(bx))) {
      throw ValidationError("radial map coefficients must be homogeneous of degree 0");
    }
  }
  auto fwd = [a, b, p](const Vec& x) -> Vec {
    const double px = p(x);
    if (px == 0.0) return x * 0.0;
    return (a(x) + b(x) / px) * x;
  };
  auto inv = [a, b, p](const Vec& y) -> Vec {
    const double py = p(y);
    if (py == 0.0) return y * 0.0;
    return (1.0 / a(y)) * (1.0 - b(y) / py) * y;
  };
  return {std::move(name), std::move(U), fwd, inv};
}

namespace detail {

/// q-hat with coefficients a = (L - L0)/(L - q), b = L(L0 - q)/(L - q),
/// q = p1/p0; fixes L*S1 and maps S0 to L0*S1.
inline std::pair<ScalarField, ScalarField> interp_coefficients(const Minkowski& p0, const Minkowski& p1, double L,
                                                                double L0) {
  auto q = [p0, p1](const Vec& x) { return p1(x) / p0(x); };
  ScalarField a = [q, L, L0](const Vec& x) { return (L - L0) / (L - q(x)); };
  ScalarField b = [q, L, L0](const Vec& x) { return L * (L0 - q(x)) / (L - q(x)); };
  return {a, b};
}

inline Vec sphere_point(const Minkowski& p, double level, Rng& rng, int n) {
  const Vec u = unit_gaussian(n, rng);
  return (level / p(u)) * u;
}

}  // namespace detail

/// Map of the shell lambda_- S1 <= . <= lambda_+ S1 onto itself sending S0 to
/// lambda_0,- S1 from inside and lambda_0,+ S1 from outside; identity off the
/// open shell. Orderings are checked on a sphere sample.
inline StratMap interp_two_surfaces(const Minkowski& p0, const Minkowski& p1, double lm, double lp, double l0m,
                                    double l0p, int n) {
  Rng rng(12345);
  double qmin = std::numeric_limits<double>::infinity(), qmax = 0.0;
  for (int i = 0; i < 5000; ++i) {
    const Vec u = detail::unit_gaussian(n, rng);
    const double q = p1(u) / p0(u);
    qmin = std::min(qmin, q);
    qmax = std::max(qmax, q);
  }
  if (!(0 < lm && lm < qmin && qmin <= l0m + 1e-12 && l0m <= l0p && l0p <= qmax + 1e-12 && qmax < lp)) {
    throw DomainError("interpolation parameters violate 0 < l- < inf q <= l0- <= l0+ <= sup q < l+");
  }
  StratMap m;
  m.dim = n;
  m.family = "interp_two_surfaces";
  m.params = {{"lambda_minus", lm}, {"lambda_plus", lp}, {"lambda0_minus", l0m}, {"lambda0_plus", l0p}};
  m.in_support = [p1, lm, lp](const Vec& x) {
    const double v = p1(x);
    return v > lm && v < lp;
  };
  std::vector<Vec> probes;
  for (int i = 0; i < 200; ++i) probes.push_back(detail::sphere_point(p1, lm + (lp - lm) * (i + 0.5) / 200, rng, n));
  const auto [ap, bp] = detail::interp_coefficients(p0, p1, lp, l0p);
  const auto [am, bm] = detail::interp_coefficients(p0, p1, lm, l0m);
  const double t = kPieceTol;
  m.pieces.push_back(radial_map(am, bm, p1, [p0, p1, lm, t](const Vec& x) { return p1(x) >= lm - t && p0(x) <= 1 + t; },
                                probes, "inner"));
  m.pieces.push_back(radial_map(ap, bp, p1, [p0, p1, lp, t](const Vec& x) { return p0(x) >= 1 - t && p1(x) <= lp + t; },
                                probes, "outer"));
  m.pieces.push_back(detail::identity_piece("exterior", [p1, lm, lp, t](const Vec& x) {
    const double v = p1(x);
    return v <= lm + t || v >= lp - t;
  }));
  const double R = lp * p1.outer_radius();
  m.box_lo = Vec::Constant(n, -R);
  m.box_hi = Vec::Constant(n, R);
  m.sample_boundary = [p0, p1, lm, lp, n](Rng& r) {
    const int k = static_cast<int>(r() % 3);
    if (k == 0) return detail::sphere_point(p1, lm, r, n);
    if (k == 1) return detail::sphere_point(p1, lp, r, n);
    return detail::sphere_point(p0, 1.0, r, n);
  };
  return m;
}

/// lambda * id on {p <= 1}, identity outside {p < (1+eps) max(lambda, 1)},
/// a half-ray preserving radial map in between.
inline StratMap scaling_map(const Minkowski& p, double lambda, double eps, int n) {
  if (!(lambda > 0)) throw ValidationError("scaling factor must be positive");
  if (!(eps > 0)) throw ValidationError("scaling margin must be positive");
  // S1 = c R with the identity on L*S1 = outer shell and S0 = R sent to L0*S1 = lambda R
  double L, L0, c;
  if (lambda >= 1) {
    c = std::sqrt(lambda);
    L = (1 + eps) * std::sqrt(lambda);
    L0 = std::sqrt(lambda);
  } else {
    c = std::sqrt(1 + eps);
    L = std::sqrt(1 + eps);
    L0 = lambda / std::sqrt(1 + eps);
  }
  const double outer = (1 + eps) * std::max(lambda, 1.0);
  const double q = 1.0 / c;  // p1 / p0 with p1 = p / c
  const double a = (L - L0) / (L - q), b = L * (L0 - q) / (L - q);
  StratMap m;
  m.dim = n;
  m.family = "scaling";
  m.params = {{"lambda", lambda}, {"eps", eps}};
  m.in_support = [p, outer](const Vec& x) { return p(x) < outer; };
  const double t = kPieceTol;
  m.pieces.push_back({"inner", [p, t](const Vec& x) { return p(x) <= 1 + t; },
                      [lambda](const Vec& x) { return Vec(lambda * x); },
                      [lambda](const Vec& y) { return Vec(y / lambda); }});
  // p1(x) = p(x)/c; the shell formula in terms of p1
  m.pieces.push_back({"shell", [p, outer, t](const Vec& x) { return p(x) >= 1 - t && p(x) <= outer + t; },
                      [p, a, b, c](const Vec& x) -> Vec {
                        const double p1 = p(x) / c;
                        return (a + b / p1) * x;
                      },
                      [p, a, b, c](const Vec& y) -> Vec {
                        const double p1 = p(y) / c;
                        return (1.0 / a) * (1.0 - b / p1) * y;
                      }});
  m.pieces.push_back(detail::identity_piece("exterior", [p, outer, t](const Vec& x) { return p(x) >= outer - t; }));
  const double R = outer * p.outer_radius();
  m.box_lo = Vec::Constant(n, -R);
  m.box_hi = Vec::Constant(n, R);
  m.sample_boundary = [p, outer, n](Rng& r) {
    return detail::sphere_point(p, r() % 2 ? 1.0 : outer, r, n);
  };
  return m;
}

/// x -> exp(a(|x|) X) x with a = 1 inside r2, linear down to 0 at r1.
inline StratMap rotation_map(const Mat& X, double r1, double r2) {
  const int n = static_cast<int>(X.rows());
  if (X.cols() != n || (X + X.transpose()).norm() > 1e-12 * (1 + X.norm())) {
    throw ValidationError("rotation generator must be a real anti-symmetric matrix");
  }
  if (!(r1 > r2 && r2 > 0)) throw ValidationError("rotation radii must satisfy r1 > r2 > 0");
  auto ramp = [r1, r2](double r) { return (r1 - r) / (r1 - r2); };
  auto rot = [X](double s, const Vec& x) -> Vec {
    const Mat A = (s * X).exp();
    return A * x;
  };
  StratMap m;
  m.dim = n;
  m.family = "rotation";
  m.params = {{"r1", r1}, {"r2", r2}};
  m.in_support = [r1](const Vec& x) { return x.norm() < r1; };
  const double t = kPieceTol;
  const Mat A = X.exp(), Ai = (-X).exp();
  m.pieces.push_back({"inner", [r2, t](const Vec& x) { return x.norm() <= r2 + t; },
                      [A](const Vec& x) { return Vec(A * x); }, [Ai](const Vec& y) { return Vec(Ai * y); }});
  m.pieces.push_back({"shell", [r1, r2, t](const Vec& x) { return x.norm() >= r2 - t && x.norm() <= r1 + t; },
                      [rot, ramp](const Vec& x) { return rot(ramp(x.norm()), x); },
                      [rot, ramp](const Vec& y) { return rot(-ramp(y.norm()), y); }});
  m.pieces.push_back(detail::identity_piece("exterior", [r1, t](const Vec& x) { return x.norm() >= r1 - t; }));
  m.box_lo = Vec::Constant(n, -r1);
  m.box_hi = Vec::Constant(n, r1);
  m.sample_boundary = [n, r1, r2](Rng& r) { return Vec((r() % 2 ? r1 : r2) * detail::unit_gaussian(n, r)); };
  return m;
}

/// Rotation of the plane factor of R^2 + R^k by angle alpha on the unit
/// ball, identity outside radius 1 + eps; sends the chord through
/// (-1,0),(1,0) to the chord through -(cos a, sin a),(cos a, sin a).
inline StratMap path_rotation_map(double alpha, int k, double eps) {
  Mat X = Mat::Zero(2 + k, 2 + k);
  X(0, 1) = -alpha;
  X(1, 0) = alpha;
  StratMap m = rotation_map(X, 1 + eps, 1.0);
  m.family = "path_rotation";
  m.params["alpha"] = alpha;
  return m;
}

/// Coordinates of a bump: x along axis xi, the bump direction yi, and the
/// remaining coordinates minus an offset forming the transverse vector z.
struct BumpFrame {
  int xi = 0, yi = 1;
  Vec offset;  // full-length vector; only the transverse entries are used
};

/// Bump of the x-axis segment [tau1 - eps, tau2 + eps] to the polyline
/// through (tau1-eps,0), (tau1+eps,2a), (tau2-eps,2a), (tau2+eps,0); only
/// the y coordinate changes and the map is the identity outside
/// C = [tau1-eps, tau2+eps] x [-2eps, 2a+2eps] x B_{2eps}.
inline StratMap bump_map(double tau1, double tau2, double eps, double a, int n, BumpFrame frame = {}) {
  if (!(tau1 < tau2)) throw ValidationError("bump needs tau1 < tau2");
  if (!(eps > 0 && eps < 0.5 * (tau2 - tau1))) throw ValidationError("bump needs 0 < eps < (tau2 - tau1)/2");
  if (!(a > 0)) throw ValidationError("bump height must be positive");
  if (n < 2) throw ValidationError("bump needs n >= 2");
  if (frame.offset.size() == 0) frame.offset = Vec::Zero(n);
  if (frame.offset.size() != n || frame.xi == frame.yi || frame.xi < 0 || frame.yi < 0 || frame.xi >= n ||
      frame.yi >= n) {
    throw ValidationError("bump frame does not fit the dimension");
  }
  const double c = 0.5 * (tau1 + tau2), tau = 0.5 * (tau2 - tau1);
  const double y_top = 2 * a + 2 * eps, y_bot = -2 * eps;
  const int xi = frame.xi, yi = frame.yi;
  const Vec off = frame.offset;
  auto xt = [xi, c](const Vec& v) { return v(xi) - c; };
  auto znorm = [xi, yi, off](const Vec& v) {
    double s = 0.0;
    for (int i = 0; i < v.size(); ++i) {
      if (i != xi && i != yi) s += (v(i) - off(i)) * (v(i) - off(i));
    }
    return std::sqrt(s);
  };
  // column shift: rises on the left column, plateau 2a, falls on the right
  auto shift = [tau, eps, a](double x) {
    if (x <= -tau + eps) return (a / eps) * (x + tau + eps);
    if (x >= tau - eps) return (a / eps) * (tau + eps - x);
    return 2 * a;
  };
  auto falloff = [eps](double r) {
    if (r <= eps) return 1.0;
    return 0.5 * (1 - std::cos(std::numbers::pi * r / eps));
  };
  const double t = kPieceTol;
  const double xb[4] = {-tau - eps, -tau + eps, tau - eps, tau + eps};
  const double yb[4] = {y_bot, -eps, eps, y_top};
  const bool has_z = n > 2;

  StratMap m;
  m.dim = n;
  m.family = "bump";
  m.params = {{"tau1", tau1}, {"tau2", tau2}, {"eps", eps}, {"a", a}};
  m.in_support = [=](const Vec& v) {
    const double x = xt(v), y = v(yi);
    return x > xb[0] && x < xb[3] && y > y_bot && y < y_top && (!has_z || znorm(v) < 2 * eps);
  };
  static const char* col_name[3] = {"left", "middle", "right"};
  static const char* row_name[3] = {"bottom", "middle", "top"};
  for (int col = 0; col < 3; ++col) {
    for (int row = 0; row < 3; ++row) {
      for (int shell = 0; shell < (has_z ? 2 : 1); ++shell) {
        Region in = [=](const Vec& v) {
          const double x = xt(v), y = v(yi);
          if (x < xb[col] - t || x > xb[col + 1] + t || y < yb[row] - t || y > yb[row + 1] + t) return false;
          if (!has_z) return true;
          const double r = znorm(v);
          return shell == 0 ? r <= eps + t : (r >= eps - t && r <= 2 * eps + t);
        };
        // y' = y + h (y0 - y) in the outer rows, y' = y + s in the middle row
        auto coeff = [=](const Vec& v) {
          const double s = (has_z ? falloff(znorm(v)) : 1.0) * shift(xt(v));
          if (row == 1) return s;
          return row == 2 ? s / (y_top - eps) : s / (y_bot + eps);
        };
        PointMap fwd = [=](const Vec& v) -> Vec {
          Vec w = v;
          const double h = coeff(v);
          if (row == 1) {
            w(yi) = v(yi) + h;
          } else {
            const double y0 = row == 2 ? y_top : y_bot;
            w(yi) = v(yi) + h * (y0 - v(yi));
          }
          return w;
        };
        PointMap inv = [=](const Vec& v) -> Vec {
          Vec w = v;
          const double h = coeff(v);  // x and z are unchanged
          if (row == 1) {
            w(yi) = v(yi) - h;
          } else {
            const double y0 = row == 2 ? y_top : y_bot;
            w(yi) = (v(yi) - h * y0) / (1 - h);
          }
          return w;
        };
        std::string name = std::string(col_name[col]) + "-" + row_name[row] + (has_z ? (shell ? "-outer" : "-inner") : "");
        m.pieces.push_back({std::move(name), in, fwd, inv});
      }
    }
  }
  m.pieces.push_back(detail::identity_piece("exterior", [=](const Vec& v) {
    const double x = xt(v), y = v(yi);
    return x <= xb[0] + t || x >= xb[3] - t || y <= y_bot + t || y >= y_top - t || (has_z && znorm(v) >= 2 * eps - t);
  }));
  m.box_lo = off;
  m.box_hi = off;
  for (int i = 0; i < n; ++i) {
    if (i == xi) {
      m.box_lo(i) = c + xb[0];
      m.box_hi(i) = c + xb[3];
    } else if (i == yi) {
      m.box_lo(i) = y_bot;
      m.box_hi(i) = y_top;
    } else {
      m.box_lo(i) = off(i) - 2 * eps;
      m.box_hi(i) = off(i) + 2 * eps;
    }
  }
  const Vec lo = m.box_lo, hi = m.box_hi;
  m.sample_boundary = [=](Rng& r) {
    Vec v;
    do {
      v = detail::sample_box(lo, hi, r);
    } while (has_z && znorm(v) > 2 * eps);
    const int kind = static_cast<int>(r() % (has_z ? 3 : 2));
    if (kind == 0) {
      v(xi) = c + xb[r() % 4];
    } else if (kind == 1) {
      v(yi) = yb[r() % 4];
    } else {
      const double target = r() % 2 ? eps : 2 * eps, cur = znorm(v);
      if (cur < 1e-12) return v;
      for (int i = 0; i < n; ++i) {
        if (i != xi && i != yi) v(i) = off(i) + (v(i) - off(i)) * target / cur;
      }
    }
    return v;
  };
  return m;
}

/// Applies the maps in order: compose({f, g})(x) = g(f(x)).
inline StratMap compose(std::vector<StratMap> maps) {
  if (maps.empty()) throw ValidationError("composition needs at least one map");
  StratMap m;
  m.dim = maps.front().dim;
  m.family = "composite";
  m.box_lo = maps.front().box_lo;
  m.box_hi = maps.front().box_hi;
  for (const auto& x : maps) {
    if (x.dim != m.dim) throw ValidationError("composed maps differ in dimension");
    m.box_lo = m.box_lo.cwiseMin(x.box_lo);
    m.box_hi = m.box_hi.cwiseMax(x.box_hi);
  }
  m.chain = std::move(maps);
  return m;
}

/// Parameters of a winding map in R^3 around the x-axis.
struct WindingParams {
  std::vector<double> taus;      // increasing, even count
  std::vector<int> levels;       // surface index per tau
  std::vector<double> z_centers; // per surface, positive
  double a = 1.0;                // surfaces sit at y = a, the lifted axis at y = 2a
  double eps = 0.1;
};

/// First lifts the axis alternately to y = 2a between consecutive pairs of
/// taus, so it crosses y = a exactly at the taus; then pushes each crossing
/// in z to the centre of its assigned surface. Neither step moves x.
inline StratMap winding_map(const WindingParams& w) {
  const std::size_t J = w.taus.size();
  if (J % 2) throw ValidationError("winding map needs an even number of punctures");
  if (w.levels.size() != J) throw ValidationError("one level per puncture");
  if (!(w.eps > 0 && w.a > 0)) throw ValidationError("winding map needs positive a and eps");
  for (std::size_t j = 1; j < J; ++j) {
    if (!(w.taus[j] - w.taus[j - 1] > 2 * w.eps)) throw DomainError("puncture spacing must exceed 2 eps");
  }
  for (int l : w.levels) {
    if (l < 0 || l >= static_cast<int>(w.z_centers.size())) throw ValidationError("level refers to a missing surface");
  }
  for (double z : w.z_centers) {
    if (!(z > 0)) throw ValidationError("surface z-centres must be positive");
  }
  std::vector<StratMap> steps;
  for (std::size_t j = 0; j < J; j += 2) steps.push_back(bump_map(w.taus[j], w.taus[j + 1], w.eps, w.a, 3));
  const double delta = w.eps / 2, ez = w.eps / 4;
  for (std::size_t j = 0; j < J; ++j) {
    BumpFrame f{0, 2, Vec::Zero(3)};
    f.offset(1) = w.a;
    steps.push_back(bump_map(w.taus[j] - delta, w.taus[j] + delta, ez, 0.5 * w.z_centers[w.levels[j]], 3, f));
  }
  if (steps.empty()) {
    StratMap id;
    id.dim = 3;
    id.family = "winding";
    id.in_support = [](const Vec&) { return false; };
    id.box_lo = Vec::Zero(3);
    id.box_hi = Vec::Zero(3);
    id.sample_boundary = [](Rng&) { return Vec(Vec::Zero(3)); };
    return id;
  }
  StratMap m = compose(std::move(steps));
  m.family = "winding";
  return m;
}

/// Image of the axis segment [x0, x1] sampled at `samples` + 1 points, with
/// the puncture parameters inserted so that crossings are vertices.
inline PolyPath winding_image(const StratMap& m, double x0, double x1, int samples,
                              const std::vector<double>& extra = {}) {
  std::vector<double> xs;
  for (int i = 0; i <= samples; ++i) xs.push_back(x0 + (x1 - x0) * i / samples);
  for (double e : extra) {
    if (e > x0 && e < x1) xs.push_back(e);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(), [](double p, double q) { return std::abs(p - q) < 1e-12; }), xs.end());
  std::vector<Vec> v;
  for (double x : xs) {
    Vec p = Vec::Zero(m.dim);
    p(0) = x;
    v.push_back(m(p));
  }
  return PolyPath(std::move(v));
}

/// Numerical checks of a stratified map on random samples.
struct StratReport {
  double boundary_mismatch = 0.0;
  double roundtrip = 0.0;
  int support_violations = 0;
  int singular_jacobians = 0;
  double min_abs_det = std::numeric_limits<double>::infinity();
  int samples = 0;

  bool pass(double boundary_tol = 1e-9, double roundtrip_tol = 1e-10) const {
    return boundary_mismatch <= boundary_tol && roundtrip <= roundtrip_tol && support_violations == 0 &&
           singular_jacobians == 0;
  }
};

namespace detail {

inline double fd_det(const PointMap& f, const Vec& x) {
  const int n = static_cast<int>(x.size());
  const double h = 1e-6;
  Mat J(n, n);
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e(i) = h;
    J.col(i) = (f(x + e) - f(x - e)) / (2 * h);
  }
  return J.determinant();
}

inline void verify_leaf(const StratMap& m, int samples, Rng& rng, StratReport& rep) {
  for (int s = 0; s < samples; ++s) {
    const Vec x = m.sample_boundary(rng);
    std::vector<Vec> images;
    for (const auto& p : m.pieces) {
      if (p.contains(x)) images.push_back(p.forward(x));
    }
    for (std::size_t i = 1; i < images.size(); ++i) {
      rep.boundary_mismatch = std::max(rep.boundary_mismatch, (images[i] - images[0]).norm());
    }
  }
  for (int s = 0; s < samples; ++s) {
    const Vec x = sample_box(m.box_lo, m.box_hi, rng);
    if (!m.in_support(x)) continue;
    for (const auto& p : m.pieces) {
      if (!p.contains(x)) continue;
      const double det = std::abs(fd_det(p.forward, x));
      rep.min_abs_det = std::min(rep.min_abs_det, det);
      if (!(det > 1e-8)) ++rep.singular_jacobians;
    }
  }
}

inline void collect_leaves(const StratMap& m, std::vector<const StratMap*>& out) {
  if (!m.composite()) {
    out.push_back(&m);
    return;
  }
  for (const auto& c : m.chain) collect_leaves(c, out);
}

}  // namespace detail

/// Boundary agreement of adjacent pieces, forward/inverse roundtrip, exact
/// identity outside the support and Jacobian nonsingularity, each on
/// `samples` random points. Composites are checked leaf by leaf for the
/// boundary and Jacobian parts and as a whole for the rest.
inline StratReport verify_stratified(const StratMap& m, int samples, Rng& rng) {
  StratReport rep;
  rep.samples = samples;
  std::vector<const StratMap*> leaves;
  detail::collect_leaves(m, leaves);
  for (const auto* l : leaves) {
    if (!l->pieces.empty()) detail::verify_leaf(*l, samples, rng, rep);
  }
  const Vec span = m.box_hi - m.box_lo;
  const Vec lo = m.box_lo - 0.25 * span - Vec::Constant(m.dim, 0.1);
  const Vec hi = m.box_hi + 0.25 * span + Vec::Constant(m.dim, 0.1);
  for (int s = 0; s < samples; ++s) {
    // half the points from a leaf's own box so small supports are hit
    Vec x;
    if (s % 2 && !leaves.empty()) {
      const auto* l = leaves[rng() % leaves.size()];
      x = detail::sample_box(l->box_lo, l->box_hi, rng);
    } else {
      x = detail::sample_box(lo, hi, rng);
    }
    const Vec y = m(x);
    rep.roundtrip = std::max(rep.roundtrip, (m.inverse(y) - x).norm());
    if (!m.support_contains(x)) {
      if (!(y.array() == x.array()).all() || !(m.inverse(x).array() == x.array()).all()) ++rep.support_violations;
    }
  }
  if (m.composite()) {
    for (int s = 0; s < samples / 4; ++s) {
      const auto* l = leaves[rng() % leaves.size()];
      const Vec x = detail::sample_box(l->box_lo, l->box_hi, rng);
      const double det = std::abs(detail::fd_det([&m](const Vec& v) { return m(v); }, x));
      rep.min_abs_det = std::min(rep.min_abs_det, det);
      if (!(det > 1e-8)) ++rep.singular_jacobians;
    }
  }
  return rep;
}

}  // namespace qgeom
