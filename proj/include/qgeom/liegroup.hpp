#pragma once

// Compact group arithmetic for U(1) and SU(2): elements, irreducible
// representations, characters, one-parameter subgroups, Haar sampling and the
// exact Schur-orthogonality engine.
//
// Extending to another compact group means adding a Group tag, a Haar
// sampler, an irrep realization and a canonical Lie-algebra basis; everything
// downstream only talks to GroupElement / Irrep.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qgeom/errors.hpp"

namespace qgeom {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

inline constexpr double kValidationTol = 1e-12;
inline constexpr double kIdentityTol = 1e-10;

enum class Group { U1, SU2 };

inline std::string to_string(Group g) { return g == Group::U1 ? "u1" : "su2"; }

inline Group group_from_string(const std::string& s) {
  if (s == "u1" || s == "U1") return Group::U1;
  if (s == "su2" || s == "SU2") return Group::SU2;
  throw ValidationError("unknown group tag '" + s + "'");
}

inline int fundamental_dim(Group g) { return g == Group::U1 ? 1 : 2; }

namespace detail {

inline double unitarity_defect(const CMat& m) {
  return (m.adjoint() * m - CMat::Identity(m.rows(), m.cols())).norm();
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline cplx ipow(cplx z, int k) {
  cplx r(1.0, 0.0);
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace detail

/// An element of U(1) (1x1 unitary) or SU(2) (2x2 special unitary).
class GroupElement {
 public:
  static GroupElement identity(Group g) {
    const int d = fundamental_dim(g);
    return GroupElement(g, CMat::Identity(d, d));
  }

  /// Validating constructor: unitarity within 1e-12, det 1 for SU(2).
  static GroupElement from_matrix(Group g, CMat m) {
    const int d = fundamental_dim(g);
    if (m.rows() != d || m.cols() != d) {
      throw ValidationError("group element for " + to_string(g) + " must be " + std::to_string(d) + "x" +
                            std::to_string(d));
    }
    if (detail::unitarity_defect(m) > kValidationTol) throw ValidationError("matrix is not unitary");
    if (g == Group::SU2 && std::abs(m.determinant() - cplx(1.0, 0.0)) > kValidationTol) {
      throw ValidationError("SU(2) element must have determinant 1");
    }
    return GroupElement(g, std::move(m));
  }

  static GroupElement u1(double theta) {
    CMat m(1, 1);
    m(0, 0) = std::polar(1.0, theta);
    return GroupElement(Group::U1, m);
  }

  /// SU(2) element from unit quaternion (a0, a1, a2, a3): a0 I + i(a1 s1 + a2 s2 + a3 s3).
  static GroupElement su2_from_quaternion(double a0, double a1, double a2, double a3) {
    const double nrm = std::sqrt(a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3);
    if (nrm == 0.0) throw ValidationError("zero quaternion");
    a0 /= nrm;
    a1 /= nrm;
    a2 /= nrm;
    a3 /= nrm;
    CMat m(2, 2);
    m(0, 0) = cplx(a0, a3);
    m(0, 1) = cplx(a2, a1);
    m(1, 0) = cplx(-a2, a1);
    m(1, 1) = cplx(a0, -a3);
    return GroupElement(Group::SU2, m);
  }

  Group group() const { return group_; }
  const CMat& matrix() const { return m_; }

  GroupElement operator*(const GroupElement& o) const {
    if (o.group_ != group_) throw ValidationError("cannot multiply elements of different groups");
    return GroupElement(group_, m_ * o.m_);
  }
  GroupElement inverse() const { return GroupElement(group_, m_.adjoint()); }

  GroupElement pow(int k) const {
    GroupElement base = k < 0 ? inverse() : *this;
    GroupElement r = identity(group_);
    for (int i = 0; i < std::abs(k); ++i) r = r * base;
    return r;
  }

  double distance(const GroupElement& o) const { return (m_ - o.m_).norm(); }

 private:
  GroupElement(Group g, CMat m) : group_(g), m_(std::move(m)) {}
  friend GroupElement exp_alg(const CMat& x, double t);
  friend GroupElement square_root(const GroupElement& g);

  Group group_;
  CMat m_;
};

/// Irreducible unitary representation: U(1) charge q, or SU(2) spin j = label/2
/// realized on symmetric powers of the fundamental (orthonormal monomial basis).
class Irrep {
 public:
  Irrep() = default;
  static Irrep u1(int charge) { return Irrep(Group::U1, charge); }
  static Irrep su2_twice_spin(int twice_spin) {
    if (twice_spin < 0) throw ValidationError("spin must be non-negative");
    return Irrep(Group::SU2, twice_spin);
  }
  static Irrep trivial(Group g) { return Irrep(g, 0); }

  /// Parses "su2:1/2", "su2:1", "u1:-2", "trivial:su2".
  static Irrep parse(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ValidationError("irrep label '" + s + "' lacks a group prefix");
    const std::string head = s.substr(0, colon);
    const std::string tail = s.substr(colon + 1);
    try {
      if (head == "trivial") return trivial(group_from_string(tail));
      const Group g = group_from_string(head);
      if (g == Group::U1) return u1(std::stoi(tail));
      const auto slash = tail.find('/');
      if (slash == std::string::npos) return su2_twice_spin(2 * std::stoi(tail));
      if (tail.substr(slash + 1) != "2") throw ValidationError("spin denominator must be 2");
      return su2_twice_spin(std::stoi(tail.substr(0, slash)));
    } catch (const std::logic_error&) {
      throw ValidationError("cannot parse irrep label '" + s + "'");
    }
  }

  Group group() const { return group_; }
  int label() const { return label_; }
  int dim() const { return group_ == Group::U1 ? 1 : label_ + 1; }
  double spin() const { return 0.5 * label_; }
  bool is_trivial() const { return label_ == 0; }
  bool is_abelian() const { return dim() == 1; }

  std::string name() const {
    if (group_ == Group::U1) return "u1:" + std::to_string(label_);
    if (label_ % 2 == 0) return "su2:" + std::to_string(label_ / 2);
    return "su2:" + std::to_string(label_) + "/2";
  }

  /// Matrix of the represented group element.
  CMat operator()(const GroupElement& g) const {
    if (g.group() != group_) throw ValidationError("irrep and element belong to different groups");
    if (group_ == Group::U1) {
      CMat r(1, 1);
      const cplx z = g.matrix()(0, 0);
      r(0, 0) = label_ >= 0 ? detail::ipow(z, label_) : detail::ipow(std::conj(z), -label_);
      return r;
    }
    return symmetric_power(g.matrix());
  }

  /// Derived representation of a Lie-algebra element of the fundamental.
  CMat algebra(const CMat& x) const {
    if (group_ == Group::U1) {
      CMat r(1, 1);
      r(0, 0) = static_cast<double>(label_) * x(0, 0);
      return r;
    }
    return symmetric_power_derivative(x);
  }

  auto operator<=>(const Irrep&) const = default;

 private:
  Irrep(Group g, int label) : group_(g), label_(label) {}

  // Basis u_k = x^{d-k} y^k / sqrt((d-k)! k!), action (p)(v) -> p(v g).
  CMat symmetric_power(const CMat& g) const {
    const int d = label_;
    const cplx a = g(0, 0), b = g(0, 1), c = g(1, 0), e = g(1, 1);
    CMat r = CMat::Zero(d + 1, d + 1);
    for (int k = 0; k <= d; ++k) {
      // (a x + c y)^{d-k} (b x + e y)^k
      for (int i = 0; i <= d - k; ++i) {
        const cplx f1 = detail::binomial(d - k, i) * detail::ipow(a, d - k - i) * detail::ipow(c, i);
        for (int l2 = 0; l2 <= k; ++l2) {
          const cplx f2 = detail::binomial(k, l2) * detail::ipow(b, k - l2) * detail::ipow(e, l2);
          r(i + l2, k) += f1 * f2;
        }
      }
    }
    for (int l = 0; l <= d; ++l) {
      for (int k = 0; k <= d; ++k) {
        r(l, k) *= std::sqrt(detail::factorial(d - l) * detail::factorial(l) /
                             (detail::factorial(d - k) * detail::factorial(k)));
      }
    }
    return r;
  }

  CMat symmetric_power_derivative(const CMat& x) const {
    const int d = label_;
    CMat r = CMat::Zero(d + 1, d + 1);
    for (int k = 0; k <= d; ++k) {
      // (d-k)(x00 x + x10 y) x^{d-k-1} y^k + k (x01 x + x11 y) x^{d-k} y^{k-1}
      if (d - k > 0) {
        r(k, k) += static_cast<double>(d - k) * x(0, 0);
        r(k + 1, k) += static_cast<double>(d - k) * x(1, 0);
      }
      if (k > 0) {
        r(k - 1, k) += static_cast<double>(k) * x(0, 1);
        r(k, k) += static_cast<double>(k) * x(1, 1);
      }
    }
    for (int l = 0; l <= d; ++l) {
      for (int k = 0; k <= d; ++k) {
        r(l, k) *= std::sqrt(detail::factorial(d - l) * detail::factorial(l) /
                             (detail::factorial(d - k) * detail::factorial(k)));
      }
    }
    return r;
  }

  Group group_ = Group::SU2;
  int label_ = 0;
};

/// Pauli matrices (k = 1, 2, 3).
inline CMat pauli(int k) {
  CMat s = CMat::Zero(2, 2);
  const cplx i(0.0, 1.0);
  switch (k) {
    case 1: s(0, 1) = 1.0; s(1, 0) = 1.0; break;
    case 2: s(0, 1) = -i; s(1, 0) = i; break;
    case 3: s(0, 0) = 1.0; s(1, 1) = -1.0; break;
    default: throw ValidationError("pauli index must be 1, 2 or 3");
  }
  return s;
}

inline bool is_anti_hermitian(const CMat& x, double tol = kValidationTol) {
  return x.rows() == x.cols() && (x + x.adjoint()).norm() <= tol;
}

/// e^{tX} for X in the Lie algebra of the fundamental (1x1 or traceless 2x2).
inline GroupElement exp_alg(const CMat& x, double t) {
  if (!is_anti_hermitian(x)) throw ValidationError("exp_alg: generator is not anti-hermitian");
  if (x.rows() == 1) {
    CMat m(1, 1);
    m(0, 0) = std::exp(t * x(0, 0));
    return GroupElement(Group::U1, m);
  }
  if (x.rows() != 2) throw ValidationError("exp_alg: only 1x1 (u1) and 2x2 (su2) generators");
  if (std::abs(x.trace()) > kValidationTol) throw ValidationError("exp_alg: su2 generator must be traceless");
  // X^2 = -theta^2 I for traceless anti-hermitian X.
  const double theta = std::sqrt(std::max(0.0, x.determinant().real()));
  const double s = t * theta;
  const double sinc = theta == 0.0 ? t : std::sin(s) / theta;
  CMat m = std::cos(s) * CMat::Identity(2, 2) + sinc * x;
  return GroupElement(Group::SU2, m);
}

/// Haar-distributed element: uniform phase for U(1), uniform on S^3 for SU(2).
inline GroupElement haar_sample(Group g, Rng& rng) {
  if (g == Group::U1) {
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    return GroupElement::u1(phase(rng));
  }
  std::normal_distribution<double> nd(0.0, 1.0);
  double q[4];
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (double& v : q) {
      v = nd(rng);
      n2 += v * v;
    }
  } while (n2 < 1e-24);
  return GroupElement::su2_from_quaternion(q[0], q[1], q[2], q[3]);
}

/// Exact Haar integral of rho^m_n * conj(rho'^{m'}_{n'}) (Schur orthogonality).
inline cplx schur_inner(const Irrep& rho, int m, int n, const Irrep& rho2, int m2, int n2) {
  if (rho.group() != rho2.group()) throw ValidationError("schur_inner: irreps of different groups");
  auto check = [](const Irrep& r, int a, int b) {
    if (a < 0 || b < 0 || a >= r.dim() || b >= r.dim()) throw ValidationError("schur_inner: index out of range");
  };
  check(rho, m, n);
  check(rho2, m2, n2);
  if (rho != rho2 || m != m2 || n != n2) return {0.0, 0.0};
  return {1.0 / rho.dim(), 0.0};
}

inline cplx character(const Irrep& rho, const GroupElement& g) { return rho(g).trace(); }

/// Principal square root. For SU(2) at -I the root along sigma_3 is returned.
inline GroupElement square_root(const GroupElement& g) {
  const CMat& m = g.matrix();
  if (g.group() == Group::U1) {
    CMat r(1, 1);
    r(0, 0) = std::polar(1.0, 0.5 * std::arg(m(0, 0)));
    return GroupElement(Group::U1, r);
  }
  // g = cos(th) I + i sin(th) n.sigma with th in [0, pi]
  const double c = std::clamp(0.5 * m.trace().real(), -1.0, 1.0);
  const double th = std::acos(c);
  const CMat k = (m - c * CMat::Identity(2, 2)) / cplx(0.0, 1.0);  // sin(th) n.sigma
  const double s = std::sin(th);
  CMat nsig;
  if (s < 1e-8) {
    if (c > 0) return GroupElement::identity(Group::SU2);
    nsig = pauli(3);
  } else {
    nsig = k / s;
  }
  CMat r = std::cos(0.5 * th) * CMat::Identity(2, 2) + cplx(0.0, std::sin(0.5 * th)) * nsig;
  return GroupElement(Group::SU2, r);
}

/// An element g with chi_rho(g^2) = 0 for a nonabelian irrep, found by a grid
/// scan over the maximal torus diag(e^{i phi}, e^{-i phi}) and bisection.
inline GroupElement find_character_zero(const Irrep& rho) {
  if (rho.is_abelian()) throw UnsupportedError("find_character_zero: abelian irreps have no character zero");
  auto torus = [](double phi) {
    CMat m = CMat::Zero(2, 2);
    m(0, 0) = std::polar(1.0, phi);
    m(1, 1) = std::polar(1.0, -phi);
    return GroupElement::from_matrix(Group::SU2, m);
  };
  // chi(g^2) is real on the torus.
  auto f = [&](double phi) {
    const GroupElement g = torus(phi);
    return character(rho, g * g).real();
  };
  const int grid = 4096;
  const double lo = 0.0, hi = std::numbers::pi / 2;
  double prev_x = lo, prev_v = f(lo);
  for (int i = 1; i <= grid; ++i) {
    const double x = lo + (hi - lo) * i / grid;
    const double v = f(x);
    if (v == 0.0) return torus(x);
    if ((prev_v < 0) != (v < 0)) {
      double a = prev_x, b = x, fa = prev_v;
      for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if ((fa < 0) == (fm < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return torus(0.5 * (a + b));
    }
    prev_x = x;
    prev_v = v;
  }
  throw UnsupportedError("find_character_zero: no sign change found on the maximal torus");
}

/// Lie-algebra basis of the fundamental with its Casimir normalization.
struct LieBasis {
  Group group = Group::SU2;
  std::vector<CMat> elements;

  std::size_t size() const { return elements.size(); }
};

/// X_k = i sigma_k for SU(2); X = i for U(1).
inline LieBasis canonical_basis(Group g) {
  LieBasis b;
  b.group = g;
  const cplx i(0.0, 1.0);
  if (g == Group::U1) {
    CMat x(1, 1);
    x(0, 0) = i;
    b.elements.push_back(x);
  } else {
    for (int k = 1; k <= 3; ++k) b.elements.push_back(i * pauli(k));
  }
  return b;
}

/// Computes lambda with -(1/n) sum rho(X_i)^2 = lambda I; throws if the
/// averaged square is not scalar within 1e-10.
inline double casimir_eigenvalue(const LieBasis& basis, const Irrep& rho) {
  if (rho.group() != basis.group) throw ValidationError("casimir: basis and irrep of different groups");
  const int d = rho.dim();
  CMat acc = CMat::Zero(d, d);
  for (const CMat& x : basis.elements) {
    const CMat rx = rho.algebra(x);
    acc -= rx * rx;
  }
  acc /= static_cast<double>(basis.size());
  const cplx lambda = acc(0, 0);
  if ((acc - lambda * CMat::Identity(d, d)).norm() > kIdentityTol || std::abs(lambda.imag()) > kIdentityTol) {
    throw ValidationError("casimir: basis is not Casimir-normalized for " + rho.name());
  }
  return lambda.real();
}

}  // namespace qgeom
