#pragma once

// Hyperboloid model H^D_+ = {x : x0² - |x|² = R², x0 > 0} in Minkowski ambient
// coordinates, the Shapiro plane-wave basis, geodesic-midpoint machinery,
// boosts, and the one-dimensional Shapiro transform pair.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <sstream>
#include <utility>

#include "cwig/error.hpp"
#include "cwig/quadrature.hpp"
#include "cwig/specfun.hpp"

namespace cwig {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Relative tolerance (× R²) for classifying a vector onto a shell.
inline constexpr double kShellTagTol = 1e-12;
/// Relative tolerance (× R²) accepted by operations that require on-shell input.
inline constexpr double kShellCheckTol = 1e-10;

enum class ShellTag { timelike, spacelike, free };

/// Ambient vector (x0, xs) in R^{1,D}.
template <typename Scalar>
class AmbientVector {
 public:
  AmbientVector(Scalar x0, VectorX<Scalar> xs) : coords_(xs.size() + 1) {
    coords_(0) = x0;
    coords_.tail(xs.size()) = xs;
    check_finite();
  }
  explicit AmbientVector(VectorX<Scalar> coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) throw DomainError("AmbientVector: need D >= 1");
    check_finite();
  }

  int dim() const { return static_cast<int>(coords_.size()) - 1; }
  Scalar x0() const { return coords_(0); }
  auto xs() const { return coords_.tail(coords_.size() - 1); }
  const VectorX<Scalar>& coords() const { return coords_; }

  Scalar minkowski_norm2() const { return x0() * x0() - xs().squaredNorm(); }

  ShellTag shell(Scalar R, Scalar rel_tol = Scalar(kShellTagTol)) const {
    const Scalar q = minkowski_norm2();
    const Scalar R2 = R * R;
    if (std::abs(q - R2) <= rel_tol * R2 && x0() > 0) return ShellTag::timelike;
    if (std::abs(q + R2) <= rel_tol * R2) return ShellTag::spacelike;
    return ShellTag::free;
  }

 private:
  void check_finite() const {
    if (!coords_.allFinite()) throw DomainError("AmbientVector: non-finite component");
  }
  VectorX<Scalar> coords_;
};

/// Hyperbolic-angle coordinates: x0 = R cosh χ, xs = R ξ sinh χ.
template <typename Scalar>
struct HyperbolicAngleCoord {
  Scalar chi;
  VectorX<Scalar> xi;

  AmbientVector<Scalar> to_ambient(Scalar R) const {
    if (std::abs(xi.norm() - Scalar(1)) > Scalar(1e-13))
      throw DomainError("HyperbolicAngleCoord: xi must be a unit vector");
    return AmbientVector<Scalar>(R * std::cosh(chi), (R * std::sinh(chi)) * xi);
  }

  static HyperbolicAngleCoord from_ambient(const AmbientVector<Scalar>& x, Scalar R) {
    const Scalar r = x.xs().norm();
    HyperbolicAngleCoord c{std::asinh(r / R), VectorX<Scalar>::Zero(x.dim())};
    if (r > 0) {
      c.xi = x.xs() / r;
    } else {
      c.xi(0) = 1;
    }
    return c;
  }
};

template <typename Scalar>
struct MomentumLabel {
  Scalar p;
  VectorX<Scalar> n;
};

template <typename Scalar>
struct BoostParams {
  VectorX<Scalar> m;
  Scalar zeta;
};

namespace detail {

template <typename Scalar>
void require_unit(const VectorX<Scalar>& v, const char* what) {
  if (std::abs(v.norm() - Scalar(1)) > Scalar(1e-13)) {
    std::ostringstream os;
    os << what << ": expected a unit vector (|v| = " << v.norm() << ")";
    throw DomainError(os.str());
  }
}

template <typename Scalar>
void require_timelike(const AmbientVector<Scalar>& x, Scalar R, const char* what) {
  if (x.shell(R, Scalar(kShellCheckTol)) != ShellTag::timelike) {
    std::ostringstream os;
    os << what << ": point is off the hyperboloid of radius " << R
       << " (x·x = " << x.minkowski_norm2() << ")";
    throw DomainError(os.str());
  }
}

}  // namespace detail

/// x·y = x0 y0 - xs·ys.
template <typename Scalar>
Scalar minkowski_dot(const AmbientVector<Scalar>& x, const AmbientVector<Scalar>& y) {
  return x.x0() * y.x0() - x.xs().dot(y.xs());
}

/// Re-projects onto H^D_+ by recomputing x0 = sqrt(R² + |xs|²).
template <typename Scalar>
AmbientVector<Scalar> reproject_timelike(const AmbientVector<Scalar>& x, Scalar R) {
  return AmbientVector<Scalar>(std::sqrt(R * R + x.xs().squaredNorm()), VectorX<Scalar>(x.xs()));
}

/// D = 1 point at signed hyperbolic angle χ.
template <typename Scalar>
AmbientVector<Scalar> ambient_1d(Scalar chi, Scalar R) {
  VectorX<Scalar> xs(1);
  xs(0) = R * std::sinh(chi);
  return AmbientVector<Scalar>(R * std::cosh(chi), xs);
}

/// D = 1 momentum with signed p folded into (|p|, sign).
template <typename Scalar>
MomentumLabel<Scalar> momentum_1d(Scalar p) {
  VectorX<Scalar> n(1);
  n(0) = p < 0 ? Scalar(-1) : Scalar(1);
  return {std::abs(p), n};
}

/// Φ^{(D)}_{p n}(x) = ((x0 - n·xs)/R)^{-(D-1)/2 - i p R}.
template <typename Scalar>
std::complex<Scalar> shapiro_phi(int D, const MomentumLabel<Scalar>& mom, const AmbientVector<Scalar>& x,
                                 Scalar R) {
  if (D != x.dim() || D != mom.n.size()) throw DomainError("shapiro_phi: dimension mismatch");
  if (mom.p < 0) throw DomainError("shapiro_phi: p must be non-negative");
  detail::require_unit(mom.n, "shapiro_phi");
  detail::require_timelike(x, R, "shapiro_phi");
  const Scalar base = (x.x0() - mom.n.dot(x.xs())) / R;
  const std::complex<Scalar> expo(-Scalar(0.5) * Scalar(D - 1), -mom.p * R);
  return std::exp(expo * std::log(base));
}

/// N^{(D)}(p) = |Γ(ipR) / Γ((D-1)/2 + ipR)|² (pR)^{D-1}.
double norm_factor(int D, double p, double R);

/// x' = x cosh(τ/2) - y sinh(τ/2), x'' = x cosh(τ/2) + y sinh(τ/2) for x on
/// H^D_+ and y spacelike, Minkowski-orthogonal to x.
template <typename Scalar>
std::pair<AmbientVector<Scalar>, AmbientVector<Scalar>> geodesic_pair(const AmbientVector<Scalar>& x,
                                                                      const AmbientVector<Scalar>& y,
                                                                      Scalar tau) {
  const Scalar R = std::sqrt(x.minkowski_norm2());
  if (!(R > 0)) throw DomainError("geodesic_pair: x must be timelike");
  detail::require_timelike(x, R, "geodesic_pair");
  if (y.shell(R, Scalar(kShellCheckTol)) != ShellTag::spacelike)
    throw DomainError("geodesic_pair: y must satisfy y·y = -R²");
  if (std::abs(minkowski_dot(x, y)) > Scalar(kShellCheckTol) * R * R)
    throw DomainError("geodesic_pair: x and y are not Minkowski-orthogonal");
  const Scalar c = std::cosh(tau / 2), s = std::sinh(tau / 2);
  return {AmbientVector<Scalar>(VectorX<Scalar>(c * x.coords() - s * y.coords())),
          AmbientVector<Scalar>(VectorX<Scalar>(c * x.coords() + s * y.coords()))};
}

/// Geodesic midpoint (x' + x'')/(2 cosh(τ/2)) with cosh τ = x'·x''/R².
template <typename Scalar>
AmbientVector<Scalar> binding_delta_midpoint(const AmbientVector<Scalar>& xp, const AmbientVector<Scalar>& xpp,
                                             Scalar R) {
  detail::require_timelike(xp, R, "binding_delta_midpoint");
  detail::require_timelike(xpp, R, "binding_delta_midpoint");
  const Scalar cosh_tau = minkowski_dot(xp, xpp) / (R * R);
  const Scalar two_cosh_half = std::sqrt(2 * (1 + cosh_tau));
  return AmbientVector<Scalar>(VectorX<Scalar>((xp.coords() + xpp.coords()) / two_cosh_half));
}

/// (D+1)×(D+1) matrix of the boost acting on ambient vectors.
template <typename Scalar>
MatrixX<Scalar> boost_matrix(const BoostParams<Scalar>& b) {
  detail::require_unit(b.m, "boost_matrix");
  const auto D = b.m.size();
  const Scalar ch = std::cosh(b.zeta), sh = std::sinh(b.zeta);
  MatrixX<Scalar> B = MatrixX<Scalar>::Identity(D + 1, D + 1);
  B(0, 0) = ch;
  B.block(0, 1, 1, D) = -sh * b.m.transpose();
  B.block(1, 0, D, 1) = -sh * b.m;
  B.block(1, 1, D, D) += (ch - 1) * b.m * b.m.transpose();
  return B;
}

/// Boost action: x0 ↦ x0 cosh ζ - (m·x) sinh ζ, x_∥ ↦ x_∥ cosh ζ - x0 m sinh ζ, x_⊥ fixed.
template <typename Scalar>
AmbientVector<Scalar> boost_point(const BoostParams<Scalar>& b, const AmbientVector<Scalar>& x) {
  detail::require_unit(b.m, "boost_point");
  if (b.m.size() != x.dim()) throw DomainError("boost_point: dimension mismatch");
  const Scalar ch = std::cosh(b.zeta), sh = std::sinh(b.zeta);
  const Scalar mx = b.m.dot(x.xs());
  VectorX<Scalar> xs = x.xs();
  xs += ((ch - 1) * mx - x.x0() * sh) * b.m;
  return AmbientVector<Scalar>(x.x0() * ch - mx * sh, xs);
}

/// Direction n' and multiplier μ = cosh ζ + (m·n) sinh ζ for a boosted plane wave.
template <typename Scalar>
std::pair<VectorX<Scalar>, Scalar> boost_direction(const BoostParams<Scalar>& b, const VectorX<Scalar>& n) {
  detail::require_unit(b.m, "boost_direction");
  detail::require_unit(n, "boost_direction");
  const Scalar ch = std::cosh(b.zeta), sh = std::sinh(b.zeta);
  const Scalar mn = b.m.dot(n);
  const Scalar mu = ch + mn * sh;
  VectorX<Scalar> perp = n - mn * b.m;
  VectorX<Scalar> out = perp / mu + ((mn * ch + sh) / mu) * b.m;
  return {out, mu};
}

/// |Φ_{pn}(B x) - μ^{-(D-1)/2 - ipR} Φ_{pn'}(x)|.
template <typename Scalar>
Scalar shapiro_covariance_check(int D, const MomentumLabel<Scalar>& mom, const AmbientVector<Scalar>& x,
                                const BoostParams<Scalar>& b, Scalar R) {
  const auto lhs = shapiro_phi(D, mom, boost_point(b, x), R);
  const auto [n_prime, mu] = boost_direction(b, mom.n);
  const std::complex<Scalar> expo(-Scalar(0.5) * Scalar(D - 1), -mom.p * R);
  const auto rhs = std::exp(expo * std::log(mu)) * shapiro_phi(D, MomentumLabel<Scalar>{mom.p, n_prime}, x, R);
  return std::abs(lhs - rhs);
}

/// Bargmann deformation tan(φ/2) ↦ e^{-ζ} tan(φ/2), returned in (-π, π].
template <typename Scalar>
Scalar bargmann_angle(Scalar zeta, Scalar phi) {
  return 2 * std::atan2(std::exp(-zeta) * std::sin(phi / 2), std::cos(phi / 2));
}

/// f̃(p) = √(R/2π) ∫ dχ e^{-ipRχ} f(χ), truncated from the envelope of f.
Complex shapiro_forward_1d(const FieldSampler& f, double p, double R, const QuadratureSpec& quad);

/// f(χ) = √(R/2π) ∫ dp e^{ipRχ} f̃(p); the sampler is over p with its envelope in p.
Complex shapiro_inverse_1d(const FieldSampler& ftilde, double chi, double R, const QuadratureSpec& quad);

}  // namespace cwig
