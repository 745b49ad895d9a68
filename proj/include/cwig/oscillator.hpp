#pragma once

// Pöschl-Teller (conic) oscillator on the hyperbola x0² - x1² = R²:
// depth parameter, spectrum, bound and scattering eigenfunctions, the
// momentum representation and flat-space references.

#include <functional>

#include "cwig/quadrature.hpp"
#include "cwig/specfun.hpp"

namespace cwig {

/// s = -1/2 + sqrt((μωR²)² + 1/4).
double depth_param(double mu, double omega, double R);

struct OscillatorParams {
  double mu = 1.0;
  double omega = 0.0;
  double R = 1.0;
  double s = 0.0;
  double E0 = 0.0;  // asymptotic potential μω²R²/2

  static OscillatorParams from_physical(double mu, double omega, double R);
  /// Parameters with the given depth s; ω is solved from μωR² = sqrt(s(s+1)).
  static OscillatorParams from_depth(double s, double R, double mu = 1.0);

  /// Number of indices n = 0, 1, ... with n < s + 1.
  int bound_state_count() const;
};

/// E_n = μω²R²/2 - (n - s)²/(2μR²); throws DomainError for n >= s + 1.
double energy(int n, const OscillatorParams& params);

/// Momentum calibration of the closed ₃F₂ form against the numerical transform.
struct MomentumCalibration {
  double p_ref = 0.0;        // reference momentum used for the fit
  Complex constant{};        // numerical / closed form at p_ref
  Complex analytic{};        // (-1)^n / sqrt(2R)
  double quadrature_tol = 0.0;    // absolute tolerance of the reference transform
};

class BoundState {
 public:
  /// Throws DomainError unless 0 <= n < s + 1. Indices with s - n <= 0 are
  /// accepted but not normalizable; evaluators throw for them.
  /// With `calibrate` the momentum constant is fitted at construction.
  BoundState(const OscillatorParams& params, int n, bool calibrate = true);

  int n() const { return n_; }
  const OscillatorParams& params() const { return params_; }
  double a() const { return params_.s - n_; }
  bool normalizable() const { return a() > 0.0; }
  double energy() const { return cwig::energy(n_, params_); }

  /// ψ_n^s(χ) from the Gegenbauer form; normalized with respect to dχ.
  double psi(double chi) const;
  /// ψ_n^s(χ) from the terminating ₂F₁ form (independent cross-check).
  double psi_hypergeometric(double chi) const;

  /// |ψ(χ)| <= envelope().bound(χ).
  Envelope envelope() const;
  FieldSampler sampler() const;

  /// Printed ₃F₂ closed form of the momentum wavefunction (uncalibrated).
  Complex psi_momentum_printed(double p) const;
  /// Continuous-Hahn form with Askey parameters (a/2, a/2+1, a/2, a/2+1), a = s - n.
  Complex psi_momentum_hahn(double p) const;
  /// Calibrated momentum wavefunction, equal to √(R/2π) ∫ e^{-ipRχ} ψ(χ) dχ.
  Complex psi_momentum(double p) const;

  const MomentumCalibration& calibration() const;

 private:
  void require_normalizable(const char* who) const;

  OscillatorParams params_;
  int n_;
  double log_norm_gegenbauer_ = 0.0;
  double log_norm_hyper_ = 0.0;
  double log_norm_momentum_ = 0.0;
  bool calibrated_ = false;
  MomentumCalibration calibration_;
};

/// Scattering state above threshold, labelled by p = R sqrt(2μE - μ²ω²R²) > 0.
class ScatteringState {
 public:
  ScatteringState(const OscillatorParams& params, double p);

  double p() const { return p_; }
  /// Legendre degree; σ = s (the σ → -σ-1 partner gives the same function).
  double sigma() const { return params_.s; }
  double energy() const;

  /// ψ_p(χ) = |Γ(1-ip)|/(2π) P_σ^{ip}(tanh χ). Throws ConvergenceError for
  /// χ < -kScatterChiCutoff where (1 + tanh χ)/2 underflows the ₂F₁ argument.
  Complex psi(double chi) const;

  static constexpr double kScatterChiCutoff = 16.0;

 private:
  OscillatorParams params_;
  double p_;
};

/// |-f'' - s(s+1) sech²χ f - k² f| with a central second difference of step h.
/// Bound states use k² = -(s-n)², scattering states k² = p².
double schrodinger_residual(const std::function<Complex(double)>& f, double s, double k2, double chi, double h);

/// Normalized flat harmonic-oscillator eigenfunction in x1.
double flat_ho_reference(int n, double mu, double omega, double x1);

}  // namespace cwig
