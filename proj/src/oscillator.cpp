#include "cwig/oscillator.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cwig/error.hpp"
#include "cwig/geometry.hpp"

namespace cwig {
namespace {

constexpr double kPi = std::numbers::pi;

double lgamma_real(double x) { return log_gamma(x).real(); }

// log sech χ without overflow.
double log_sech(double chi) {
  const double t = std::abs(chi);
  return -t - std::log1p(std::exp(-2.0 * t)) + std::numbers::ln2;
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be positive and finite (got " << v << ")";
    throw DomainError(os.str());
  }
}

}  // namespace

double depth_param(double mu, double omega, double R) {
  require_positive(mu, "mu");
  require_positive(R, "R");
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw DomainError("omega must be non-negative and finite");
  const double g = mu * omega * R * R;
  // -1/2 + sqrt(g² + 1/4) = g² / (1/2 + sqrt(g² + 1/4)), stable for small g.
  const double s = g * g / (0.5 + std::sqrt(g * g + 0.25));
  // Integer depths decide the strict bound n < s + 1; absorb rounding of the
  // square root so that e.g. g = sqrt(20) gives exactly 4.
  const double nearest = std::round(s);
  if (std::abs(s - nearest) <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, s)) return nearest;
  return s;
}

OscillatorParams OscillatorParams::from_physical(double mu, double omega, double R) {
  OscillatorParams p;
  p.s = depth_param(mu, omega, R);
  p.mu = mu;
  p.omega = omega;
  p.R = R;
  p.E0 = 0.5 * mu * omega * omega * R * R;
  return p;
}

OscillatorParams OscillatorParams::from_depth(double s, double R, double mu) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("s must be non-negative and finite");
  require_positive(R, "R");
  require_positive(mu, "mu");
  OscillatorParams p;
  p.mu = mu;
  p.R = R;
  p.omega = std::sqrt(s * (s + 1.0)) / (mu * R * R);
  p.s = s;
  p.E0 = 0.5 * s * (s + 1.0) / (mu * R * R);  // μω²R²/2 without rounding through ω
  return p;
}

int OscillatorParams::bound_state_count() const { return static_cast<int>(std::ceil(s + 1.0)); }

double energy(int n, const OscillatorParams& params) {
  if (n < 0 || !(n < params.s + 1.0)) {
    std::ostringstream os;
    os << "energy: index n = " << n << " is not bound (need n < s + 1 = " << params.s + 1.0 << ")";
    throw DomainError(os.str());
  }
  const double d = n - params.s;
  return params.E0 - d * d / (2.0 * params.mu * params.R * params.R);
}

BoundState::BoundState(const OscillatorParams& params, int n, bool calibrate) : params_(params), n_(n) {
  if (n < 0 || !(n < params.s + 1.0)) {
    std::ostringstream os;
    os << "BoundState: index n = " << n << " is not bound (need n < s + 1 = " << params.s + 1.0 << ")";
    throw DomainError(os.str());
  }
  if (!normalizable()) return;
  const double a = this->a();
  const double s = params.s;
  const double lg_2s = lgamma_real(2.0 * s - n + 1.0);
  const double lg_nf = lgamma_real(n + 1.0);
  log_norm_gegenbauer_ =
      0.5 * (std::log(a) + lg_nf - std::log(kPi) - lg_2s) + lgamma_real(a + 0.5) + a * std::numbers::ln2;
  log_norm_hyper_ = -a * std::numbers::ln2 - lgamma_real(a + 1.0) + 0.5 * (std::log(a) + lg_2s - lg_nf);
  log_norm_momentum_ = std::log(0.5 * params.R) + 0.5 * (lg_2s - std::log(kPi * a) - lg_nf) - 2.0 * lgamma_real(a);

  if (!calibrate) return;
  const QuadratureSpec quad{1e-13, 1e-12, 20000};
  const FieldSampler f = sampler();
  double best = -1.0;
  for (double p : {0.5, 1.0, 1.5}) {
    const double mag = std::abs(psi_momentum_printed(p / params.R));
    if (mag > best) {
      best = mag;
      calibration_.p_ref = p / params.R;
    }
  }
  const Complex numeric = shapiro_forward_1d(f, calibration_.p_ref, params.R, quad);
  calibration_.constant = numeric / psi_momentum_printed(calibration_.p_ref);
  calibration_.analytic = (n % 2 == 0 ? 1.0 : -1.0) / std::sqrt(2.0 * params.R);
  calibration_.quadrature_tol = quad.abs_tol;
  calibrated_ = true;
}

void BoundState::require_normalizable(const char* who) const {
  if (normalizable()) return;
  std::ostringstream os;
  os << who << ": state n = " << n_ << " at s = " << params_.s << " lies at or beyond threshold (s - n <= 0)"
     << " and is not normalizable";
  throw DomainError(os.str());
}

double BoundState::psi(double chi) const {
  require_normalizable("psi");
  const double a = this->a();
  const double c = gegenbauer(n_, a + 0.5, std::tanh(chi));
  return std::exp(log_norm_gegenbauer_ + a * log_sech(chi)) * c;
}

double BoundState::psi_hypergeometric(double chi) const {
  require_normalizable("psi_hypergeometric");
  const double a = this->a();
  const double x = 0.5 * (1.0 - std::tanh(chi));
  const Complex f = gauss_2f1(-double(n_), 2.0 * params_.s - n_ + 1.0, a + 1.0, x);
  return std::exp(log_norm_hyper_ + a * log_sech(chi)) * f.real();
}

Envelope BoundState::envelope() const {
  require_normalizable("envelope");
  const double a = this->a();
  const double alpha = a + 0.5;
  // |C_n^α(ξ)| <= C_n^α(1) = (2α)_n / n!, sech^a χ <= 2^a e^{-a|χ|}.
  const double log_c1 = lgamma_real(2.0 * alpha + n_) - lgamma_real(2.0 * alpha) - lgamma_real(n_ + 1.0);
  const double log_scale = log_norm_gegenbauer_ + log_c1 + a * std::numbers::ln2;
  return {a, std::exp(log_scale) * (1.0 + 1e-12), 0.0};
}

FieldSampler BoundState::sampler() const {
  require_normalizable("sampler");
  BoundState copy = *this;
  copy.calibrated_ = false;
  return FieldSampler([copy](double chi) { return Complex(copy.psi(chi)); }, envelope(),
                      n_ % 2 == 0 ? Parity::even : Parity::odd);
}

Complex BoundState::psi_momentum_printed(double p) const {
  require_normalizable("psi_momentum_printed");
  const double a = this->a();
  const double q = p * params_.R;
  const Complex half(0.5 * a, -0.5 * q);
  const double log_pref = log_norm_momentum_ + 2.0 * log_gamma(half).real();
  const Complex f = hyper_3f2_terminating(n_, 2.0 * params_.s - n_ + 1.0, half, a + 1.0, a);
  return std::exp(log_pref) * f;
}

Complex BoundState::psi_momentum_hahn(double p) const {
  require_normalizable("psi_momentum_hahn");
  const double a = this->a();
  const double s = params_.s;
  const double q = p * params_.R;
  const double h = 0.5 * a;
  const double log_pref = std::log(0.5 * params_.R / std::sqrt(kPi)) +
                          0.5 * (std::log(a) + lgamma_real(n_ + 1.0) + lgamma_real(2.0 * s - n_ + 1.0)) -
                          lgamma_real(s) - lgamma_real(s + 1.0) + 2.0 * log_gamma(Complex(h, -0.5 * q)).real();
  const Complex phase = std::pow(Complex(0.0, -1.0), n_);
  return phase * std::exp(log_pref) * continuous_hahn(n_, -0.5 * q, h, h + 1.0, h, h + 1.0);
}

Complex BoundState::psi_momentum(double p) const {
  if (!calibrated_) throw DomainError("psi_momentum: state was constructed without calibration");
  return calibration_.constant * psi_momentum_printed(p);
}

const MomentumCalibration& BoundState::calibration() const {
  if (!calibrated_) throw DomainError("calibration: state was constructed without calibration");
  return calibration_;
}

ScatteringState::ScatteringState(const OscillatorParams& params, double p) : params_(params), p_(p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("ScatteringState: p must be positive");
}

double ScatteringState::energy() const {
  // p² = R²(2μE - μ²ω²R²)
  const double mu = params_.mu, R = params_.R;
  return (p_ * p_ / (R * R) + mu * mu * params_.omega * params_.omega * R * R) / (2.0 * mu);
}

Complex ScatteringState::psi(double chi) const {
  if (chi < -kScatterChiCutoff) {
    std::ostringstream os;
    os << "psi_scatter: chi = " << chi << " is below the evaluation cutoff " << -kScatterChiCutoff;
    throw ConvergenceError(os.str());
  }
  const double amp = std::sqrt(gamma_abs_squared(Complex(1.0, -p_))) / (2.0 * kPi);
  return amp * legendre_imag_mu(sigma(), p_, std::tanh(chi));
}

double schrodinger_residual(const std::function<Complex(double)>& f, double s, double k2, double chi, double h) {
  const Complex f0 = f(chi);
  const Complex d2 = (f(chi + h) - 2.0 * f0 + f(chi - h)) / (h * h);
  const double sech = 1.0 / std::cosh(chi);
  return std::abs(-d2 - s * (s + 1.0) * sech * sech * f0 - k2 * f0);
}

double flat_ho_reference(int n, double mu, double omega, double x1) {
  const double mw = mu * omega;
  require_positive(mw, "mu*omega");
  const double log_norm = 0.25 * std::log(mw / kPi) - 0.5 * (n * std::numbers::ln2 + lgamma_real(n + 1.0));
  const double u = std::sqrt(mw) * x1;
  return std::exp(log_norm - 0.5 * u * u) * hermite(n, u);
}

}  // namespace cwig
