#include "cwig/geometry.hpp"

#include <numbers>

namespace cwig {
namespace {

// Oscillatory Fourier-type integral √(R/2π) ∫ e^{i k t} f(t) dt over the
// envelope-truncated support of f.
Complex fourier_1d(const FieldSampler& f, double k, double R, const QuadratureSpec& quad,
                   const char* who) {
  if (!f.integrable()) {
    throw DomainError(std::string(who) + ": sampler has no decaying envelope (not integrable)");
  }
  if (!(R > 0.0)) throw DomainError(std::string(who) + ": R must be positive");
  const double pref = std::sqrt(R / (2.0 * std::numbers::pi));
  const auto& env = f.envelope();
  const double half = env.truncation_radius(0.1 * quad.abs_tol / pref);
  const double lo = env.center - half, hi = env.center + half;
  const double width = std::min(1.0, std::numbers::pi / std::max(std::abs(k), 1e-300));
  auto cuts = uniform_breakpoints(lo, hi, width);
  cuts.push_back(env.center);
  QuadratureSpec inner = quad;
  inner.abs_tol = 0.9 * quad.abs_tol / pref;
  inner.max_panels = std::max<int>(quad.max_panels, 2 * static_cast<int>(cuts.size()) + 2);
  const auto r = integrate([&](double t) { return std::exp(Complex(0.0, k * t)) * f(t); }, lo, hi,
                           inner, cuts);
  return pref * r.value;
}

}  // namespace

double norm_factor(int D, double p, double R) {
  if (D < 1) throw DomainError("norm_factor: D must be >= 1");
  if (!(p > 0.0) || !(R > 0.0)) throw DomainError("norm_factor: requires p > 0 and R > 0");
  const Complex ipr(0.0, p * R);
  const double log_ratio = (log_gamma(ipr) - log_gamma(0.5 * (D - 1) + ipr)).real();
  return std::exp(2.0 * log_ratio + (D - 1) * std::log(p * R));
}

Complex shapiro_forward_1d(const FieldSampler& f, double p, double R, const QuadratureSpec& quad) {
  return fourier_1d(f, -p * R, R, quad, "shapiro_forward_1d");
}

Complex shapiro_inverse_1d(const FieldSampler& ftilde, double chi, double R, const QuadratureSpec& quad) {
  return fourier_1d(ftilde, chi * R, R, quad, "shapiro_inverse_1d");
}

}  // namespace cwig
