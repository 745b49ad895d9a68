#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cwig/error.hpp"
#include "cwig/specfun.hpp"

namespace cwig {
namespace {

constexpr double kPi = std::numbers::pi;

// Godfrey's coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

[[noreturn]] void throw_pole(const char* what, Complex z) {
  std::ostringstream os;
  os << what << ": argument " << z << " is a pole of gamma";
  throw PoleError(os.str());
}

Complex log_gamma_right(Complex z) {
  // Valid for Re z >= 1/2.
  z -= 1.0;
  Complex sum = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) sum += kLanczos[k] / (z + double(k));
  const Complex t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace

bool is_nonpositive_integer(Complex z, double tol) {
  if (std::abs(z.imag()) > tol || z.real() > tol) return false;
  return std::abs(z.real() - std::round(z.real())) <= tol;
}

Complex log_gamma(Complex z) {
  if (is_nonpositive_integer(z, 0.0)) throw_pole("log_gamma", z);
  if (z.real() >= 0.5) return log_gamma_right(z);
  // Γ(z) Γ(1-z) = π / sin(πz)
  const Complex s = std::sin(kPi * z);
  if (s == Complex(0.0)) throw_pole("log_gamma", z);
  return std::log(kPi) - std::log(s) - log_gamma_right(1.0 - z);
}

double gamma_abs_squared(Complex z) { return std::exp(2.0 * log_gamma(z).real()); }

Complex gamma(Complex z) {
  if (z.imag() == 0.0 && z.real() > 0.0 && z.real() < 171.0) return std::tgamma(z.real());
  return std::exp(log_gamma(z));
}

Complex rgamma(Complex z) {
  if (is_nonpositive_integer(z, 0.0)) return 0.0;
  return std::exp(-log_gamma(z));
}

Complex digamma(Complex z) {
  if (is_nonpositive_integer(z, 0.0)) throw_pole("digamma", z);
  if (z.real() < 0.5) {
    // ψ(1-z) - ψ(z) = π cot(πz)
    return digamma(1.0 - z) - kPi / std::tan(kPi * z);
  }
  Complex acc = 0.0;
  while (std::abs(z) < 12.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  // Bernoulli tail: B_2k / (2k z^2k), k = 1..7
  const Complex tail =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 -
                                              inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
  return acc + std::log(z) - 0.5 * inv - tail;
}

Complex pochhammer(Complex a, int n) {
  Complex r = 1.0;
  for (int k = 0; k < n; ++k) r *= a + double(k);
  return r;
}

}  // namespace cwig
