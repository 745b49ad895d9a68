#include "cwig/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace cwig {

double Envelope::truncation_radius(double tail_tol) const {
  if (!(rate > 0.0)) throw DomainError("Envelope: non-decaying envelope has no finite truncation");
  // ∫_{|χ-c|>T} scale e^{-rate|χ-c|} = 2 scale e^{-rate T} / rate
  const double t = std::log(2.0 * scale / (rate * tail_tol)) / rate;
  return std::max(t, 0.0);
}

FieldSampler FieldSampler::shifted(double a) const {
  Envelope env = envelope_;
  env.center += a;
  Parity parity = a == 0.0 ? parity_ : Parity::none;
  return FieldSampler([fn = fn_, a](double chi) { return fn(chi - a); }, env, parity);
}

FieldSampler FieldSampler::modulated(double b) const {
  Parity parity = b == 0.0 ? parity_ : Parity::none;
  return FieldSampler(
      [fn = fn_, b](double chi) { return std::exp(Complex(0.0, b * chi)) * fn(chi); }, envelope_,
      parity);
}

std::string FieldSampler::spot_check(std::span<const double> points, double slack) const {
  std::ostringstream os;
  for (double chi : points) {
    const Complex v = fn_(chi);
    const double bound = envelope_.bound(chi);
    if (std::abs(v) > bound * (1.0 + slack) + slack) {
      os << "envelope violated at chi = " << chi << ": |f| = " << std::abs(v) << " > " << bound;
      return os.str();
    }
    if (parity_ != Parity::none && envelope_.center == 0.0) {
      const Complex mirror = fn_(-chi);
      const Complex expected = parity_ == Parity::even ? v : -v;
      if (std::abs(mirror - expected) > slack * (1.0 + std::abs(v))) {
        os << "declared parity violated at chi = " << chi;
        return os.str();
      }
    }
  }
  return {};
}

}  // namespace cwig
