#include <cmath>
#include <limits>
#include <sstream>

#include "cwig/error.hpp"
#include "cwig/specfun.hpp"

namespace cwig {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxTerms = 200000;

// -n if z == -n for a non-negative integer n, otherwise -1.
int terminating_degree(Complex z) {
  if (!is_nonpositive_integer(z, 0.0)) return -1;
  return static_cast<int>(-z.real());
}

Complex terminating_2f1(int degree, Complex a, Complex b, Complex c, double x) {
  Complex term = 1.0;
  Complex sum = 1.0;
  for (int k = 0; k < degree; ++k) {
    const Complex den = (c + double(k)) * double(k + 1);
    if (den == Complex(0.0)) throw PoleError("gauss_2f1: lower parameter c reaches a pole");
    term *= (a + double(k)) * (b + double(k)) / den * x;
    sum += term;
  }
  return sum;
}

Complex series_2f1(Complex a, Complex b, Complex c, double x) {
  Complex term = 1.0;
  Complex sum = 1.0;
  int settled = 0;
  for (int k = 0; k < kMaxTerms; ++k) {
    const Complex den = (c + double(k)) * double(k + 1);
    if (den == Complex(0.0)) throw PoleError("gauss_2f1: lower parameter c is a pole");
    const Complex ratio = (a + double(k)) * (b + double(k)) / den * x;
    term *= ratio;
    sum += term;
    // Once the ratio has dropped below one the remainder is bounded by a
    // geometric tail with ratio max(|ratio|, x).
    const double r = std::max(std::abs(ratio), x);
    if (r < 1.0 && std::abs(term) * r / (1.0 - r) <= 0.5 * kEps * std::abs(sum)) {
      if (++settled >= 2) return sum;
    } else {
      settled = 0;
    }
  }
  std::ostringstream os;
  os << "gauss_2f1: power series did not converge at x = " << x;
  throw ConvergenceError(os.str());
}

// ₂F₁(a, b; a+b+m; 1-w) for integer m >= 0 (logarithmic case).
Complex log_case_2f1(Complex a, Complex b, int m, double w) {
  const Complex c = a + b + double(m);
  if (is_nonpositive_integer(c, 0.0)) throw PoleError("gauss_2f1: lower parameter c is a pole");

  Complex finite = 0.0;
  {
    Complex term = 1.0;  // (a)_k (b)_k (-w)^k / k!
    for (int k = 0; k < m; ++k) {
      finite += term * std::tgamma(double(m - k));
      term *= (a + double(k)) * (b + double(k)) / double(k + 1) * (-w);
    }
    finite *= rgamma(a + double(m)) * rgamma(b + double(m));
  }

  const double log_w = std::log(w);
  Complex sum = 0.0;
  Complex coeff = 1.0 / std::tgamma(double(m + 1));  // (a+m)_k (b+m)_k w^k / (k! (k+m)!)
  int settled = 0;
  for (int k = 0; k < kMaxTerms; ++k) {
    const Complex bracket = log_w - digamma(double(k + 1)) - digamma(double(k + m + 1)) +
                            digamma(a + double(k + m)) + digamma(b + double(k + m));
    const Complex term = coeff * bracket;
    sum += term;
    if (std::abs(term) <= 0.5 * kEps * std::abs(sum) && k > 2) {
      if (++settled >= 2) break;
    } else {
      settled = 0;
    }
    coeff *= (a + double(m + k)) * (b + double(m + k)) / (double(k + 1) * double(k + 1 + m)) * w;
    if (k + 1 == kMaxTerms) throw ConvergenceError("gauss_2f1: logarithmic series did not converge");
  }
  const Complex singular = std::pow(-w, m) * rgamma(a) * rgamma(b) * sum;
  return gamma(c) * (finite - singular);
}

Complex connection_2f1(Complex a, Complex b, Complex c, double x) {
  const double w = 1.0 - x;
  const Complex d = c - a - b;
  const double m = std::round(d.real());
  if (std::abs(d - m) < kHyp2f1IntegerGap) {
    const int mi = static_cast<int>(m);
    if (mi >= 0) return log_case_2f1(a, b, mi, w);
    // Euler: F(a,b;a+b-m;x) = w^{-m} F(b-m, a-m; a+b-m; x) with the latter in the m >= 0 case.
    const int k = -mi;
    return std::pow(w, mi) * log_case_2f1(a - double(k), b - double(k), k, w);
  }

  if (is_nonpositive_integer(c, 0.0)) throw PoleError("gauss_2f1: lower parameter c is a pole");
  const Complex lgc = log_gamma(c);
  Complex first = 0.0;
  if (!is_nonpositive_integer(c - a, 0.0) && !is_nonpositive_integer(c - b, 0.0)) {
    first = std::exp(lgc + log_gamma(d) - log_gamma(c - a) - log_gamma(c - b)) *
            gauss_2f1(a, b, 1.0 - d, w);
  }
  Complex second = 0.0;
  if (!is_nonpositive_integer(a, 0.0) && !is_nonpositive_integer(b, 0.0)) {
    second = std::exp(lgc + log_gamma(-d) - log_gamma(a) - log_gamma(b) + d * std::log(w)) *
             gauss_2f1(c - a, c - b, 1.0 + d, w);
  }
  return first + second;
}

}  // namespace

Complex gauss_2f1(Complex a, Complex b, Complex c, double x) {
  const int na = terminating_degree(a);
  const int nb = terminating_degree(b);
  if (na >= 0 || nb >= 0) {
    const int degree = (na >= 0 && nb >= 0) ? std::min(na, nb) : std::max(na, nb);
    return terminating_2f1(degree, a, b, c, x);
  }
  if (!(x >= 0.0 && x < 1.0)) {
    std::ostringstream os;
    os << "gauss_2f1: argument x = " << x << " outside [0, 1) for a non-terminating series";
    throw DomainError(os.str());
  }
  if (x == 0.0) return 1.0;
  if (x <= 0.9) return series_2f1(a, b, c, x);
  return connection_2f1(a, b, c, x);
}

Complex hyper_3f2_terminating(int n, Complex u2, Complex u3, Complex l1, Complex l2) {
  if (n < 0) throw DomainError("hyper_3f2_terminating: degree must be non-negative");
  Complex term = 1.0;
  Complex sum = 1.0;
  for (int k = 0; k < n; ++k) {
    const Complex den = (l1 + double(k)) * (l2 + double(k)) * double(k + 1);
    if (den == Complex(0.0)) {
      throw PoleError("hyper_3f2_terminating: lower parameter reaches a pole before termination");
    }
    term *= (double(k) - double(n)) * (u2 + double(k)) * (u3 + double(k)) / den;
    sum += term;
  }
  return sum;
}

Complex legendre_imag_mu(double sigma, double p, double x) {
  if (!(std::abs(x) < 1.0)) {
    std::ostringstream os;
    os << "legendre_imag_mu: |x| = " << std::abs(x) << " must be < 1";
    throw DomainError(os.str());
  }
  const Complex mu(0.0, p);
  // ((1+x)/(1-x))^{ip/2} = exp(i p atanh x)
  const Complex phase = std::exp(Complex(0.0, p * std::atanh(x)));
  return phase * rgamma(1.0 - mu) * gauss_2f1(-sigma, sigma + 1.0, 1.0 - mu, 0.5 * (1.0 - x));
}

}  // namespace cwig
