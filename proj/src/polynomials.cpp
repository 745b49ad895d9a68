#include <cmath>
#include <sstream>

#include "cwig/error.hpp"
#include "cwig/specfun.hpp"

namespace cwig {

double gegenbauer(int n, double alpha, double xi) {
  if (n < 0) throw DomainError("gegenbauer: degree must be non-negative");
  if (!(alpha > -0.5) || !(std::abs(xi) <= 1.0)) {
    std::ostringstream os;
    os << "gegenbauer: need alpha > -1/2 and |xi| <= 1 (alpha = " << alpha << ", xi = " << xi << ")";
    throw DomainError(os.str());
  }
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * alpha * xi;
  for (int k = 2; k <= n; ++k) {
    const double next = (2.0 * (k + alpha - 1.0) * xi * cur - (k + 2.0 * alpha - 2.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite(int n, double x) {
  if (n < 0) throw DomainError("hermite: degree must be non-negative");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double laguerre(int n, double x) {
  if (n < 0) throw DomainError("laguerre: degree must be non-negative");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

Complex continuous_hahn(int n, Complex x, double a, double b, double c, double d) {
  if (n < 0) throw DomainError("continuous_hahn: degree must be non-negative");
  const Complex i(0.0, 1.0);
  const Complex lead = std::pow(i, n) * pochhammer(a + c, n) * pochhammer(a + d, n) /
                       std::tgamma(double(n + 1));
  return lead * hyper_3f2_terminating(n, n + a + b + c + d - 1.0, a + i * x, a + c, a + d);
}

}  // namespace cwig
