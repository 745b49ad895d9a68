#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration on finite intervals,
// and the FieldSampler abstraction for functions of the hyperbolic angle with
// a declared exponential decay envelope.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <span>
#include <sstream>
#include <type_traits>
#include <vector>

#include "cwig/error.hpp"
#include "cwig/specfun.hpp"

namespace cwig {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_panels = 4000;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_panels < 1) {
      throw DomainError("QuadratureSpec: tolerances must be positive and max_panels >= 1");
    }
  }
};

template <typename T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  int panels = 0;
  int evaluations = 0;
};

namespace detail {

// Kronrod abscissae on [0, 1] (symmetric half) and weights; odd indices are the Gauss nodes.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <typename T, typename F>
Panel<T> gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const T sum = f(center - dx) + f(center + dx);
    kronrod += sum * kKronrodWeights[j];
    if (j % 2 == 1) gauss += sum * kGaussWeights[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, magnitude(kronrod - gauss)};
}

}  // namespace detail

/// Integrates f over [a, b]. `breakpoints` seed the initial partition (points
/// outside (a, b) are ignored). Panels are bisected in order of largest error
/// estimate until the total estimate meets max(abs_tol, rel_tol·|I|).
/// Throws ConvergenceError when spec.max_panels is exhausted.
template <typename F>
auto integrate(F&& f, double a, double b, const QuadratureSpec& spec,
               std::span<const double> breakpoints = {})
    -> QuadratureResult<std::decay_t<std::invoke_result_t<F&, double>>> {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  spec.validate();
  QuadratureResult<T> out;
  if (a == b) return out;
  if (b < a) {
    auto r = integrate(f, b, a, spec, breakpoints);
    r.value = -r.value;
    return r;
  }

  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<detail::Panel<T>> heap;
  T total{};
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto panel = detail::gauss_kronrod_15<T>(f, cuts[i], cuts[i + 1]);
    total += panel.value;
    error += panel.error;
    heap.push(panel);
  }
  int evaluations = 15 * static_cast<int>(heap.size());

  while (error > std::max(spec.abs_tol, spec.rel_tol * detail::magnitude(total))) {
    if (static_cast<int>(heap.size()) >= spec.max_panels) {
      std::ostringstream os;
      os << "integrate: no convergence on [" << a << ", " << b << "] after " << heap.size()
         << " panels (error estimate " << error << ")";
      throw ConvergenceError(os.str());
    }
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw ConvergenceError("integrate: panel width fell below floating-point resolution");
    }
    const auto left = detail::gauss_kronrod_15<T>(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_15<T>(f, mid, worst.b);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift of the running updates.
  out.value = T{};
  out.error = 0.0;
  out.panels = static_cast<int>(heap.size());
  while (!heap.empty()) {
    out.value += heap.top().value;
    out.error += heap.top().error;
    heap.pop();
  }
  out.evaluations = evaluations;
  return out;
}

/// Interior points splitting [a, b] into equal panels no wider than h.
inline std::vector<double> uniform_breakpoints(double a, double b, double h) {
  std::vector<double> pts;
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / h)));
  for (int i = 1; i < panels; ++i) pts.push_back(a + (b - a) * i / panels);
  return pts;
}

/// Declared decay bound |f(χ)| <= scale · exp(-rate |χ - center|).
struct Envelope {
  double rate = 0.0;
  double scale = 1.0;
  double center = 0.0;

  double bound(double chi) const { return scale * std::exp(-rate * std::abs(chi - center)); }

  /// Half-width T about `center` beyond which ∫|f| < tail_tol.
  double truncation_radius(double tail_tol) const;
};

enum class Parity { even, odd, none };

/// Complex-valued function of χ with a decay envelope and an optional parity.
/// The callable must be safe to invoke concurrently.
class FieldSampler {
 public:
  using Fn = std::function<Complex(double)>;

  FieldSampler(Fn fn, Envelope envelope, Parity parity = Parity::none)
      : fn_(std::move(fn)), envelope_(envelope), parity_(parity) {}

  Complex operator()(double chi) const { return fn_(chi); }

  const Envelope& envelope() const { return envelope_; }
  Parity parity() const { return parity_; }
  bool integrable() const { return envelope_.rate > 0.0 && std::isfinite(envelope_.scale); }

  /// χ ↦ f(χ - a).
  FieldSampler shifted(double a) const;

  /// χ ↦ e^{i b χ} f(χ); parity is lost unless b == 0.
  FieldSampler modulated(double b) const;

  /// Checks the envelope (with relative slack) and declared parity on the given
  /// points; returns the first offending point description, or empty if clean.
  std::string spot_check(std::span<const double> points, double slack = 1e-9) const;

 private:
  Fn fn_;
  Envelope envelope_;
  Parity parity_;
};

}  // namespace cwig
