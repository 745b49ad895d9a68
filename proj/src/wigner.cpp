#include "cwig/wigner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "cwig/error.hpp"

namespace cwig {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double lgamma_real(double x) { return log_gamma(x).real(); }

// Half-width T of the τ interval such that the discarded tails of the
// product f*(χ-τ/2) g(χ+τ/2) integrate to below tail_tol.
double wigner_truncation(const Envelope& ef, const Envelope& eg, double chi, double tail_tol) {
  const double rate = 0.5 * (ef.rate + eg.rate);
  const double d = std::max(std::abs(chi - ef.center), std::abs(chi - eg.center));
  // For |τ|/2 >= d: |f g| <= cf cg e^{2 rate d} e^{-rate |τ|}.
  const double log_c = std::log(ef.scale) + std::log(eg.scale) + 2.0 * rate * d;
  const double t = (log_c + std::log(2.0 / (rate * tail_tol))) / rate;
  return std::max(2.0 * d, t);
}

[[noreturn]] void rethrow_with_context(std::exception_ptr ep, const std::string& ctx) {
  try {
    std::rethrow_exception(ep);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(ctx + e.what());
  } catch (const PoleError& e) {
    throw PoleError(ctx + e.what());
  } catch (const DomainError& e) {
    throw DomainError(ctx + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(ctx + e.what());
  } catch (const IoError& e) {
    throw IoError(ctx + e.what());
  }
}

// Closed double sum at q = |pR| > 0, χ > 0. Returns value and a rounding
// error estimate from the magnitude of the cancelling terms.
std::pair<double, double> closed_sum(const BoundState& st, double chi, double q) {
  const int n = st.n();
  const double s = st.params().s;
  const double a = st.a();
  const double R = st.params().R;
  const double x = std::exp(-4.0 * chi);
  const double log_pre = std::log(R) + std::log(a) + lgamma_real(n + 1.0) - 2.0 * chi * a - std::log(kPi) -
                         lgamma_real(2.0 * s - n + 1.0);
  const Complex iq(0.0, q);
  const Complex lg_iq = log_gamma(iq);
  double sum = 0.0;
  double magnitude = 0.0;
  for (int l = 0; l <= n; ++l) {
    const Complex b = a + l - iq;
    const Complex log_l = lg_iq + log_gamma(b) + Complex(0.0, 2.0 * q * chi);
    const double log_cl = lgamma_real(2.0 * s - n + l + 1.0) - lgamma_real(a + l + 1.0) - lgamma_real(a + l) -
                          lgamma_real(l + 1.0) - lgamma_real(n - l + 1.0);
    for (int m = 0; m <= n; ++m) {
      const double log_cm = lgamma_real(2.0 * s - n + m + 1.0) - lgamma_real(a + m + 1.0) - lgamma_real(m + 1.0) -
                            lgamma_real(n - m + 1.0);
      const double sign = ((l + m) % 2 == 0) ? 1.0 : -1.0;
      const Complex f = gauss_2f1(a + m, b, 1.0 - iq, x);
      const Complex term = std::exp(log_pre + log_cl + log_cm + log_l) * f;
      sum += sign * term.real();
      magnitude += std::abs(term);
    }
  }
  return {sum, 64.0 * kEps * magnitude};
}

}  // namespace

Complex wigner_quadrature_1d(const FieldSampler& f, const FieldSampler& g, double chi, double p, double R,
                             const QuadratureSpec& quad) {
  if (!f.integrable() || !g.integrable()) throw DomainError("wigner_quadrature_1d: fields must have decaying envelopes");
  if (!(R > 0.0)) throw DomainError("wigner_quadrature_1d: R must be positive");
  const double pref = R / (2.0 * kPi);
  const double q = p * R;
  const double T = wigner_truncation(f.envelope(), g.envelope(), chi, 0.1 * quad.abs_tol / pref);
  const double width = std::min(1.0, kPi / std::max(std::abs(q), 1e-300));
  auto cuts = uniform_breakpoints(-T, T, width);
  cuts.push_back(2.0 * (chi - f.envelope().center));
  cuts.push_back(2.0 * (g.envelope().center - chi));
  QuadratureSpec inner = quad;
  inner.abs_tol = 0.9 * quad.abs_tol / pref;
  inner.max_panels = std::max<int>(quad.max_panels, 2 * static_cast<int>(cuts.size()) + 2);
  const auto r = integrate(
      [&](double tau) { return std::conj(f(chi - 0.5 * tau)) * std::exp(Complex(0.0, -q * tau)) * g(chi + 0.5 * tau); },
      -T, T, inner, cuts);
  return pref * r.value;
}

WignerSample wigner_quadrature_real(const FieldSampler& f, double chi, double p, double R, const QuadratureSpec& quad) {
  const Complex w = wigner_quadrature_1d(f, f, chi, p, R, quad);
  return {w.real(), std::abs(w.imag()), false};
}

double wigner_pt_quadrature(const BoundState& state, double chi, double p, const QuadratureSpec& quad) {
  return wigner_quadrature_real(state.sampler(), chi, p, state.params().R, quad).value;
}

WignerSample wigner_pt_closed_sample(const BoundState& state, double chi, double p, const ClosedFormOptions& opt) {
  if (!state.normalizable()) throw DomainError("wigner_pt_closed: state is not normalizable");
  chi = std::abs(chi);
  const double R = state.params().R;
  const double q = std::abs(p) * R;
  auto fallback = [&]() {
    WignerSample w = wigner_quadrature_real(state.sampler(), chi, q / R, R, opt.fallback_quad);
    w.fallback = true;
    return w;
  };
  if (chi < opt.chi_min) return fallback();

  double value = 0.0, err = 0.0;
  if (q < opt.q_small) {
    // W is even and smooth in q; Γ(iq) has a pole at 0 that cancels in the sum.
    const double q1 = opt.q_small, q2 = 2.0 * opt.q_small;
    const auto [w1, e1] = closed_sum(state, chi, q1);
    const auto [w2, e2] = closed_sum(state, chi, q2);
    const double t = (q * q - q1 * q1) / (q2 * q2 - q1 * q1);
    value = w1 + (w2 - w1) * t;
    err = e1 + (e1 + e2) * std::abs(t);
  } else {
    std::tie(value, err) = closed_sum(state, chi, q);
  }
  if (!std::isfinite(value) || err > std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) return fallback();
  return {value, err, false};
}

double wigner_pt_closed(const BoundState& state, double chi, double p) {
  return wigner_pt_closed_sample(state, chi, p).value;
}

std::string to_string(Evaluator e) { return e == Evaluator::closed_form ? "closed" : "quad"; }

Evaluator evaluator_from_string(const std::string& s) {
  if (s == "closed" || s == "closed_form") return Evaluator::closed_form;
  if (s == "quad" || s == "quadrature") return Evaluator::quadrature;
  throw ConfigError("unknown evaluator '" + s + "' (expected closed or quad)");
}

WignerGrid wigner_grid(const BoundState& state, const Eigen::VectorXd& chi_axis, const Eigen::VectorXd& pR_axis,
                       Evaluator evaluator, const GridOptions& opt) {
  auto check_axis = [](const Eigen::VectorXd& ax, const char* name) {
    if (ax.size() < 1 || !ax.allFinite()) throw DomainError(std::string("wigner_grid: invalid ") + name + " axis");
    for (Eigen::Index i = 1; i < ax.size(); ++i) {
      if (!(ax(i) > ax(i - 1))) throw DomainError(std::string("wigner_grid: ") + name + " axis must be increasing");
    }
  };
  check_axis(chi_axis, "chi");
  check_axis(pR_axis, "pR");
  if (!state.normalizable()) throw DomainError("wigner_grid: state is not normalizable");

  WignerGrid grid;
  grid.chi_axis = chi_axis;
  grid.pR_axis = pR_axis;
  grid.evaluator = evaluator;
  grid.state = {state.n(), state.params().s, state.params().R};
  const auto rows = chi_axis.size(), cols = pR_axis.size();
  grid.values.resize(rows, cols);
  Eigen::MatrixXd residue(rows, cols);
  Eigen::MatrixXi fell(rows, cols);

  const double R = state.params().R;
  const FieldSampler sampler = state.sampler();
  std::vector<std::exception_ptr> errors(rows);
  std::vector<Eigen::Index> error_col(rows, -1);
  std::atomic<Eigen::Index> next{0};
  auto worker = [&]() {
    for (Eigen::Index i = next++; i < rows; i = next++) {
      Eigen::Index j = 0;
      try {
        for (; j < cols; ++j) {
          WignerSample w = evaluator == Evaluator::closed_form
                               ? wigner_pt_closed_sample(state, chi_axis(i), pR_axis(j) / R, opt.closed)
                               : wigner_quadrature_real(sampler, chi_axis(i), pR_axis(j) / R, R, opt.quad);
          grid.values(i, j) = w.value;
          residue(i, j) = (evaluator == Evaluator::quadrature || w.fallback) ? w.imag_residue : 0.0;
          fell(i, j) = w.fallback ? 1 : 0;
        }
      } catch (...) {
        errors[i] = std::current_exception();
        error_col[i] = j;
      }
    }
  };
  int threads = opt.threads > 0 ? opt.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<Eigen::Index>(threads, rows));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (errors[i]) {
      std::ostringstream os;
      os << "wigner_grid at (row " << i << ", col " << error_col[i] << "; chi = " << chi_axis(i)
         << ", pR = " << pR_axis(error_col[i]) << "): ";
      rethrow_with_context(errors[i], os.str());
    }
  }
  if (!grid.values.allFinite()) throw ConvergenceError("wigner_grid: non-finite values");
  grid.max_imag_residue = residue.maxCoeff();
  grid.fallback_points = fell.sum();
  return grid;
}

WignerGrid scaled_wigner_grid(const BoundState& state, const Eigen::VectorXd& u_axis, const Eigen::VectorXd& k_axis,
                              Evaluator evaluator, const GridOptions& opt) {
  const double rs = std::sqrt(state.params().s);
  WignerGrid g = wigner_grid(state, u_axis / rs, k_axis * rs, evaluator, opt);
  g.values /= state.params().R;
  g.chi_axis = u_axis;
  g.pR_axis = k_axis;
  g.scaled = true;
  return g;
}

WignerGrid reflect_quadrant(const WignerGrid& q) {
  if (q.chi_axis(0) != 0.0 || q.pR_axis(0) != 0.0) {
    throw DomainError("reflect_quadrant: both axes must start at 0");
  }
  const auto r = q.chi_axis.size(), c = q.pR_axis.size();
  WignerGrid out = q;
  out.chi_axis.resize(2 * r - 1);
  out.pR_axis.resize(2 * c - 1);
  for (Eigen::Index i = 0; i < r; ++i) {
    out.chi_axis(r - 1 + i) = q.chi_axis(i);
    out.chi_axis(r - 1 - i) = -q.chi_axis(i);
  }
  for (Eigen::Index j = 0; j < c; ++j) {
    out.pR_axis(c - 1 + j) = q.pR_axis(j);
    out.pR_axis(c - 1 - j) = -q.pR_axis(j);
  }
  out.values.resize(2 * r - 1, 2 * c - 1);
  for (Eigen::Index i = 0; i < 2 * r - 1; ++i) {
    for (Eigen::Index j = 0; j < 2 * c - 1; ++j) {
      out.values(i, j) = q.values(std::abs(i - (r - 1)), std::abs(j - (c - 1)));
    }
  }
  return out;
}

namespace {

// Trapezoid along `axis` of each line of values (lines are rows when
// along_cols, columns otherwise) with a geometric tail estimate at the ends.
Marginal integrate_lines(const Eigen::MatrixXd& values, const Eigen::VectorXd& axis, bool along_cols, double scale,
                         double tail_tol) {
  const bool quadrant = axis(0) == 0.0;
  const double fold = quadrant ? 2.0 : 1.0;
  const Eigen::Index lines = along_cols ? values.rows() : values.cols();
  const Eigen::Index len = axis.size();
  Marginal out;
  out.values.resize(lines);
  const double span = axis(len - 1) - axis(0);
  auto tail = [&](double last, double prev, double h) {
    last = std::abs(last);
    prev = std::abs(prev);
    if (last == 0.0) return 0.0;
    // Not visibly decaying (oscillation or round-off floor): charge the last
    // value over another axis length.
    if (!(last < prev)) return last * span;
    return last * h / std::log(prev / last);
  };
  for (Eigen::Index k = 0; k < lines; ++k) {
    auto v = [&](Eigen::Index i) { return along_cols ? values(k, i) : values(i, k); };
    double acc = 0.0;
    for (Eigen::Index i = 0; i + 1 < len; ++i) acc += 0.5 * (axis(i + 1) - axis(i)) * (v(i) + v(i + 1));
    out.values(k) = fold * scale * acc;
    double t = 0.0;
    if (len >= 2) {
      t += tail(v(len - 1), v(len - 2), axis(len - 1) - axis(len - 2));
      if (!quadrant) t += tail(v(0), v(1), axis(1) - axis(0));
    }
    out.tail_estimate = std::max(out.tail_estimate, fold * scale * t);
  }
  out.insufficient_support = !(out.tail_estimate <= tail_tol);
  return out;
}

}  // namespace

Marginal marginal_momentum_integrated(const WignerGrid& grid, double R, double tail_tol) {
  // ∫ dp = (1/R) ∫ d(pR); scaled grids already hold densities in (u, k).
  return integrate_lines(grid.values, grid.pR_axis, true, grid.scaled ? 1.0 : 1.0 / R, tail_tol);
}

Marginal marginal_position_integrated(const WignerGrid& grid, double /*R*/, double tail_tol) {
  return integrate_lines(grid.values, grid.chi_axis, false, 1.0, tail_tol);
}

double total_probability(const WignerGrid& grid, double R) {
  const Marginal m = marginal_momentum_integrated(grid, R, std::numeric_limits<double>::infinity());
  const auto& ax = grid.chi_axis;
  double acc = 0.0;
  for (Eigen::Index i = 0; i + 1 < ax.size(); ++i) acc += 0.5 * (ax(i + 1) - ax(i)) * (m.values(i) + m.values(i + 1));
  return (ax(0) == 0.0 ? 2.0 : 1.0) * acc;
}

double flat_wigner_reference(int n, double u, double k) {
  const double r2 = u * u + k * k;
  return ((n % 2 == 0) ? 1.0 : -1.0) / kPi * laguerre(n, 2.0 * r2) * std::exp(-r2);
}

double flat_wigner_quadrature(int n, double u, double k, const QuadratureSpec& quad) {
  // Hermite functions satisfy |h_n(x)| <= c e^{-3|x|} with c found on a fine sweep.
  const double rate = 3.0;
  double c = 0.0;
  for (double x = 0.0; x <= 30.0; x += 0.01) c = std::max(c, std::abs(flat_ho_reference(n, 1.0, 1.0, x)) * std::exp(rate * x));
  const FieldSampler h([n](double x) { return Complex(flat_ho_reference(n, 1.0, 1.0, x)); }, {rate, 1.5 * c, 0.0},
                       n % 2 == 0 ? Parity::even : Parity::odd);
  return wigner_quadrature_real(h, u, k, 1.0, quad).value;
}

ContractionEntry contraction_deviation(const WignerGrid& scaled, int n, double mask_fraction) {
  if (!scaled.scaled) throw DomainError("contraction_deviation: grid must be in scaled axes");
  const auto rows = scaled.chi_axis.size(), cols = scaled.pR_axis.size();
  Eigen::MatrixXd ref(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) ref(i, j) = flat_wigner_reference(n, scaled.chi_axis(i), scaled.pR_axis(j));
  const double peak = ref.cwiseAbs().maxCoeff();
  ContractionEntry e;
  e.s = scaled.state.s;
  double worst_abs = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (std::abs(ref(i, j)) <= mask_fraction * peak) continue;
      const double d = std::abs(scaled.values(i, j) - ref(i, j));
      worst_abs = std::max(worst_abs, d);
      e.pointwise_relative = std::max(e.pointwise_relative, d / std::abs(ref(i, j)));
      ++e.masked_points;
    }
  }
  e.peak_deviation = worst_abs / peak;
  return e;
}

ContractionReport contraction_report(int n, const std::vector<double>& s_list, const Eigen::VectorXd& u_axis,
                                     const Eigen::VectorXd& k_axis, double R, const GridOptions& opt) {
  ContractionReport rep;
  rep.n = n;
  for (double s : s_list) {
    const BoundState st(OscillatorParams::from_depth(s, R), n, false);
    const WignerGrid g = scaled_wigner_grid(st, u_axis, k_axis, Evaluator::closed_form, opt);
    rep.entries.push_back(contraction_deviation(g, n));
  }
  rep.monotone_decreasing = true;
  for (std::size_t i = 1; i < rep.entries.size(); ++i) {
    if (!(rep.entries[i].peak_deviation < rep.entries[i - 1].peak_deviation)) rep.monotone_decreasing = false;
  }
  return rep;
}

}  // namespace cwig
