#pragma once

// One-dimensional Wigner functions on the hyperbola: the direct integral form,
// the closed double-sum form for Pöschl-Teller eigenstates, grids, marginals
// and comparison against the flat Laguerre-Gaussian limit.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cwig/oscillator.hpp"
#include "cwig/quadrature.hpp"

namespace cwig {

/// W(f, g | χ, p) = (R/2π) ∫ dτ f*(χ - τ/2) e^{-ipRτ} g(χ + τ/2).
Complex wigner_quadrature_1d(const FieldSampler& f, const FieldSampler& g, double chi, double p, double R,
                             const QuadratureSpec& quad);

struct WignerSample {
  double value = 0.0;
  double imag_residue = 0.0;  // |Im W| for f = g quadrature, error estimate for the closed form
  bool fallback = false;      // closed form delegated to quadrature
};

/// Real Wigner function of a single field, with the imaginary part recorded.
WignerSample wigner_quadrature_real(const FieldSampler& f, double chi, double p, double R,
                                    const QuadratureSpec& quad);

struct ClosedFormOptions {
  double chi_min = 0.05;     // below this |χ| the quadrature form is used
  double q_small = 1e-3;     // |pR| below this is reached by even extrapolation
  double abs_tol = 1e-9;     // cancellation budget; exceeded -> quadrature fallback
  double rel_tol = 1e-6;
  QuadratureSpec fallback_quad{1e-12, 1e-10, 20000};
};

/// Closed double-sum form of W(ψ_n^s | χ, p) with the re-derived prefactor
/// R (s-n) n! e^{-2χ(s-n)} / (π Γ(2s-n+1)). Uses |χ| and |p|. Points where the
/// estimated cancellation error exceeds the options' budget, or with
/// |χ| < chi_min, are evaluated by quadrature and flagged.
WignerSample wigner_pt_closed_sample(const BoundState& state, double chi, double p,
                                     const ClosedFormOptions& opt = {});
double wigner_pt_closed(const BoundState& state, double chi, double p);

/// W(ψ_n^s | χ, p) by direct quadrature.
double wigner_pt_quadrature(const BoundState& state, double chi, double p, const QuadratureSpec& quad = {1e-12, 1e-10, 20000});

enum class Evaluator { closed_form, quadrature };
std::string to_string(Evaluator e);
Evaluator evaluator_from_string(const std::string& s);

struct StateMeta {
  int n = 0;
  double s = 0.0;
  double R = 1.0;
};

/// Values are indexed (χ row, pR column).
struct WignerGrid {
  Eigen::VectorXd chi_axis;
  Eigen::VectorXd pR_axis;
  Eigen::MatrixXd values;
  Evaluator evaluator = Evaluator::closed_form;
  StateMeta state;
  double max_imag_residue = 0.0;
  int fallback_points = 0;
  bool scaled = false;  // axes are u = χ√s, k = pR/√s and values W/R
};

struct GridOptions {
  int threads = 0;  // 0: hardware concurrency
  ClosedFormOptions closed;
  QuadratureSpec quad{1e-12, 1e-10, 20000};
};

/// Evaluates W on the tensor grid, parallel over rows. Each point is computed
/// independently, so values do not depend on the thread count.
WignerGrid wigner_grid(const BoundState& state, const Eigen::VectorXd& chi_axis, const Eigen::VectorXd& pR_axis,
                       Evaluator evaluator, const GridOptions& opt = {});

/// Grid in the scaled variables u = χ√s, k = pR/√s holding W/R, the density
/// with respect to du dk.
WignerGrid scaled_wigner_grid(const BoundState& state, const Eigen::VectorXd& u_axis, const Eigen::VectorXd& k_axis,
                              Evaluator evaluator, const GridOptions& opt = {});

/// Full-plane grid from a quadrant grid with both axes starting at 0.
WignerGrid reflect_quadrant(const WignerGrid& quadrant);

struct Marginal {
  Eigen::VectorXd values;
  double tail_estimate = 0.0;  // bound on the mass outside the sampled axis
  bool insufficient_support = false;
};

/// ∫ dp W over the sampled pR axis, for each χ (≈ |ψ(χ)|²). Axes starting at 0
/// are treated as quadrants and doubled. On scaled grids the result is the
/// density in u, |ψ(u/√s)|²/√s, and R is ignored.
Marginal marginal_momentum_integrated(const WignerGrid& grid, double R, double tail_tol = 1e-6);

/// ∫ dχ W over the sampled χ axis, for each pR (≈ |ψ̃(p)|²).
Marginal marginal_position_integrated(const WignerGrid& grid, double R, double tail_tol = 1e-6);

/// ∫∫ dχ dp W by the trapezoid rule (quadrants doubled).
double total_probability(const WignerGrid& grid, double R);

/// ((-1)^n / π) L_n(2r²) e^{-r²}, r² = u² + k².
double flat_wigner_reference(int n, double u, double k);

/// Same reference computed by quadrature of the flat oscillator eigenfunction.
double flat_wigner_quadrature(int n, double u, double k, const QuadratureSpec& quad = {1e-13, 1e-11, 4000});

struct ContractionEntry {
  double s = 0.0;
  double peak_deviation = 0.0;      // max |W_scaled - W_ref| over the mask / max |W_ref|
  double pointwise_relative = 0.0;  // max |W_scaled - W_ref| / |W_ref| over the mask
  int masked_points = 0;
};

struct ContractionReport {
  int n = 0;
  std::vector<ContractionEntry> entries;
  bool monotone_decreasing = false;
};

/// Deviation of scaled grids from the flat reference over the mask
/// |W_ref| > mask_fraction · max|W_ref|.
ContractionEntry contraction_deviation(const WignerGrid& scaled, int n, double mask_fraction = 0.05);

ContractionReport contraction_report(int n, const std::vector<double>& s_list, const Eigen::VectorXd& u_axis,
                                     const Eigen::VectorXd& k_axis, double R = 1.0, const GridOptions& opt = {});

}  // namespace cwig
