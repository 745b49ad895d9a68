#pragma once

// Special-function kernel: complex Γ family, Gauss and terminating
// generalized hypergeometric series, and the classical polynomial families.
// Everything here is pure and re-entrant.

#include <complex>

namespace cwig {

using Complex = std::complex<double>;

/// log Γ(z) by a Lanczos (g = 7, 9 terms) approximation, reflected for Re z < 1/2.
/// For Re z >= 1/2 this is the standard branch continuous from the positive real
/// axis; in the reflected half-plane the imaginary part is exact modulo 2π.
/// Throws PoleError at non-positive integers.
Complex log_gamma(Complex z);

/// |Γ(z)|² = exp(2 Re log Γ(z)).
double gamma_abs_squared(Complex z);

/// Γ(z); throws PoleError at non-positive integers.
Complex gamma(Complex z);

/// 1/Γ(z), entire; exactly zero at the poles of Γ.
Complex rgamma(Complex z);

/// ψ(z) = Γ'(z)/Γ(z); throws PoleError at non-positive integers.
Complex digamma(Complex z);

/// Rising factorial (a)_n = a (a+1) ... (a+n-1).
Complex pochhammer(Complex a, int n);

/// True when z is within `tol` of a non-positive integer.
bool is_nonpositive_integer(Complex z, double tol = 1e-12);

/// Gauss ₂F₁(a, b; c; x) for real 0 <= x < 1, or any real x when the series
/// terminates (a or b a non-positive integer).
///
/// x <= 0.9 sums the power series directly. Above that the x -> 1-x connection
/// formula is used; when c-a-b lies within 1e-6 of an integer the logarithmic
/// limiting form for the integer case is evaluated instead, which carries an
/// O(|c-a-b-m|) error for near-integer (rather than exact) cases.
Complex gauss_2f1(Complex a, Complex b, Complex c, double x);

/// Threshold on |c-a-b - m| below which gauss_2f1 switches to the log form.
inline constexpr double kHyp2f1IntegerGap = 1e-6;

/// ₃F₂(-n, u2, u3; l1, l2; 1) as the exact (n+1)-term sum.
/// Throws PoleError if a lower Pochhammer symbol vanishes within the sum.
Complex hyper_3f2_terminating(int n, Complex u2, Complex u3, Complex l1, Complex l2);

/// Gegenbauer C_n^α(ξ) by three-term recurrence; requires α > -1/2 and |ξ| <= 1.
double gegenbauer(int n, double alpha, double xi);

/// Physicists' Hermite polynomial H_n(x).
double hermite(int n, double x);

/// Laguerre polynomial L_n(x).
double laguerre(int n, double x);

/// Continuous Hahn polynomial in the Askey-scheme normalization
///   p_n(x; a,b,c,d) = i^n (a+c)_n (a+d)_n / n! ₃F₂(-n, n+a+b+c+d-1, a+ix; a+c, a+d; 1).
/// x may be complex; a polynomial written R_n(z) with the parameter a+z
/// corresponds to p_n(-iz).
Complex continuous_hahn(int n, Complex x, double a, double b, double c, double d);

/// Associated Legendre function of imaginary order,
///   P_σ^{ip}(x) = ((1+x)/(1-x))^{ip/2} / Γ(1-ip) · ₂F₁(-σ, σ+1; 1-ip; (1-x)/2),
/// for |x| < 1. Accuracy degrades as x -> -1 once (1+x)/2 falls below ~1e-14.
Complex legendre_imag_mu(double sigma, double p, double x);

}  // namespace cwig
