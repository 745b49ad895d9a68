#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cwig/geometry.hpp"

using cwig::AmbientVector;
using cwig::BoostParams;
using cwig::Complex;
using cwig::MomentumLabel;
using Vec = cwig::VectorX<double>;

namespace {

constexpr double kPi = std::numbers::pi;

Vec unit(std::mt19937_64& rng, int D) {
  std::normal_distribution<double> g;
  Vec v(D);
  for (int i = 0; i < D; ++i) v(i) = g(rng);
  return v.normalized();
}

AmbientVector<double> random_point(std::mt19937_64& rng, int D, double R) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return cwig::HyperbolicAngleCoord<double>{u(rng), unit(rng, D)}.to_ambient(R);
}

// Spacelike y with y·y = -R², orthogonal to x: boost a spatial unit vector.
AmbientVector<double> orthogonal_spacelike(std::mt19937_64& rng, const AmbientVector<double>& x, double R) {
  const int D = x.dim();
  Vec e = unit(rng, D);
  // y = R (e·xs/R ... ) built from the tangent projection of (0, e).
  Vec y(D + 1);
  y(0) = 0.0;
  y.tail(D) = e;
  const double dot = -x.xs().dot(e);  // x·(0,e)
  Vec t = y - (dot / (R * R)) * x.coords();
  const double norm2 = t(0) * t(0) - t.tail(D).squaredNorm();
  return AmbientVector<double>(Vec(t * (R / std::sqrt(-norm2))));
}

}  // namespace

TEST_CASE("ambient vectors and shell tags") {
  const double R = 2.0;
  auto x = cwig::ambient_1d(0.7, R);
  CHECK(x.shell(R) == cwig::ShellTag::timelike);
  Vec y(2);
  y << R * std::sinh(0.7), R * std::cosh(0.7);
  CHECK(AmbientVector<double>(y).shell(R) == cwig::ShellTag::spacelike);
  CHECK(AmbientVector<double>(1.0, Vec::Zero(2)).shell(R) == cwig::ShellTag::free);
  Vec off(3);
  off << 1.0, 5.0, 0.0;
  auto fixed = cwig::reproject_timelike(AmbientVector<double>(off), R);
  CHECK(fixed.shell(R) == cwig::ShellTag::timelike);
  CHECK_THROWS_AS(AmbientVector<double>(std::nan(""), Vec::Zero(1)), cwig::DomainError);

  std::mt19937_64 rng(3);
  const auto p = random_point(rng, 3, R);
  const auto c = cwig::HyperbolicAngleCoord<double>::from_ambient(p, R);
  CHECK((c.to_ambient(R).coords() - p.coords()).norm() < 1e-12);
}

TEST_CASE("Shapiro functions") {
  const double R = 1.5;
  std::mt19937_64 rng(11);
  for (int D = 1; D <= 3; ++D) {
    const MomentumLabel<double> mom{0.8, unit(rng, D)};
    const auto origin = AmbientVector<double>(R, Vec::Zero(D));
    CHECK(std::abs(cwig::shapiro_phi(D, mom, origin, R) - 1.0) < 1e-15);
    const auto x = random_point(rng, D, R);
    const double base = (x.x0() - mom.n.dot(x.xs())) / R;
    const double a = std::abs(cwig::shapiro_phi(D, mom, x, R));
    const double b = std::abs(cwig::shapiro_phi(D, MomentumLabel<double>{3.1, mom.n}, x, R));
    CHECK(a == doctest::Approx(std::pow(base, -0.5 * (D - 1))).epsilon(1e-13));
    CHECK(a == doctest::Approx(b).epsilon(1e-13));
  }
  // D = 1 with sign folding is a plane wave e^{i p R χ}.
  for (double chi : {-1.3, 0.0, 0.4, 2.0}) {
    for (double p : {-2.0, -0.3, 0.5, 1.7}) {
      const auto v = cwig::shapiro_phi(1, cwig::momentum_1d(p), cwig::ambient_1d(chi, R), R);
      CHECK(std::abs(v - std::exp(Complex(0.0, p * R * chi))) < 1e-13);
    }
  }
  Vec off(2);
  off << 1.0, 0.0;
  CHECK_THROWS_AS(cwig::shapiro_phi(1, cwig::momentum_1d(1.0), AmbientVector<double>(off), R),
                  cwig::DomainError);
}

TEST_CASE("Shapiro functions contract to plane waves as O(1/R)") {
  Vec xs(2), n(2);
  xs << 0.7, -0.4;
  n << 0.6, 0.8;
  const double p = 1.3;
  double prev = 1e300;
  for (double R : {10.0, 1e2, 1e3, 1e4}) {
    const AmbientVector<double> x(std::sqrt(R * R + xs.squaredNorm()), xs);
    const auto phi = cwig::shapiro_phi(2, MomentumLabel<double>{p, n}, x, R);
    const double dev = std::abs(phi - std::exp(Complex(0.0, p * n.dot(xs))));
    CHECK(dev < prev);
    CHECK(dev * R < 2.0);
    prev = dev;
  }
}

TEST_CASE("D = 1 sampled plane waves reproduce discrete Fourier orthogonality") {
  const int N = 32;
  const double h = 0.1, R = 2.0;
  for (int k = -3; k <= 3; ++k) {
    for (int l = -3; l <= 3; ++l) {
      Complex acc = 0.0;
      for (int j = 0; j < N; ++j) {
        const auto x = cwig::ambient_1d(j * h, R);
        const double pk = 2.0 * kPi * k / (N * h * R), pl = 2.0 * kPi * l / (N * h * R);
        acc += std::conj(cwig::shapiro_phi(1, cwig::momentum_1d(pk), x, R)) *
               cwig::shapiro_phi(1, cwig::momentum_1d(pl), x, R);
      }
      CHECK(std::abs(acc - (k == l ? double(N) : 0.0)) < 1e-11);
    }
  }
}

TEST_CASE("norm factor") {
  for (double p : {0.1, 0.7, 2.5}) {
    for (double R : {1.0, 2.0}) {
      CHECK(cwig::norm_factor(1, p, R) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(cwig::norm_factor(3, p, R) == doctest::Approx(1.0).epsilon(1e-13));
      // |Γ(ix)/Γ(1/2+ix)|² x = coth(πx)
      CHECK(cwig::norm_factor(2, p, R) == doctest::Approx(1.0 / std::tanh(kPi * p * R)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(cwig::norm_factor(2, 0.0, 1.0), cwig::DomainError);
}

TEST_CASE("geodesic pairs and the binding-delta midpoint") {
  const double R = 1.0;
  // D = 1 example: x at χ = 0.5, y = R(sinh 0.5, cosh 0.5), τ = 1.
  const auto x = cwig::ambient_1d(0.5, R);
  Vec yc(2);
  yc << std::sinh(0.5), std::cosh(0.5);
  const AmbientVector<double> y(yc);
  auto [xp, xpp] = cwig::geodesic_pair(x, y, 1.0);
  CHECK((xp.coords() - cwig::ambient_1d(0.0, R).coords()).norm() < 1e-15);
  CHECK((xpp.coords() - cwig::ambient_1d(1.0, R).coords()).norm() < 1e-15);
  auto [a0, b0] = cwig::geodesic_pair(x, y, 0.0);
  CHECK((a0.coords() - x.coords()).norm() == 0.0);
  CHECK((b0.coords() - x.coords()).norm() == 0.0);
  const auto mid = cwig::binding_delta_midpoint(cwig::ambient_1d(0.0, R), cwig::ambient_1d(1.0, R), R);
  CHECK((mid.coords() - cwig::ambient_1d(0.5, R).coords()).norm() < 1e-15);
  CHECK((cwig::binding_delta_midpoint(x, x, R).coords() - x.coords()).norm() < 1e-15);
  Vec bad(2);
  bad << 0.0, 1.0;
  CHECK_THROWS_AS(cwig::geodesic_pair(x, AmbientVector<double>(bad), 1.0),
                  cwig::DomainError);
}

TEST_CASE("random midpoint identities and round trips") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ut(-3.0, 3.0), ur(0.5, 3.0);
  std::uniform_int_distribution<int> ud(1, 3);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int D = ud(rng);
    const double R = ur(rng), tau = ut(rng);
    const auto x = random_point(rng, D, R);
    const auto y = orthogonal_spacelike(rng, x, R);
    auto [xp, xpp] = cwig::geodesic_pair(x, y, tau);
    const double R2 = R * R;
    worst = std::max({worst, std::abs(xp.minkowski_norm2() - R2) / R2, std::abs(xpp.minkowski_norm2() - R2) / R2,
                      std::abs(cwig::minkowski_dot(xp, xpp) - R2 * std::cosh(tau)) / (R2 * std::cosh(tau)),
                      std::abs(cwig::minkowski_dot(x, xp) - R2 * std::cosh(tau / 2)) / (R2 * std::cosh(tau / 2)),
                      std::abs(cwig::minkowski_dot(x, xpp) - R2 * std::cosh(tau / 2)) / (R2 * std::cosh(tau / 2))});
    const auto back = cwig::binding_delta_midpoint(xp, xpp, R);
    worst = std::max(worst, (back.coords() - x.coords()).norm() / (R * std::cosh(tau)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("boosts") {
  const double R = 1.3;
  Vec e1(2);
  e1 << 1.0, 0.0;
  const AmbientVector<double> origin(R, Vec::Zero(2));
  const auto bx = cwig::boost_point(BoostParams<double>{e1, 0.8}, origin);
  CHECK(bx.x0() == doctest::Approx(R * std::cosh(0.8)));
  CHECK(bx.xs()(0) == doctest::Approx(-R * std::sinh(0.8)));
  CHECK(bx.xs()(1) == 0.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uz(-2.0, 2.0);
  double worst_shell = 0.0, worst_comp = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int D = 1 + i % 3;
    const BoostParams<double> b1{unit(rng, D), uz(rng)};
    const BoostParams<double> b2{b1.m, uz(rng)};
    const BoostParams<double> b12{b1.m, b1.zeta + b2.zeta};
    const auto x = random_point(rng, D, R);
    const auto y = cwig::boost_point(b1, cwig::boost_point(b2, x));
    // Cancellation in x0² - |x|² costs ~ε x0², so the shell check uses one moderate boost.
    const auto z = cwig::boost_point(BoostParams<double>{b1.m, 0.75 * b1.zeta}, x);
    worst_shell = std::max(worst_shell, std::abs(z.minkowski_norm2() - R * R) / (R * R));
    const Vec oracle = cwig::boost_matrix(b1) * cwig::boost_matrix(b2) * x.coords();
    const Vec direct = cwig::boost_matrix(b12) * x.coords();
    worst_comp = std::max({worst_comp, (y.coords() - oracle).norm() / oracle.norm(),
                           (direct - oracle).norm() / oracle.norm()});
    if (i == 0) {
      const auto id = cwig::boost_point(BoostParams<double>{b1.m, 0.0}, x);
      CHECK((id.coords() - x.coords()).norm() == 0.0);
    }
  }
  CHECK(worst_shell < 1e-12);
  CHECK(worst_comp < 1e-12);
}

TEST_CASE("boosted directions and the multiplier") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uz(-2.5, 2.5);
  Vec m(2), perp(2);
  m << 1.0, 0.0;
  perp << 0.0, 1.0;
  auto [n0, mu0] = cwig::boost_direction(BoostParams<double>{m, 0.0}, perp);
  CHECK((n0 - perp).norm() < 1e-15);
  CHECK(mu0 == 1.0);
  auto [n1, mu1] = cwig::boost_direction(BoostParams<double>{m, 0.9}, perp);
  CHECK(mu1 == doctest::Approx(std::cosh(0.9)));
  auto [n2, mu2] = cwig::boost_direction(BoostParams<double>{m, 0.9}, m);
  CHECK(mu2 == doctest::Approx(std::exp(0.9)));
  CHECK((n2 - m).norm() < 1e-15);
  for (int i = 0; i < 2000; ++i) {
    const int D = 1 + i % 3;
    const BoostParams<double> b{unit(rng, D), uz(rng)};
    const Vec n = unit(rng, D);
    auto [np, mu] = cwig::boost_direction(b, n);
    CHECK(mu > 0.0);
    CHECK(std::abs(np.norm() - 1.0) < 1e-12);
    auto [nback, mu_inv] = cwig::boost_direction(BoostParams<double>{b.m, -b.zeta}, np);
    CHECK(std::abs(mu * mu_inv - 1.0) < 1e-12);
    CHECK((nback - n).norm() < 1e-11);
  }
}

TEST_CASE("Shapiro covariance under boosts") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uz(-1.5, 1.5), up(0.0, 3.0);
  const double R = 1.7;
  for (int D = 1; D <= 3; ++D) {
    const MomentumLabel<double> mom{0.9, unit(rng, D)};
    const auto x = random_point(rng, D, R);
    CHECK(cwig::shapiro_covariance_check(D, mom, x, BoostParams<double>{unit(rng, D), 0.0}, R) == 0.0);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const MomentumLabel<double> q{up(rng), unit(rng, D)};
      const BoostParams<double> b{unit(rng, D), uz(rng)};
      worst = std::max(worst, cwig::shapiro_covariance_check(D, q, random_point(rng, D, R), b, R));
    }
    CHECK(worst < 1e-10);
  }
  // D = 1: the multiplier has unit modulus.
  for (double z : {-1.0, 0.4, 2.0}) {
    Vec m(1), n(1);
    m << 1.0;
    n << -1.0;
    auto [np, mu] = cwig::boost_direction(BoostParams<double>{m, z}, n);
    const auto mult = std::exp(Complex(0.0, -0.7 * R) * std::log(mu));
    CHECK(std::abs(std::abs(mult) - 1.0) < 1e-15);
  }
}

TEST_CASE("Bargmann map") {
  CHECK(cwig::bargmann_angle(0.0, 1.2) == doctest::Approx(1.2));
  CHECK(cwig::bargmann_angle(0.7, 0.0) == 0.0);
  CHECK(cwig::bargmann_angle(std::log(2.0), kPi / 2) == doctest::Approx(0.927295218).epsilon(1e-9));
  Vec m(2);
  m << 1.0, 0.0;
  for (double phi : {-2.9, -1.0, 0.3, 1.5707963267948966, 3.0}) {
    for (double z : {-1.0, 0.2, std::log(2.0), 2.0}) {
      Vec n(2);
      n << std::cos(phi), std::sin(phi);
      auto [np, mu] = cwig::boost_direction(BoostParams<double>{m, z}, n);
      CHECK(std::atan2(np(1), np(0)) == doctest::Approx(cwig::bargmann_angle(z, phi)).epsilon(1e-12));
    }
  }
}

TEST_CASE("one-dimensional Shapiro transform pair") {
  cwig::QuadratureSpec quad{1e-12, 1e-12, 4000};
  const double r = 4.0;  // e^{-t²/2} <= e^{r²/2} e^{-r|t|}
  auto gauss = [](double chi) { return Complex(std::pow(kPi, -0.25) * std::exp(-0.5 * chi * chi)); };
  const cwig::FieldSampler f(gauss, {r, std::pow(kPi, -0.25) * std::exp(0.5 * r * r), 0.0}, cwig::Parity::even);
  for (double R : {1.0, 2.0}) {
    // f̃(p) = √R π^{-1/4} e^{-(pR)²/2}
    for (double p : {0.0, 0.4, 1.3, -2.1}) {
      const Complex got = cwig::shapiro_forward_1d(f, p, R, quad);
      const double want = std::sqrt(R) * std::pow(kPi, -0.25) * std::exp(-0.5 * p * p * R * R);
      CHECK(std::abs(got - want) < 1e-10);
    }
    const cwig::FieldSampler ft(
        [&f, R, quad](double p) { return cwig::shapiro_forward_1d(f, p, R, quad); },
        {r * R, std::sqrt(R) * std::pow(kPi, -0.25) * std::exp(0.5 * r * r), 0.0}, cwig::Parity::even);
    double worst = 0.0;
    for (double chi : {-2.0, -0.5, 0.0, 0.3, 1.7}) {
      worst = std::max(worst, std::abs(cwig::shapiro_inverse_1d(ft, chi, R, quad) - gauss(chi)));
      const Complex a = cwig::shapiro_inverse_1d(ft, chi, R, quad);
      const cwig::FieldSampler ft3([&ft](double p) { return 3.0 * ft(p); },
                                   {ft.envelope().rate, 3.0 * ft.envelope().scale, 0.0});
      CHECK(std::abs(cwig::shapiro_inverse_1d(ft3, chi, R, quad) - 3.0 * a) < 1e-10);
    }
    CHECK(worst < 1e-8);

    // Parseval for the unitary pair: ∫dχ |f|² = ∫dp |f̃|².
    auto ip = cwig::integrate([&](double p) { return std::norm(cwig::shapiro_forward_1d(f, p, R, quad)); },
                              -12.0 / R, 12.0 / R, cwig::QuadratureSpec{1e-11, 1e-11, 200});
    CHECK(ip.value == doctest::Approx(1.0).epsilon(1e-8));
  }
  // Narrow momentum profile gives a slowly varying position function.
  const double R = 1.0, w = 0.05;
  const cwig::FieldSampler narrow([w](double p) { return Complex(std::exp(-0.5 * p * p / (w * w))); },
                                  {4.0 / w, std::exp(8.0), 0.0});
  const Complex f0 = cwig::shapiro_inverse_1d(narrow, 0.0, R, quad);
  const Complex f1 = cwig::shapiro_inverse_1d(narrow, 1.0, R, quad);
  CHECK(std::abs(f1 - f0) < 0.01 * std::abs(f0));

  const cwig::FieldSampler phase([](double chi) { return std::exp(Complex(0.0, chi)); }, {0.0, 1.0, 0.0});
  CHECK_THROWS_AS(cwig::shapiro_forward_1d(phase, 0.3, 1.0, quad), cwig::DomainError);
}
