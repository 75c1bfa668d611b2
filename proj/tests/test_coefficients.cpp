#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "semigroup_lab/coefficients.hpp"

using namespace semigroup_lab;

namespace {

PolynomialFamilyParams reference_params(double k = 0.0, double p = 1.0, double r = 0.0,
                                        double gamma = 1.0) {
  PolynomialFamilyParams params;
  params.d = 1;
  params.m = 2;
  params.k = k;
  params.p = p;
  params.r = r;
  params.gamma = gamma;
  params.Q0 = Eigen::MatrixXd::Identity(1, 1);
  params.C0 = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd b(2, 2);
  b << 0, 1, -1, 0;
  params.B0 = {b};
  return params;
}

// 4th-order central difference of a scalar function of one coordinate.
template <typename Fn>
double fd4(Fn&& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

}  // namespace

TEST_CASE("reference family evaluates to the closed radial form") {
  const CoefficientField f = polynomial_family(reference_params());
  for (double x : {-1.5, 0.0, 0.7, 2.0}) {
    const Point pt{x, 0.0};
    CHECK(f.diffusion(pt)(0, 0) == doctest::Approx(1.0));
    CHECK(f.drift(pt)(0) == doctest::Approx(-x * (1.0 + x * x)));
    CHECK(f.reaction(pt)(0, 0) == doctest::Approx(-(1.0 + x * x)));
    CHECK(f.reaction(pt)(1, 1) == doctest::Approx(-(1.0 + x * x)));
    CHECK(f.coupling(0, pt)(0, 1) == doctest::Approx(1.0));
  }
}

TEST_CASE("family validation rejects bad inputs") {
  auto params = reference_params();
  params.k = -0.5;
  CHECK_THROWS_AS(polynomial_family(params), std::invalid_argument);

  params = reference_params();
  params.B0[0](0, 0) = 0.3;
  CHECK_THROWS_AS(polynomial_family(params), std::invalid_argument);

  params = reference_params();
  params.C0 = -Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(polynomial_family(params), std::invalid_argument);

  PolynomialFamilyParams p2 = reference_params();
  p2.d = 2;
  p2.Q0 = Eigen::MatrixXd::Identity(2, 2);
  p2.Q0(0, 1) = 0.5;  // not symmetric
  p2.B0 = {Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)};
  CHECK_THROWS_AS(polynomial_family(p2), std::invalid_argument);

  p2.Q0(1, 0) = 0.5;
  p2.Q0 = -p2.Q0;  // negative definite
  CHECK_THROWS_AS(polynomial_family(p2), std::invalid_argument);
}

TEST_CASE("zero coupling degenerates to a decoupled system") {
  auto params = reference_params();
  params.B0[0].setZero();
  params.gamma = 0.0;
  const CoefficientField f = polynomial_family(params);
  for (double x : {-2.0, 0.3, 5.0}) {
    CHECK(f.coupling(0, {x, 0.0}).norm() == 0.0);
    CHECK(spectral_bounds(f, {x, 0.0}, 0).beta0_hat == 0.0);
  }
}

TEST_CASE("analytic derivatives beat a 4th-order difference under halving") {
  // If the analytic derivative is exact, the comparison error is the FD
  // truncation error ~ h^4, so halving the step divides it by ~16.
  auto params = reference_params(1.0, 1.5, 0.5, 2.0);
  params.d = 2;
  params.Q0 = Eigen::MatrixXd::Identity(2, 2);
  params.Q0(0, 1) = params.Q0(1, 0) = 0.25;
  Eigen::MatrixXd b(2, 2);
  b << 0, 1, -1, 0;
  params.B0 = {b, 0.5 * b};
  const CoefficientField f = polynomial_family(params);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  const double h = 0.25;
  int checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Point x{coord(rng), coord(rng)};
    for (int axis = 0; axis < 2; ++axis) {
      MultiIndex beta{0, 0};
      beta[axis] = 1;
      auto entry = [&](double s) {
        Point y = x;
        y[axis] = s;
        return f.diffusion(y)(0, 1) + f.drift(y)(0) + f.reaction(y)(1, 1) +
               f.coupling(0, y)(0, 1);
      };
      const double exact = f.diffusion_deriv(x, beta)(0, 1) + f.drift_deriv(x, beta)(0) +
                           f.reaction_deriv(x, beta)(1, 1) +
                           f.coupling_deriv(0, x, beta)(0, 1);
      const double e1 = std::abs(exact - fd4(entry, x[axis], h));
      const double e2 = std::abs(exact - fd4(entry, x[axis], h / 2.0));
      if (e1 > 1e-9) {
        CHECK(e1 / e2 >= 12.0);
        ++checked;
      }
    }
  }
  CHECK(checked >= 5);
}

TEST_CASE("second and third derivatives agree with differences of analytic lower orders") {
  auto params = reference_params(0.5, 2.0, 1.0, 1.5);
  const CoefficientField f = polynomial_family(params);
  const double h = 0.2;
  for (double x : {-1.2, 0.4, 1.1}) {
    // d^2/dx^2 of the drift from the analytic first derivative.
    auto d1 = [&](double s) { return f.drift_deriv({s, 0.0}, {1, 0})(0); };
    const double exact2 = f.drift_deriv({x, 0.0}, {2, 0})(0);
    const double e1 = std::abs(exact2 - fd4(d1, x, h));
    const double e2 = std::abs(exact2 - fd4(d1, x, h / 2.0));
    if (e1 > 1e-9) CHECK(e1 / e2 >= 12.0);

    auto d2 = [&](double s) { return f.reaction_deriv({s, 0.0}, {2, 0})(0, 0); };
    const double exact3 = f.reaction_deriv({x, 0.0}, {3, 0})(0, 0);
    const double f1 = std::abs(exact3 - fd4(d2, x, h));
    const double f2 = std::abs(exact3 - fd4(d2, x, h / 2.0));
    if (f1 > 1e-9) CHECK(f1 / f2 >= 12.0);
  }
}

TEST_CASE("spectral bounds at the origin and along rays") {
  const CoefficientField f = polynomial_family(reference_params());
  const SpectralBounds s0 = spectral_bounds(f, {0.0, 0.0}, 1);
  CHECK(s0.lambda_q == doctest::Approx(1.0));
  CHECK(s0.big_lambda_c == doctest::Approx(-1.0));
  CHECK(s0.beta0_hat == doctest::Approx(std::sqrt(2.0)));

  // d=2, k=1, Q0=diag(1,2) at (1,0): eigenvalues scale by (1+|x|^2)=2.
  PolynomialFamilyParams p2 = reference_params(1.0, 1.0, 0.0, 1.0);
  p2.d = 2;
  p2.Q0 = Eigen::Vector2d(1.0, 2.0).asDiagonal();
  p2.B0 = {p2.B0[0], p2.B0[0]};
  const CoefficientField f2 = polynomial_family(p2);
  const SpectralBounds s1 = spectral_bounds(f2, {1.0, 0.0}, 0);
  CHECK(s1.lambda_q == doctest::Approx(2.0));
  CHECK(s1.big_lambda_q == doctest::Approx(4.0));

  CHECK_THROWS_AS(spectral_bounds(f, {0.0, 0.0}, 4), std::invalid_argument);
}

TEST_CASE("lambda_Q scales exactly with the radial weight") {
  PolynomialFamilyParams params = reference_params(1.3, 2.5, 0.3, 1.0);
  const CoefficientField f = polynomial_family(params);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  for (int i = 0; i < 20; ++i) {
    const double x = coord(rng);
    const double lam = spectral_bounds(f, {x, 0.0}, 0).lambda_q;
    CHECK(lam / std::pow(1.0 + x * x, params.k) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("growth constants against a dense radial scan") {
  const CoefficientField f = polynomial_family(reference_params());
  const GrowthConstants gc = growth_constants(f, 0.0, 2.0);
  CHECK(gc.theta_c_finite);
  CHECK(gc.h_finite);

  // Dense-scan oracle for Theta_C and H.
  double theta_scan = -1e300, h_scan = -1e300;
  for (int i = 0; i <= 200000; ++i) {
    const double rho = 50.0 * i / 200000.0;
    const double lc = -(1.0 + rho * rho);
    theta_scan = std::max(theta_scan, lc);
    h_scan = std::max(h_scan, 2.0 * lc + 2.0 / 2.0);
  }
  CHECK(gc.theta_c == doctest::Approx(theta_scan).epsilon(1e-9));
  CHECK(gc.h == doctest::Approx(h_scan).epsilon(1e-9));
  CHECK(gc.theta_c_argmax == doctest::Approx(0.0).epsilon(1e-4));

  const GrowthConstants gnu = growth_constants(f, 0.5, 4.0);
  CHECK(gnu.h_nu == doctest::Approx(gnu.h + 0.5 * gnu.theta_c));
  CHECK(gnu.h_tilde_p == doctest::Approx(0.5 * gnu.h + 0.25 * gnu.theta_c));
}

TEST_CASE("zero coupling collapses H to twice Theta_C") {
  auto params = reference_params();
  params.B0[0].setZero();
  const CoefficientField f = polynomial_family(params);
  const GrowthConstants gc = growth_constants(f, 0.0, 2.0);
  CHECK(gc.h == doctest::Approx(2.0 * gc.theta_c));
}

TEST_CASE("H finiteness follows the coupling-vs-reaction exponent race") {
  // gamma > 2r - k keeps H finite.
  CHECK(growth_constants(polynomial_family(reference_params(0.0, 1.0, 0.4, 1.0)), 0.0, 2.0)
            .h_finite);
  // gamma < 2r - k pushes H to infinity.
  const CoefficientField bad = CoefficientField::raw(
      1, 2, 0.0, 1.0, 1.0, 0.5, Eigen::MatrixXd::Identity(1, 1),
      {(Eigen::MatrixXd(2, 2) << 0, 1, -1, 0).finished()}, Eigen::MatrixXd::Identity(2, 2),
      true);
  const GrowthConstants gc = growth_constants(bad, 0.0, 2.0);
  CHECK_FALSE(gc.h_finite);
  CHECK(std::isinf(gc.h));
}

TEST_CASE("H is monotone in the reaction floor") {
  double last = 1e300;
  for (double c : {0.5, 1.0, 2.0}) {
    auto params = reference_params();
    params.C0 = c * Eigen::MatrixXd::Identity(2, 2);
    const double h = growth_constants(polynomial_family(params), 0.0, 2.0).h;
    CHECK(h <= last + 1e-12);
    last = h;
  }
}

TEST_CASE("nu outside [0,2) is rejected") {
  const CoefficientField f = polynomial_family(reference_params());
  CHECK_THROWS_AS(growth_constants(f, 2.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(growth_constants(f, -0.1, 2.0), std::invalid_argument);
}

TEST_CASE("coefficient JSON round-trips") {
  const auto params = reference_params();
  const nlohmann::json j = family_params_to_json(params);
  const auto back = family_params_from_json(j);
  CHECK(back.d == params.d);
  CHECK(back.m == params.m);
  CHECK(back.k == params.k);
  CHECK((back.Q0 - params.Q0).norm() == 0.0);
  CHECK((back.B0[0] - params.B0[0]).norm() == 0.0);
  const CoefficientField f = polynomial_family(back);
  CHECK(f.fingerprint() == polynomial_family(params).fingerprint());
}
