#include <gtest/gtest.h>

#include <cmath>

#include "deltalab/oracles.hpp"

using namespace deltalab;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST(Oracle, GaussLegendreExactOnPolynomials) {
  auto rule = oracle::gauss_legendre(6, -1.0, 2.0);
  for (int p = 0; p <= 11; ++p) {
    double s = 0.0;
    for (auto [x, w] : rule) s += w * std::pow(x, p);
    double exact = (std::pow(2.0, p + 1) - std::pow(-1.0, p + 1)) / (p + 1);
    EXPECT_NEAR(s, exact, 1e-11 * std::max(1.0, std::abs(exact))) << p;
  }
}

TEST(Oracle, ConvolutionAgainstGaussianClosedForm) {
  auto ga = [](double r) { return std::exp(-r * r); };
  auto gb = [](double r) { return std::exp(-0.5 * r * r); };
  for (double r : {0.0, 0.3, 1.0, 2.5})
    EXPECT_NEAR(oracle::convolution_3d(ga, gb, r, 9.0), oracle::gaussian_convolution(1.0, 0.5, r),
                1e-10);
}

TEST(Oracle, GaussianNorm) {
  // int e^{-r^2} d^3x = pi^{3/2}
  EXPECT_NEAR(oracle::gaussian_l2_norm(), std::pow(pi, 0.75), 1e-12);
}

TEST(Oracle, ShootingFindsSquareWellResonance) {
  auto well = [](double r) { return r < 1.0 ? 1.0 : 0.0; };
  double d = oracle::resonant_depth(well, 1.0, 1.0, 4.0);
  EXPECT_NEAR(d, oracle::square_well_resonant_depth(), 1e-4);
  EXPECT_NEAR(std::cos(std::sqrt(d)), 0.0, 1e-4);

  // at the resonance chi is flat outside the well and its far value is sin(sqrt d) = 1
  const double d0 = pi * pi / 4.0;
  auto z = oracle::zero_energy([&](double r) { return -d0 * well(r); }, 3.0);
  EXPECT_NEAR(z.slope_far * std::sqrt(d0), 0.0, 1e-3);
  EXPECT_NEAR(z.value_far * std::sqrt(d0), 1.0, 1e-3);
  EXPECT_NEAR(z.v_phi, oracle::square_well_v_phi(d0), 1e-3 * oracle::square_well_v_phi(d0));
}

TEST(Oracle, RollnikUnitBall) {
  // the overlap volume pi (4 + s)(2 - s)^2 / 12 of two unit balls at distance s gives
  // int int |x - y|^-2 = 4 pi^2
  auto ball = [](double r) { return r <= 1.0 ? 1.0 : 0.0; };
  double a = oracle::rollnik_monte_carlo(ball, 1.0, 400000, 3);
  EXPECT_NEAR(a, 2.0 * pi, 0.02 * 2.0 * pi);
  EXPECT_EQ(a, oracle::rollnik_monte_carlo(ball, 1.0, 400000, 3));
  EXPECT_NE(a, oracle::rollnik_monte_carlo(ball, 1.0, 400000, 4));
}

TEST(Oracle, RobinGreenFunction) {
  const double k = 1.3, b = -0.4, s = 0.7, h = 1e-5;
  EXPECT_NEAR(oracle::robin_green(k, b, 0.2, s), oracle::robin_green(k, b, s, 0.2), 1e-14);
  // boundary condition chi'(0) = b chi(0) in the first argument
  double d0 = (oracle::robin_green(k, b, h, s) - oracle::robin_green(k, b, -h, s)) / (2.0 * h);
  EXPECT_NEAR(d0, b * oracle::robin_green(k, b, 0.0, s), 1e-8);
  // jump of the derivative at r = s is -1
  double left = (oracle::robin_green(k, b, s - h, s) - oracle::robin_green(k, b, s - 2 * h, s)) / h;
  double right = (oracle::robin_green(k, b, s + 2 * h, s) - oracle::robin_green(k, b, s + h, s)) / h;
  EXPECT_NEAR(right - left, -1.0, 1e-4);
  // Dirichlet limit
  EXPECT_NEAR(oracle::robin_green(k, 1e12, 0.0, s), 0.0, 1e-10);
}
