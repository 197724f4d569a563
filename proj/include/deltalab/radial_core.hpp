#pragma once

#include <complex>
#include <cstddef>
#include <functional>

#include <Eigen/Dense>

#include "deltalab/errors.hpp"

namespace deltalab {

using cplx = std::complex<double>;
using cvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

// Uniform half-line grid, nodes r_i = i*h for i = 1..n, h = r_max/(n+1).
// Index 0 of every sample array is the node r_1.
struct RadialGrid {
  double r_max = 0.0;
  std::size_t n = 0;
  double h = 0.0;

  double r(std::size_t i) const { return double(i + 1) * h; }
  rvec nodes() const;
  bool operator==(const RadialGrid& o) const { return n == o.n && r_max == o.r_max; }
};

RadialGrid make_grid(double r_max, std::size_t n);

// chi(r) = r * psi(r) sampled at the nodes.
struct ReducedWave {
  RadialGrid grid;
  cvec chi;
};

// Plain (not reduced) samples of a radial function.
struct RadialFunction {
  RadialGrid grid;
  rvec f;
};

ReducedWave reduce(const RadialGrid& g, const std::function<cplx(double)>& psi);
ReducedWave from_chi(const RadialGrid& g, const std::function<cplx(double)>& chi);
RadialFunction sample(const RadialGrid& g, const std::function<double(double)>& f);
ReducedWave zero_wave(const RadialGrid& g);

// |psi|^2 = |chi|^2 / r^2
RadialFunction abs2(const ReducedWave& u);

void require_same_grid(const RadialGrid& a, const RadialGrid& b);

double l2_norm(const ReducedWave& psi);
// <a, b> = 4 pi h sum conj(a_i) b_i
cplx inner(const ReducedWave& a, const ReducedWave& b);
double l2_distance(const ReducedWave& a, const ReducedWave& b);
// 4 pi h sum r_i^2 f_i
double integral(const RadialFunction& f);

ReducedWave operator+(const ReducedWave& a, const ReducedWave& b);
ReducedWave operator-(const ReducedWave& a, const ReducedWave& b);
ReducedWave operator*(cplx c, const ReducedWave& a);

// G_lambda(r) = exp(-r sqrt(lambda)) / (4 pi r)
double green_function(double lambda, double r);

// Reduced kernel of (-Delta + mu)^{-1} on radial functions:
// exp(-k max) sinh(k min) / k, k = sqrt(mu); min(r, s) at mu = 0.
double swave_kernel(double mu, double r, double s);

enum class ResolventStrategy { Tridiagonal, KernelQuadrature };

ReducedWave free_resolvent_apply(double lambda, const ReducedWave& f,
                                 ResolventStrategy strategy = ResolventStrategy::Tridiagonal);

// (-d^2/dr^2 + lambda + diag) chi = rhs with chi(0) = chi(r_max) = 0.
// Partial pivoting; throws NumericalError on a singular system.
cvec solve_dirichlet(const RadialGrid& g, double lambda, const rvec* diag, const cvec& rhs);

// (-d^2/dr^2 + lambda) by second differences with Dirichlet ends.
ReducedWave apply_shifted_laplacian(double lambda, const ReducedWave& chi);

// Eigenvalue assigned to a sine mode of angle theta = k h: the continuum k^2, or the
// second-difference value (4 / h^2) sin^2(theta / 2) so that the kinetic step is exact for the
// same matrix as the resolvent solves.
enum class Dispersion { Continuum, SecondDifference };
double mode_energy(Dispersion d, double theta, double h);

// e^{it Delta} by the sine transform; mode m has theta = m pi h / r_max.
ReducedWave free_propagator_apply(double t, const ReducedWave& psi,
                                  Dispersion d = Dispersion::Continuum);

// -Delta chi, spectral (Continuum) or three-point stencil.
ReducedWave minus_laplacian(const ReducedWave& psi, Dispersion d = Dispersion::Continuum);

// Radial profile of the 3D convolution g * f.
RadialFunction radial_convolve(const RadialFunction& g, const RadialFunction& f);

}  // namespace deltalab
