#pragma once

#include <limits>
#include <optional>

#include "deltalab/radial_core.hpp"

namespace deltalab {

// -Delta_alpha; alpha = +inf is the free Laplacian.
// On reduced amplitudes the domain condition is chi'(0) = 4 pi alpha chi(0).
struct PointInteraction {
  double alpha = std::numeric_limits<double>::infinity();

  bool is_free() const { return std::isinf(alpha) && alpha > 0; }
  double robin() const { return 4.0 * kPi * alpha; }
  // -(4 pi alpha)^2 for alpha < 0
  std::optional<double> bound_energy() const;
};

PointInteraction make_point_interaction(double alpha);

// (-Delta + lambda)^{-1} g + (alpha + sqrt(lambda)/4pi)^{-1} <G_lambda, g> G_lambda
ReducedWave pi_resolvent_apply(const PointInteraction& pi, double lambda, const ReducedWave& g,
                               double guard = 1e-8);

struct BoundState {
  double energy = 0.0;
  ReducedWave psi;  // sqrt(2|alpha|) e^{-4 pi |alpha| r}, renormalised on the grid
  cplx origin = 0.0;  // chi(0) with the same scaling
};
std::optional<BoundState> bound_state(const PointInteraction& pi, const RadialGrid& g);

// Amplitude on the Robin grid: chi(0) and the grid nodes. The discrete -Delta_alpha acting on
// it is symmetric for the weights gamma/(1+gamma), 1, ..., 1, 1/(1+gamma), gamma = e^{4 pi alpha h},
// a trapezoid rule through the origin; robin_norm is that weighted norm.
struct RobinState {
  cplx origin = 0.0;
  ReducedWave wave;
};
// chi(0) from the first two nodes under the Robin condition (zero for the free case)
RobinState robin_state(const PointInteraction& pi, const ReducedWave& chi);
double robin_norm(const PointInteraction& pi, const RobinState& s);
// Unitary in robin_norm. With SecondDifference it is exactly exp(-i t T) for the Robin matrix T.
RobinState pi_propagate(const PointInteraction& pi, double t, const RobinState& s,
                        Dispersion d = Dispersion::Continuum);

enum class PropagatorStrategy { RobinSpectral, KernelQuadrature };

ReducedWave pi_propagator_apply(const PointInteraction& pi, double t, const ReducedWave& psi,
                                PropagatorStrategy strategy = PropagatorStrategy::RobinSpectral);

// Kernel of e^{it Delta_alpha} - e^{it Delta_Dirichlet} on reduced amplitudes; depends on
// r + r' only.
cplx pi_kernel_correction(double b, double t, double R);

struct DomainElement {
  ReducedWave regular;  // reduced f
  cplx charge;          // coefficient of G_lambda
  cplx f0;              // f(0), from the slope of the reduced f at the origin
  double lambda_ref = 0.0;
};

// psi = f + charge G_lambda, charge = 4 pi chi(0+) by quadratic extrapolation.
DomainElement domain_decompose(const PointInteraction& pi, double lambda, const ReducedWave& psi);
ReducedWave reconstruct(const DomainElement& d);
// chi(0+) and chi'(0+) by one-sided quadratic extrapolation
cplx origin_value(const ReducedWave& chi);
cplx origin_slope(const ReducedWave& chi);

}  // namespace deltalab
