#pragma once

// Reference computations that share no code with the library proper.
// Standard library only.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace deltalab::oracle {

using Profile = std::function<double(double)>;

// Nodes and weights of an n-point Gauss-Legendre rule on [a, b].
std::vector<std::pair<double, double>> gauss_legendre(int n, double a, double b);

// int_{R^3} g(|x - y|) f(|y|) dy at |x| = r, f supported in [0, R].
double convolution_3d(const Profile& g, const Profile& f, double r, double R, int panels = 64,
                      int order = 12);

// Zero-energy problem chi'' = V chi, chi(0) = 0, chi'(0) = 1, integrated by RK4 to R.
struct ZeroEnergy {
  double slope_far = 0.0;     // chi'(R)
  double value_far = 0.0;     // chi(R)
  double v_phi = 0.0;         // int v phi dx with phi = v chi normalised to unit L^2
  double norm_psi_in = 0.0;   // 4 pi int_0^R chi^2 dr (unnormalised)
};
ZeroEnergy zero_energy(const Profile& V, double R, int steps = 200000);

// Depth d in [lo, hi] where the attractive well -d * shape(r) has a zero-energy resonance.
double resonant_depth(const Profile& shape, double R, double lo, double hi);

// Rollnik norm by Monte Carlo over pairs (x, y) with |V| supported in the ball of radius R.
double rollnik_monte_carlo(const Profile& absV, double R, std::uint64_t samples,
                           std::uint64_t seed);

// Half-line Robin Green function for -d^2/dr^2 + k^2 with chi'(0) = b chi(0).
double robin_green(double k, double b, double r, double s);

// Gaussian closed forms.
double gaussian_l2_norm();  // || exp(-r^2/2) ||
// e^{-a r^2} * e^{-b r^2} evaluated at radius r
double gaussian_convolution(double a, double b, double r);

// Shooting check of the discrete-free resonance: cos(sqrt(d)) = 0 for the unit square well.
double square_well_resonant_depth();
double square_well_v_phi(double depth);

}  // namespace deltalab::oracle
