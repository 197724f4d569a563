#pragma once

#include <string>
#include <utility>
#include <vector>

#include "deltalab/radial_core.hpp"

namespace deltalab {

enum class ProfileKind { SquareWell, Gaussian, Exponential };

// V(r) = amplitude * shape(r); shapes are 1[r <= 1], exp(-r^2), exp(-r).
// A square well of depth d has amplitude -d.
struct Profile {
  ProfileKind kind = ProfileKind::SquareWell;
  double amplitude = -1.0;

  double operator()(double r) const;
  // scale below which sampling on a grid is meaningless
  double width() const { return 1.0; }
  // radius beyond which |V| is below 1e-300 (or exactly zero)
  double support() const;
  bool sign_constant() const { return amplitude != 0.0; }
  int sign() const { return amplitude > 0 ? 1 : (amplitude < 0 ? -1 : 0); }
};

Profile square_well(double depth);
Profile gaussian_profile(double amplitude);
Profile exponential_profile(double amplitude);
Profile profile_by_name(const std::string& name, double amplitude);
std::string profile_name(ProfileKind k);

// eta(e) = 1 + e (1 - e) q(e), so eta(0) = eta(1) = 1 exactly and eta'(0) = q(0).
struct Eta {
  std::vector<double> q;  // q(e) = q[0] + q[1] e + ...

  double operator()(double eps) const;
  double prime0() const { return q.empty() ? 0.0 : q[0]; }
};

Eta make_eta(std::vector<double> q);

struct ScaledPotential {
  Profile base;
  double sigma = 0.0;
  Eta eta;
};

ScaledPotential make_scaled_potential(Profile base, double sigma, Eta eta = {});

// eta(e) e^{-sigma} V(r / e)
double scaled_value(const ScaledPotential& P, double eps, double r);

// V_eps on the grid. The square well is cell averaged with r^2 weight at its edge so the
// discrete integral of the step is second order. Throws UnderResolvedError when the
// scaled profile spans fewer than 4 cells.
RadialFunction sample_scaled(const ScaledPotential& P, double eps, const RadialGrid& g);
RadialFunction sample_profile(const Profile& V, const RadialGrid& g);

// 4 pi h sum |V_i| r_i^2
double l1_norm(const RadialFunction& V);

// sqrt of the double integral of |V(x)||V(y)| / |x - y|^2. The log singularity of the
// angular average is integrated exactly against the piecewise linear interpolant.
// Returns +inf when the sum exceeds cap.
double rollnik_norm(const RadialFunction& V, double cap = 1e300);

struct Factorization {
  RadialFunction u, v;
};
Factorization factorize(const RadialFunction& V);

enum class MollifierKind { Gaussian, Bump };

struct Mollifier {
  MollifierKind kind = MollifierKind::Gaussian;
  bool positive = true;
  double operator()(double r) const;
};

Mollifier gaussian_mollifier();
// C exp(-1/(1-r^2)) on r < 1; not strictly positive
Mollifier bump_mollifier();

// rho_eps = eps^{-3} rho(r / eps) on the grid; warns on std::clog when eps < 4h.
RadialFunction mollify(const Mollifier& rho, double eps, const RadialGrid& g);
bool mollifier_resolved(double eps, const RadialGrid& g);

// F * rho_eps
ReducedWave embed(const ReducedWave& F, const Mollifier& rho, double eps);
// delta * rho_eps = rho_eps, reduced
ReducedWave embed_delta(const Mollifier& rho, double eps, const RadialGrid& g);

}  // namespace deltalab
