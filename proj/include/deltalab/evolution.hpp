#pragma once

#include <vector>

#include "deltalab/point_interaction.hpp"
#include "deltalab/potentials.hpp"

namespace deltalab {

// Hartree kernel w(r) = strength * {1, e^{-r^2}, e^{-r}}; the constant is cut at r_max.
enum class InteractionKind { Constant, Gaussian, Exponential };

struct Interaction {
  InteractionKind kind = InteractionKind::Gaussian;
  double strength = 1.0;

  double operator()(double r) const;
  double sup() const { return std::abs(strength); }
};

Interaction interaction_by_name(const std::string& name, double strength);
std::string interaction_name(InteractionKind k);
RadialFunction sample_interaction(const Interaction& w, const RadialGrid& g);

enum class Scheme { Strang, DuhamelPicard };

struct EvolutionConfig {
  double T = 1.0;
  double dt = 1e-3;
  std::size_t snapshot_stride = 10;
  Scheme scheme = Scheme::Strang;
  int picard_iters = 8;
  double picard_tol = 1e-10;  // relative to the norm of the iterate
  double drift_tol = 1e-6;
  int max_halvings = 4;
};

// Throws ConfigurationError.
void validate(const EvolutionConfig& cfg);

struct Trajectory {
  std::vector<double> times;
  std::vector<ReducedWave> snapshots;
  std::vector<cplx> origins;       // chi(0) of point-interaction runs, else empty
  std::vector<double> l2_history;  // l2_norm of the snapshots
  std::vector<double> conserved;   // norm the scheme conserves (robin_norm for -Delta_alpha)
  double drift = 0.0;              // max relative deviation of `conserved`
  double dt_used = 0.0;
  int picard_max = 0;  // most Picard iterations taken by one step
};

// Linear part H of i u_t = H u + (w * |u|^2) u. Free and point flows use the exact
// sine-mode dispersion, the perturbed flow the second-difference Laplacian plus V.
struct Generator {
  enum class Kind { Free, Perturbed, Point } kind = Kind::Free;
  RadialFunction V;  // Perturbed
  PointInteraction pi;
};

Generator free_generator();
Generator perturbed_generator(const ScaledPotential& P, double eps, const RadialGrid& g);
Generator point_generator(const PointInteraction& pi);
// -Delta + V for an arbitrary sampled potential (mollified delta coefficients).
Generator potential_generator(const RadialFunction& V);

// H u with the discretisation the flow uses. Not defined for the point case (DomainError).
ReducedWave apply_generator(const Generator& H, const ReducedWave& u);

// exp(-i t H). Free and point cases by sine transforms, the perturbed case by Lanczos.
// s.origin is carried by the point case and ignored otherwise.
RobinState linear_propagate(const Generator& H, double t, const RobinState& s);

// w * |u|^2
RadialFunction hartree_potential(const ReducedWave& u, const RadialFunction& w);
// (w * |u|^2) u
ReducedWave hartree_term(const ReducedWave& u, const RadialFunction& w);

Trajectory evolve(const Generator& H, const RadialFunction& w, const ReducedWave& a,
                  const EvolutionConfig& cfg);
Trajectory evolve_perturbed(const ScaledPotential& P, double eps, const RadialFunction& w,
                            const ReducedWave& a, const EvolutionConfig& cfg);
Trajectory evolve_free(const RadialFunction& w, const ReducedWave& a, const EvolutionConfig& cfg);
Trajectory evolve_pi(const PointInteraction& pi, const RadialFunction& w, const ReducedWave& a,
                     const EvolutionConfig& cfg);

// max over snapshots of the L2 distance; DataError on mismatched times or grids.
double sup_l2_distance(const Trajectory& a, const Trajectory& b);

// u_eps - u = P + Q + R with P = (U_eps(t) - U(t)) a and
// R = -i int_0^t (U_eps(t - s) - U(t - s)) g(u(s)) ds, g(u) = (w * |u|^2) u.
struct PQRReport {
  std::vector<double> times;
  std::vector<double> P, Q, R, total;
  std::vector<double> g_norm;  // ||g(u(t))||
  double P_sup = 0.0, Q_sup = 0.0, R_sup = 0.0, total_sup = 0.0;
  double g_bound = 0.0;  // ||w||_inf ||a||^3
  bool bound_ok = true;
};

PQRReport pqr_diagnostic(const Trajectory& u_eps, const Trajectory& u_ref, const Generator& H_eps,
                         const Generator& H_ref, const RadialFunction& w, double w_sup);
// Reference generator free.
PQRReport pqr_diagnostic(const Trajectory& u_eps, const Trajectory& u_ref, const ScaledPotential& P,
                         double eps, const Interaction& w);

}  // namespace deltalab
