#pragma once

#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "deltalab/potentials.hpp"
#include "deltalab/radial_core.hpp"

namespace deltalab {

// u (-Delta + mu)^{-1} v on the s-wave sector, restricted to the nodes where v > 0.
// K = h v_i k_mu(r_i, r_j) v_j is symmetric positive semi-definite; for sign-constant V
// the operator is sign * K.
struct BSOperator {
  RadialGrid grid;
  double mu = 0.0;
  std::vector<std::size_t> support;  // grid indices kept
  rvec v, u;                         // on the support
  int sign = 0;                      // +1 / -1 sign-constant, 0 zero or mixed
  Eigen::MatrixXd K;

  Eigen::MatrixXd matrix() const;  // diag(sign(u)) K
  double frobenius() const { return K.norm(); }
  std::size_t size() const { return support.size(); }
};

BSOperator bs_operator(const RadialFunction& V, double mu);
BSOperator bs_operator(const ScaledPotential& P, const RadialGrid& g, double mu, double eps = 1.0);

struct BSSpectrum {
  std::vector<double> values;  // ascending
  Eigen::MatrixXd vectors;     // columns, orthonormal in the Euclidean sense
};

// k lowest eigenvalues (most negative first). Mixed sign is a DomainError.
BSSpectrum bs_eigenvalues(const BSOperator& B, std::size_t k);

struct ResonanceReport {
  RadialGrid grid;
  double tol = 5e-3;
  bool resonant = false;
  double nearest_eigenvalue = 0.0;
  double v_phi_integral = 0.0;  // int v phi dx = int V psi dx
  double alpha = std::numeric_limits<double>::infinity();
  ReducedWave phi;     // reduced, int sign(V) |phi|^2 = -1
  RadialFunction psi;  // (-Delta)^{-1} v phi, not reduced
};

ResonanceReport detect_resonance(const RadialFunction& V, double tol = 5e-3,
                                 double eta_prime0 = 0.0);
ResonanceReport detect_resonance(const ScaledPotential& P, const RadialGrid& g,
                                 double tol = 5e-3);
// Flag only if it also holds on the grid with h/2.
ResonanceReport detect_resonance_confirmed(const ScaledPotential& P, const RadialGrid& g,
                                           double tol = 5e-3);

double compute_alpha(const ResonanceReport& rep, double eta_prime0);

// Depth d for which -d * shape has its lowest BS eigenvalue at exactly -1 on this grid.
double bs_resonant_depth(ProfileKind shape, const RadialGrid& g);
// Same for the second-difference stencil with spacing hs: the discrete zero-energy
// solution is flat outside the support.
double stencil_resonant_depth(ProfileKind shape, double hs);

// Bisection on the sign of (lowest BS eigenvalue + 1) over depths in [lo, hi].
double bisect_resonant_depth(ProfileKind shape, const RadialGrid& g, double lo, double hi,
                             double tol = 1e-10);

// Factors of the scaled resolvent difference
//   (H_eps + lambda)^{-1} - (-Delta + lambda)^{-1} = -A F C
// Outer variable on the physical grid, inner on the unit-scale grid s_j = r_j / eps
// (spacing h / eps), kept only where V does not vanish.
struct KKFactors {
  RadialGrid grid;   // physical
  RadialGrid inner;  // unit scale
  double eps = 1.0, sigma = 0.0, lambda = 1.0, eta_eps = 1.0;
  std::vector<std::size_t> support;
  rvec u, v;          // base-scale factors on the support
  Eigen::MatrixXd A;  // n x m, a(r, s) = k_lambda(r, eps s) v(s) / eps
  Eigen::MatrixXd C;  // m x n, c(s, r) = u(s) k_lambda(eps s, r) / eps
  Eigen::MatrixXd F;  // m x m, acts on inner samples
  double rcond = 0.0;

  double w_outer() const { return grid.h; }
  double w_inner() const { return inner.h; }
  // s-wave Hilbert-Schmidt norms of the kernels
  double hs_A() const;
  double hs_C() const;
  ReducedWave apply(const ReducedWave& g) const;  // -A F C g
};

KKFactors kk_factors(const ScaledPotential& P, const RadialGrid& g, double eps, double lambda,
                     double cond_cap = 1e12);

// Hilbert-Schmidt norm of A_eps as an operator on L^2(R^3) (all partial waves), from the
// angular closed form of int |G_lambda(x - eps y)|^2 dx over |x| < r_max.
double hs_norm_full(const KKFactors& kk);

ReducedWave perturbed_resolvent_apply(const ScaledPotential& P, double eps, double lambda,
                                      const ReducedWave& g);

struct ResolventCheck {
  ReducedWave direct, factorized;
  double discrepancy = 0.0;
};
ResolventCheck resolvent_difference_check(const ScaledPotential& P, double eps, double lambda,
                                          const ReducedWave& g);
ResolventCheck resolvent_difference_check(const KKFactors& kk, const ScaledPotential& P,
                                          const ReducedWave& g);

// Rank-one eps -> 0 limits on the grids of kk.
struct LimitOperators {
  rvec G;                // e^{-k r_i}, the reduced 4 pi G_lambda
  rvec a_inner, c_inner; // s v(s), s u(s)
  bool has_F = false;
  Eigen::MatrixXd F;     // acts on inner samples
  double combined = 0.0; // -AFC -> combined * e^{-k(r+r')}, kernel in dr'

  double hs_A() const;   // ||A^{(lambda)}||_HS on the kk grids
  double w_outer = 0.0, w_inner = 0.0;
};

// F-limit needs a resonance on kk.inner; pass nullptr for the non-resonant regimes.
LimitOperators limit_operators(const KKFactors& kk, const ResonanceReport* rep, double eta_prime0);

struct KKDistances {
  double A = 0.0;         // HS distance A_eps - A^{(lambda)}
  double C = 0.0;
  double F = 0.0;         // operator norm, NaN without F-limit
  double combined = 0.0;  // HS distance of -AFC to its rank-one limit
};
KKDistances kk_limit_distances(const KKFactors& kk, const LimitOperators& lim);

// Ten fixed unit-norm radial probes.
std::vector<ReducedWave> probe_set(const RadialGrid& g);

using Resolvent = std::function<ReducedWave(const ReducedWave&)>;
// max over probes of || R1 g - R2 g ||
double probe_distance(const std::vector<ReducedWave>& probes, const Resolvent& R1,
                      const Resolvent& R2);

}  // namespace deltalab
