#pragma once

#include <string>
#include <vector>

#include "deltalab/evolution.hpp"

namespace deltalab {

// One scalar per eps, e.g. sup_t of a norm of the net member u_eps.
struct NetRecord {
  std::vector<double> epsilons;  // strictly decreasing, in (0, 1]
  std::vector<double> values;    // finite, non-negative
};

// Throws DataError.
void validate(const NetRecord& rec, std::size_t min_samples = 4);

// Least squares log(value) = c + s log(eps).
struct SlopeFit {
  double slope = 0.0;
  double half_width = 0.0;  // two standard errors of the slope (0 with two points)
  double intercept = 0.0;
  double rms_residual = 0.0;  // of the log fit
};
// DataError on fewer than min_samples points, non-positive values or non-positive eps.
SlopeFit fit_loglog(const std::vector<double>& eps, const std::vector<double>& values,
                    std::size_t min_samples = 2);

enum class NetTag { Moderate, NegligibleUpTo, Unclassified };
std::string net_tag_name(NetTag t);

struct NetClass {
  NetTag tag = NetTag::Unclassified;
  int order = 0;  // N of O(eps^-N) or M of O(eps^M)
  SlopeFit fit;
};

struct ClassifyOptions {
  double slope_tol = 0.1;
  std::size_t min_samples = 4;
  double residual_cap = 0.1;  // rms log residual beyond which the net is not a power law
};

// Nets containing a zero value are Unclassified: no finite sample certifies exact zero as
// negligible of every order, and a partial zero has no log slope.
NetClass classify_net(const NetRecord& rec, const ClassifyOptions& opt = {});

// Grid surrogates of Sobolev norms of psi = chi / r.
double gradient_norm(const ReducedWave& u);  // sqrt(4 pi int |chi'|^2), chi(0) = 0
double h1_surrogate(const ReducedWave& u);   // sqrt(||u||^2 + ||grad u||^2)
double h2_surrogate(const ReducedWave& u);   // ||u|| + ||D2 u||

enum class NetNorm { L2, H2Surrogate, TimeDerivative };

// values[k] = sup_t of the chosen norm of family[k]. Time derivatives by the centred
// difference of residual_net.
NetRecord norm_net(const std::vector<double>& eps, const std::vector<Trajectory>& family,
                   NetNorm norm);

// M_eps = i du/dt - (H_eps u + (w * |u|^2) u) on the snapshots, du/dt by the sixth-order
// centred difference (so at interior snapshots only); value = sup_t ||M_eps||. H_eps is
// applied with the discretisation of the flow, so for solver output the residual measures the
// time-stepping defect plus the differencing error ~ E (E d)^6 / 140 of modes of energy E at
// snapshot spacing d; narrow potentials need a small stride. DataError when a trajectory has
// fewer than 7 snapshots or uneven spacing.
NetRecord residual_net(const std::vector<double>& eps, const std::vector<Trajectory>& family,
                       const std::vector<Generator>& H, const RadialFunction& w);
// Residual time series of one trajectory, one entry per interior snapshot.
std::vector<double> residual_series(const Trajectory& u, const Generator& H,
                                    const RadialFunction& w);

enum class Verdict { Compatible, Inconclusive };
std::string verdict_name(Verdict v);

struct CompatibilityReport {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<double> epsilons;
  std::vector<double> distances;  // sup_t ||u_eps - u_cl||
};

// Compatible when the distances decrease strictly (or stay at exactly 0) along the ladder and
// the last is at most `fraction` of the first. DataError on ladders shorter than 3.
CompatibilityReport check_compatibility(const std::vector<double>& eps,
                                        const std::vector<Trajectory>& family,
                                        const Trajectory& u_cl, double fraction = 0.5);

// u_eps solves i u_t = -Delta u + c phi_eps u + (w * |u|^2) u, u(0) = a * rho_eps, and
// u_cl the free Hartree flow from a. phi must be a positive mollifier (ConfigurationError).
struct ColombeauSetup {
  Mollifier rho = gaussian_mollifier();
  Mollifier phi = gaussian_mollifier();
  double coefficient = 1.0;
  bool mollify_data = true;
  double fraction = 0.5;
};

struct ColombeauRun {
  std::vector<Trajectory> family;
  std::vector<Generator> generators;
  Trajectory classical;
  CompatibilityReport report;
};

ColombeauRun colombeau_pipeline(const ColombeauSetup& setup, const std::vector<double>& eps,
                                const RadialFunction& w, const ReducedWave& a,
                                const EvolutionConfig& cfg);

}  // namespace deltalab
