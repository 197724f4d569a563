#include "deltalab/colombeau.hpp"

#include <algorithm>
#include <cmath>

namespace deltalab {

void validate(const NetRecord& rec, std::size_t min_samples) {
  if (rec.epsilons.size() != rec.values.size())
    throw DataError("net record: epsilons and values differ in length");
  if (rec.epsilons.size() < min_samples)
    throw DataError("net record: need at least " + std::to_string(min_samples) + " samples, got " +
                    std::to_string(rec.epsilons.size()));
  for (std::size_t k = 0; k < rec.epsilons.size(); ++k) {
    double e = rec.epsilons[k];
    if (!(e > 0.0 && e <= 1.0)) throw DataError("net record: eps outside (0, 1]");
    if (k > 0 && !(e < rec.epsilons[k - 1]))
      throw DataError("net record: eps must be strictly decreasing");
    if (!std::isfinite(rec.values[k]) || rec.values[k] < 0.0)
      throw DataError("net record: values must be finite and non-negative");
  }
}

SlopeFit fit_loglog(const std::vector<double>& eps, const std::vector<double>& values,
                    std::size_t min_samples) {
  const std::size_t n = eps.size();
  if (values.size() != n) throw DataError("fit: length mismatch");
  if (n < std::max<std::size_t>(min_samples, 2))
    throw DataError("fit: need at least " + std::to_string(std::max<std::size_t>(min_samples, 2)) +
                    " points");
  std::vector<double> x(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(eps[k] > 0.0) || !(values[k] > 0.0) || !std::isfinite(values[k]))
      throw DataError("fit: eps and values must be positive and finite");
    x[k] = std::log(eps[k]);
    y[k] = std::log(values[k]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) mx += x[k], my += y[k];
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw DataError("fit: eps values must differ");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double r = y[k] - f.intercept - f.slope * x[k];
    ss += r * r;
  }
  f.rms_residual = std::sqrt(ss / double(n));
  if (n > 2) f.half_width = 2.0 * std::sqrt(ss / double(n - 2) / sxx);
  return f;
}

std::string net_tag_name(NetTag t) {
  switch (t) {
    case NetTag::Moderate: return "moderate";
    case NetTag::NegligibleUpTo: return "negligible_up_to";
    case NetTag::Unclassified: return "unclassified";
  }
  return "?";
}

NetClass classify_net(const NetRecord& rec, const ClassifyOptions& opt) {
  validate(rec, opt.min_samples);
  NetClass c;
  if (std::any_of(rec.values.begin(), rec.values.end(), [](double v) { return v == 0.0; }))
    return c;
  c.fit = fit_loglog(rec.epsilons, rec.values, opt.min_samples);
  if (c.fit.rms_residual > opt.residual_cap) return c;
  const double s = c.fit.slope;
  if (s > 0.5) {
    c.tag = NetTag::NegligibleUpTo;
    c.order = int(std::floor(s + opt.slope_tol));
  } else {
    c.tag = NetTag::Moderate;
    c.order = std::max(0, int(std::ceil(-s - opt.slope_tol)));
  }
  return c;
}

double gradient_norm(const ReducedWave& u) {
  const double h = u.grid.h;
  double s = std::norm(u.chi[0]);
  for (Eigen::Index i = 1; i < u.chi.size(); ++i) s += std::norm(u.chi[i] - u.chi[i - 1]);
  s += std::norm(u.chi[u.chi.size() - 1]);
  return std::sqrt(4.0 * kPi * s / h);
}

double h1_surrogate(const ReducedWave& u) { return std::hypot(l2_norm(u), gradient_norm(u)); }

double h2_surrogate(const ReducedWave& u) {
  return l2_norm(u) + l2_norm(minus_laplacian(u, Dispersion::SecondDifference));
}

namespace {

// sixth-order centred first derivative
constexpr double kD1[3] = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
constexpr std::size_t kHalf = 3;

double uniform_spacing(const Trajectory& u) {
  const auto& t = u.times;
  if (t.size() != u.snapshots.size()) throw DataError("trajectory: times and snapshots differ");
  if (t.size() < 2 * kHalf + 1)
    throw DataError("time differencing needs at least 7 snapshots, got " +
                    std::to_string(t.size()));
  const double d = t[1] - t[0];
  for (std::size_t k = 1; k < t.size(); ++k)
    if (std::abs(t[k] - t[k - 1] - d) > 1e-9 * std::max(1.0, t.back()))
      throw DataError("time differencing needs evenly spaced snapshots");
  return d;
}

ReducedWave time_derivative(const Trajectory& u, std::size_t k, double d) {
  cvec acc = cvec::Zero(u.snapshots[k].chi.size());
  for (std::size_t j = 1; j <= kHalf; ++j)
    acc += kD1[j - 1] * (u.snapshots[k + j].chi - u.snapshots[k - j].chi);
  return {u.snapshots[k].grid, acc / d};
}

void check_family(const std::vector<double>& eps, std::size_t n) {
  if (eps.size() != n) throw DataError("net: one trajectory per eps required");
}

}  // namespace

NetRecord norm_net(const std::vector<double>& eps, const std::vector<Trajectory>& family,
                   NetNorm norm) {
  check_family(eps, family.size());
  NetRecord rec{eps, {}};
  for (const auto& u : family) {
    double best = 0.0;
    if (norm == NetNorm::TimeDerivative) {
      double d = uniform_spacing(u);
      for (std::size_t k = kHalf; k + kHalf < u.snapshots.size(); ++k)
        best = std::max(best, l2_norm(time_derivative(u, k, d)));
    } else {
      for (const auto& s : u.snapshots)
        best = std::max(best, norm == NetNorm::L2 ? l2_norm(s) : h2_surrogate(s));
    }
    rec.values.push_back(best);
  }
  return rec;
}

std::vector<double> residual_series(const Trajectory& u, const Generator& H,
                                    const RadialFunction& w) {
  const double d = uniform_spacing(u);
  std::vector<double> out;
  const cplx I(0.0, 1.0);
  for (std::size_t k = kHalf; k + kHalf < u.snapshots.size(); ++k) {
    const auto& s = u.snapshots[k];
    cvec M = I * time_derivative(u, k, d).chi - apply_generator(H, s).chi - hartree_term(s, w).chi;
    out.push_back(l2_norm({s.grid, M}));
  }
  return out;
}

NetRecord residual_net(const std::vector<double>& eps, const std::vector<Trajectory>& family,
                       const std::vector<Generator>& H, const RadialFunction& w) {
  check_family(eps, family.size());
  if (H.size() != family.size()) throw DataError("residual_net: one generator per trajectory");
  NetRecord rec{eps, {}};
  for (std::size_t k = 0; k < family.size(); ++k) {
    auto r = residual_series(family[k], H[k], w);
    rec.values.push_back(*std::max_element(r.begin(), r.end()));
  }
  return rec;
}

std::string verdict_name(Verdict v) {
  return v == Verdict::Compatible ? "COMPATIBLE" : "INCONCLUSIVE";
}

CompatibilityReport check_compatibility(const std::vector<double>& eps,
                                        const std::vector<Trajectory>& family,
                                        const Trajectory& u_cl, double fraction) {
  check_family(eps, family.size());
  if (eps.size() < 3) throw DataError("check_compatibility: ladder needs at least 3 rungs");
  CompatibilityReport rep;
  rep.epsilons = eps;
  for (const auto& u : family) rep.distances.push_back(sup_l2_distance(u, u_cl));
  const auto& d = rep.distances;
  bool ok = d.back() <= fraction * d.front();
  for (std::size_t k = 1; k < d.size(); ++k) ok = ok && (d[k] < d[k - 1] || d[k] == 0.0);
  rep.verdict = ok ? Verdict::Compatible : Verdict::Inconclusive;
  return rep;
}

ColombeauRun colombeau_pipeline(const ColombeauSetup& setup, const std::vector<double>& eps,
                                const RadialFunction& w, const ReducedWave& a,
                                const EvolutionConfig& cfg) {
  if (!setup.phi.positive)
    throw ConfigurationError("colombeau: the potential mollifier must be strictly positive");
  ColombeauRun run;
  run.classical = evolve_free(w, a, cfg);
  for (double e : eps) {
    RadialFunction V = mollify(setup.phi, e, a.grid);
    V.f *= setup.coefficient;
    run.generators.push_back(potential_generator(V));
    ReducedWave a_eps = setup.mollify_data ? embed(a, setup.rho, e) : a;
    run.family.push_back(evolve(run.generators.back(), w, a_eps, cfg));
  }
  run.report = check_compatibility(eps, run.family, run.classical, setup.fraction);
  return run;
}

}  // namespace deltalab
