#include "deltalab/evolution.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace deltalab {

double Interaction::operator()(double r) const {
  switch (kind) {
    case InteractionKind::Constant: return strength;
    case InteractionKind::Gaussian: return strength * std::exp(-r * r);
    case InteractionKind::Exponential: return strength * std::exp(-r);
  }
  return 0.0;
}

Interaction interaction_by_name(const std::string& name, double strength) {
  if (name == "constant") return {InteractionKind::Constant, strength};
  if (name == "gaussian") return {InteractionKind::Gaussian, strength};
  if (name == "exponential") return {InteractionKind::Exponential, strength};
  throw ConfigurationError("unknown interaction kernel '" + name + "'");
}

std::string interaction_name(InteractionKind k) {
  switch (k) {
    case InteractionKind::Constant: return "constant";
    case InteractionKind::Gaussian: return "gaussian";
    case InteractionKind::Exponential: return "exponential";
  }
  return "?";
}

RadialFunction sample_interaction(const Interaction& w, const RadialGrid& g) {
  return sample(g, [&](double r) { return w(r); });
}

void validate(const EvolutionConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw ConfigurationError("evolution: dt must be positive");
  if (!(cfg.T >= cfg.dt)) throw ConfigurationError("evolution: T must be at least dt");
  if (cfg.picard_iters < 1) throw ConfigurationError("evolution: picard_iters must be >= 1");
  if (cfg.snapshot_stride < 1) throw ConfigurationError("evolution: snapshot_stride must be >= 1");
  if (!(cfg.picard_tol > 0.0)) throw ConfigurationError("evolution: picard_tol must be positive");
  if (cfg.max_halvings < 0) throw ConfigurationError("evolution: max_halvings must be >= 0");
}

Generator free_generator() { return {}; }

Generator perturbed_generator(const ScaledPotential& P, double eps, const RadialGrid& g) {
  Generator H;
  H.V = sample_scaled(P, eps, g);
  H.kind = H.V.f.isZero(0.0) ? Generator::Kind::Free : Generator::Kind::Perturbed;
  return H;
}

Generator potential_generator(const RadialFunction& V) {
  if (!V.f.allFinite()) throw DomainError("potential_generator: non-finite samples");
  Generator H;
  H.V = V;
  H.kind = V.f.isZero(0.0) ? Generator::Kind::Free : Generator::Kind::Perturbed;
  return H;
}

ReducedWave apply_generator(const Generator& H, const ReducedWave& u) {
  switch (H.kind) {
    case Generator::Kind::Free:
      return minus_laplacian(u);
    case Generator::Kind::Perturbed: {
      require_same_grid(H.V.grid, u.grid);
      auto out = minus_laplacian(u, Dispersion::SecondDifference);
      out.chi.array() += H.V.f.array() * u.chi.array();
      return out;
    }
    case Generator::Kind::Point:
      break;
  }
  throw DomainError("apply_generator: the point-interaction generator has no grid matrix form");
}

Generator point_generator(const PointInteraction& pi) {
  Generator H;
  H.kind = pi.is_free() ? Generator::Kind::Free : Generator::Kind::Point;
  H.pi = pi;
  return H;
}

namespace {

// y = H x, H = -D2 + diag(V) with Dirichlet ends
void apply_H(const rvec& V, double ih2, const cvec& x, cvec& y) {
  const Eigen::Index n = x.size();
  y = (V.array() + 2.0 * ih2).cast<cplx>() * x.array();
  y.head(n - 1) -= ih2 * x.tail(n - 1);
  y.tail(n - 1) -= ih2 * x.head(n - 1);
}

// One Lanczos exponential, tau ||H|| kept moderate by the caller. The small problem is
// solved exactly; the Krylov space grows until the residual estimate
// tau beta_m |[exp(-i tau T_m) e_1]_m| drops below tol.
cvec lanczos_step(const rvec& V, double ih2, double tau, double bound, const cvec& u) {
  const double beta0 = u.norm();
  if (beta0 == 0.0) return u;
  const int mmax = 120;
  const double tol = 1e-13;
  std::vector<cvec> Q;
  std::vector<double> alpha, beta;
  Q.push_back(u / beta0);
  cvec w(u.size());
  Eigen::VectorXcd y;
  for (int j = 0; j < mmax; ++j) {
    apply_H(V, ih2, Q[std::size_t(j)], w);
    double a = Q[std::size_t(j)].dot(w).real();
    w -= a * Q[std::size_t(j)];
    if (j > 0) w -= beta[std::size_t(j - 1)] * Q[std::size_t(j - 1)];
    alpha.push_back(a);
    double b = w.norm();
    const int m = j + 1;
    // no convergence is possible before m ~ tau ||H||
    const int first = std::max(8, int(std::abs(tau) * bound));
    if (b >= 1e-300 && m < mmax && (m < first || (m - first) % 4 != 0)) {
      beta.push_back(b);
      Q.push_back(w / b);
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(Eigen::Map<rvec>(alpha.data(), m),
                              Eigen::Map<rvec>(beta.data(), m - 1), Eigen::ComputeEigenvectors);
    const auto& E = es.eigenvalues();
    const auto& Z = es.eigenvectors();
    Eigen::VectorXcd c(m);
    for (int k = 0; k < m; ++k) c[k] = std::polar(Z(0, k), -tau * E[k]);
    y = Z.cast<cplx>() * c;
    if (std::abs(tau) * b * std::abs(y[m - 1]) < tol || b < 1e-300) {
      break;
    }
    if (j + 1 == mmax) throw NumericalError("lanczos: Krylov space did not converge", b);
    beta.push_back(b);
    Q.push_back(w / b);
  }
  cvec out = cvec::Zero(u.size());
  for (Eigen::Index k = 0; k < y.size(); ++k) out += (beta0 * y[k]) * Q[std::size_t(k)];
  return out;
}

cvec lanczos_expm(const rvec& V, double h, double t, const cvec& u) {
  const double ih2 = 1.0 / (h * h);
  const double bound = 4.0 * ih2 + V.cwiseAbs().maxCoeff();
  const int sub = std::max(1, int(std::ceil(std::abs(t) * bound / 20.0)));
  cvec x = u;
  for (int s = 0; s < sub; ++s) x = lanczos_step(V, ih2, t / double(sub), bound, x);
  return x;
}

// Phi(0) of a smooth radial function from its first two nodes, even in r
double even_origin(const rvec& f) { return (4.0 * f[0] - f[1]) / 3.0; }

struct Flow {
  const Generator& H;
  const RadialFunction& w;
  bool point() const { return H.kind == Generator::Kind::Point; }

  double norm(const RobinState& s) const {
    return point() ? robin_norm(H.pi, s) : l2_norm(s.wave);
  }

  // s <- exp(-i tau (w * |u|^2)) s, exact flow of the nonlinear part
  void phase(RobinState& s, double tau) const {
    auto Phi = hartree_potential(s.wave, w);
    for (std::size_t i = 0; i < s.wave.grid.n; ++i)
      s.wave.chi[Eigen::Index(i)] *= std::polar(1.0, -tau * Phi.f[Eigen::Index(i)]);
    if (point()) s.origin *= std::polar(1.0, -tau * even_origin(Phi.f));
  }

  RobinState g(const RobinState& s) const {
    auto Phi = hartree_potential(s.wave, w);
    RobinState out = s;
    out.wave.chi = Phi.f.cast<cplx>().cwiseProduct(s.wave.chi);
    out.origin = point() ? even_origin(Phi.f) * s.origin : 0.0;
    return out;
  }
};

RobinState axpy(cplx a, const RobinState& x, const RobinState& y) {
  return {a * x.origin + y.origin, {y.wave.grid, a * x.wave.chi + y.wave.chi}};
}

double state_distance(const RobinState& a, const RobinState& b, bool point, const Generator& H) {
  if (!point) return l2_distance(a.wave, b.wave);
  return robin_norm(H.pi, axpy(-1.0, b, a));
}

Trajectory run(const Generator& H, const RadialFunction& w, const ReducedWave& a,
               const EvolutionConfig& cfg, double dt) {
  Flow F{H, w};
  const std::size_t steps = std::size_t(std::ceil(cfg.T / dt - 1e-9));
  dt = cfg.T / double(steps);
  RobinState s = F.point() ? robin_state(H.pi, a) : RobinState{0.0, a};
  Trajectory tr;
  tr.dt_used = dt;
  const double n0 = F.norm(s);
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.snapshots.push_back(s.wave);
    if (F.point()) tr.origins.push_back(s.origin);
    tr.l2_history.push_back(l2_norm(s.wave));
    double nc = F.norm(s);
    tr.conserved.push_back(nc);
    if (n0 > 0.0) tr.drift = std::max(tr.drift, std::abs(nc - n0) / n0);
  };
  record(0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    if (cfg.scheme == Scheme::Strang) {
      F.phase(s, 0.5 * dt);
      s = linear_propagate(H, dt, s);
      F.phase(s, 0.5 * dt);
    } else {
      // v(t+dt) = U(dt) v - i dt U(dt/2) g(v(t + dt/2)), midpoint from both ends
      const RobinState free_part = linear_propagate(H, dt, s);
      const RobinState half_fwd = linear_propagate(H, 0.5 * dt, s);
      RobinState next = free_part;
      double prev_change = INFINITY;
      int it = 0;
      for (;;) {
        ++it;
        RobinState mid = axpy(1.0, half_fwd, linear_propagate(H, -0.5 * dt, next));
        mid.wave.chi *= 0.5;
        mid.origin *= 0.5;
        RobinState cand =
            axpy(cplx(0.0, -dt), linear_propagate(H, 0.5 * dt, F.g(mid)), free_part);
        double change = state_distance(cand, next, F.point(), H);
        next = std::move(cand);
        double scale = std::max(F.norm(next), 1e-300);
        if (change <= cfg.picard_tol * scale) break;
        if (it > 1 && change > prev_change)
          throw StepSizeError("Picard iteration does not contract at dt=" + std::to_string(dt),
                              change);
        if (it >= cfg.picard_iters) break;
        prev_change = change;
      }
      tr.picard_max = std::max(tr.picard_max, it);
      s = std::move(next);
    }
    if (k % cfg.snapshot_stride == 0 || k == steps) record(double(k) * dt);
  }
  return tr;
}

}  // namespace

RobinState linear_propagate(const Generator& H, double t, const RobinState& s) {
  if (t == 0.0) return s;
  switch (H.kind) {
    case Generator::Kind::Free:
      return {0.0, free_propagator_apply(t, s.wave)};
    case Generator::Kind::Point:
      return pi_propagate(H.pi, t, s);
    case Generator::Kind::Perturbed:
      require_same_grid(H.V.grid, s.wave.grid);
      return {0.0, {s.wave.grid, lanczos_expm(H.V.f, s.wave.grid.h, t, s.wave.chi)}};
  }
  return s;
}

RadialFunction hartree_potential(const ReducedWave& u, const RadialFunction& w) {
  require_same_grid(u.grid, w.grid);
  return radial_convolve(w, abs2(u));
}

ReducedWave hartree_term(const ReducedWave& u, const RadialFunction& w) {
  auto Phi = hartree_potential(u, w);
  return {u.grid, Phi.f.cast<cplx>().cwiseProduct(u.chi)};
}

Trajectory evolve(const Generator& H, const RadialFunction& w, const ReducedWave& a,
                  const EvolutionConfig& cfg) {
  validate(cfg);
  require_same_grid(w.grid, a.grid);
  if (H.kind == Generator::Kind::Perturbed) require_same_grid(H.V.grid, a.grid);
  double dt = cfg.dt;
  for (int halving = 0;; ++halving) {
    Trajectory tr = run(H, w, a, cfg, dt);
    if (tr.drift <= cfg.drift_tol) return tr;
    if (halving >= cfg.max_halvings)
      throw StepSizeError("norm drift " + std::to_string(tr.drift) + " above tolerance after " +
                              std::to_string(halving) + " halvings",
                          tr.drift);
    dt *= 0.5;
  }
}

Trajectory evolve_perturbed(const ScaledPotential& P, double eps, const RadialFunction& w,
                            const ReducedWave& a, const EvolutionConfig& cfg) {
  return evolve(perturbed_generator(P, eps, a.grid), w, a, cfg);
}

Trajectory evolve_free(const RadialFunction& w, const ReducedWave& a, const EvolutionConfig& cfg) {
  return evolve(free_generator(), w, a, cfg);
}

Trajectory evolve_pi(const PointInteraction& pi, const RadialFunction& w, const ReducedWave& a,
                     const EvolutionConfig& cfg) {
  return evolve(point_generator(pi), w, a, cfg);
}

double sup_l2_distance(const Trajectory& a, const Trajectory& b) {
  if (a.times.size() != b.times.size() || a.times.empty())
    throw DataError("sup_l2_distance: trajectories have different snapshot counts");
  double out = 0.0;
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    if (std::abs(a.times[k] - b.times[k]) > 1e-9 * std::max(1.0, std::abs(a.times[k])))
      throw DataError("sup_l2_distance: snapshot times differ");
    if (!(a.snapshots[k].grid == b.snapshots[k].grid))
      throw DataError("sup_l2_distance: snapshot grids differ");
    out = std::max(out, l2_distance(a.snapshots[k], b.snapshots[k]));
  }
  return out;
}

PQRReport pqr_diagnostic(const Trajectory& u_eps, const Trajectory& u_ref, const Generator& H_eps,
                         const Generator& H_ref, const RadialFunction& w, double w_sup) {
  const std::size_t K = u_ref.times.size();
  if (u_eps.times.size() != K || K == 0)
    throw DataError("pqr_diagnostic: trajectories have different snapshot counts");
  const bool ref_point = H_ref.kind == Generator::Kind::Point;
  if (ref_point && u_ref.origins.size() != K)
    throw DataError("pqr_diagnostic: point-interaction reference without origin values");
  Flow Fe{H_eps, w}, Fr{H_ref, w};
  auto ref_state = [&](std::size_t k) {
    return RobinState{ref_point ? u_ref.origins[k] : 0.0, u_ref.snapshots[k]};
  };
  const ReducedWave& a = u_ref.snapshots[0];
  RobinState pe{0.0, a}, pr = ref_state(0);
  RobinState De{0.0, zero_wave(a.grid)}, Dr = De;
  RobinState ge = Fe.g(ref_state(0)), gr = Fr.g(ref_state(0));

  PQRReport rep;
  rep.g_bound = w_sup * std::pow(l2_norm(a), 3);
  for (std::size_t k = 0; k < K; ++k) {
    if (k > 0) {
      const double d = u_ref.times[k] - u_ref.times[k - 1];
      pe = linear_propagate(H_eps, d, pe);
      pr = linear_propagate(H_ref, d, pr);
      RobinState ge1 = Fe.g(ref_state(k)), gr1 = Fr.g(ref_state(k));
      // trapezoid in s of U(t_k - s) g(s) over the last interval
      RobinState te = axpy(1.0, linear_propagate(H_eps, d, ge), ge1);
      RobinState tq = axpy(1.0, linear_propagate(H_ref, d, gr), gr1);
      De = axpy(cplx(0.0, -0.5 * d), te, linear_propagate(H_eps, d, De));
      Dr = axpy(cplx(0.0, -0.5 * d), tq, linear_propagate(H_ref, d, Dr));
      ge = std::move(ge1);
      gr = std::move(gr1);
    }
    ReducedWave total = u_eps.snapshots[k] - u_ref.snapshots[k];
    ReducedWave P = pe.wave - pr.wave;
    ReducedWave R = De.wave - Dr.wave;
    ReducedWave Q = total - P - R;
    rep.times.push_back(u_ref.times[k]);
    rep.total.push_back(l2_norm(total));
    rep.P.push_back(l2_norm(P));
    rep.R.push_back(l2_norm(R));
    rep.Q.push_back(l2_norm(Q));
    double gn = l2_norm(hartree_term(u_ref.snapshots[k], w));
    rep.g_norm.push_back(gn);
    if (gn > rep.g_bound * (1.0 + 1e-3)) rep.bound_ok = false;
  }
  auto mx = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
  rep.P_sup = mx(rep.P);
  rep.Q_sup = mx(rep.Q);
  rep.R_sup = mx(rep.R);
  rep.total_sup = mx(rep.total);
  return rep;
}

PQRReport pqr_diagnostic(const Trajectory& u_eps, const Trajectory& u_ref, const ScaledPotential& P,
                         double eps, const Interaction& w) {
  const RadialGrid& g = u_ref.snapshots.at(0).grid;
  return pqr_diagnostic(u_eps, u_ref, perturbed_generator(P, eps, g), free_generator(),
                        sample_interaction(w, g), w.sup());
}

}  // namespace deltalab
