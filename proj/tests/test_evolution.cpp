#include <gtest/gtest.h>

#include <cmath>

#include "deltalab/evolution.hpp"
#include "deltalab/oracles.hpp"
#include "deltalab/spectral.hpp"

using namespace deltalab;

namespace {

ReducedWave gaussian(const RadialGrid& g) {
  return reduce(g, [](double r) { return cplx(std::exp(-r * r / 2.0)); });
}

// e^{it Delta} e^{-r^2/2} in closed form
ReducedWave free_gaussian(const RadialGrid& g, double t) {
  cplx z(1.0, 2.0 * t);
  return reduce(g, [&](double r) { return std::pow(z, -1.5) * std::exp(-r * r / (2.0 * z)); });
}

EvolutionConfig config(double T, double dt, std::size_t stride = 10) {
  EvolutionConfig c;
  c.T = T;
  c.dt = dt;
  c.snapshot_stride = stride;
  return c;
}

RadialFunction zero_w(const RadialGrid& g) { return {g, rvec::Zero(g.n)}; }

ReducedWave conj(const ReducedWave& u) { return {u.grid, u.chi.conjugate()}; }

}  // namespace

TEST(Hartree, ZeroWave) {
  auto g = make_grid(20.0, 255);
  auto w = sample_interaction({InteractionKind::Gaussian, 1.0}, g);
  EXPECT_EQ(l2_norm(hartree_term(zero_wave(g), w)), 0.0);
}

TEST(Hartree, ConstantKernelGivesNormSquared) {
  auto g = make_grid(40.0, 2047);
  auto u = gaussian(g);
  auto w = sample_interaction({InteractionKind::Constant, 0.7}, g);
  auto out = hartree_term(u, w);
  double n2 = std::pow(l2_norm(u), 2);
  // exact wherever |x - y| < r_max for all y in the support of u
  for (std::size_t i = 0; i < g.n && g.r(i) < 10.0; ++i)
    EXPECT_NEAR(std::abs(out.chi[i] - 0.7 * n2 * u.chi[i]), 0.0, 1e-6 * std::abs(u.chi[0]) + 1e-12);
}

TEST(Hartree, GaussianPotentialMatchesOracle) {
  auto g = make_grid(20.0, 2047);
  auto u = gaussian(g);  // |u|^2 = e^{-r^2}
  auto w = sample_interaction({InteractionKind::Gaussian, 1.0}, g);
  auto Phi = hartree_potential(u, w);
  for (double r : {0.0, 0.5, 1.0, 2.5}) {
    std::size_t i = r == 0.0 ? 0 : std::size_t(std::lround(r / g.h)) - 1;
    double ri = g.r(i);
    double closed = oracle::gaussian_convolution(1.0, 1.0, ri);
    double quad = oracle::convolution_3d([](double s) { return std::exp(-s * s); },
                                         [](double s) { return std::exp(-s * s); }, ri, 8.0);
    EXPECT_NEAR(quad, closed, 1e-8);
    EXPECT_NEAR(Phi.f[i], quad, 1e-3) << ri;
  }
}

TEST(Evolution, ConfigValidation) {
  EXPECT_THROW(validate(config(1.0, 0.0)), ConfigurationError);
  EXPECT_THROW(validate(config(1e-4, 1e-3)), ConfigurationError);
  auto c = config(1.0, 1e-2);
  c.picard_iters = 0;
  EXPECT_THROW(validate(c), ConfigurationError);
  EXPECT_NO_THROW(validate(config(1.0, 1e-2)));
  EXPECT_THROW(interaction_by_name("yukawa", 1.0), ConfigurationError);
}

TEST(Evolution, LinearFreeMatchesClosedForm) {
  auto g = make_grid(40.0, 4096);
  auto a = gaussian(g);
  auto tr = evolve_free(zero_w(g), a, config(1.0, 0.05, 4));
  EXPECT_EQ(tr.times.size(), 6u);
  EXPECT_LT(l2_distance(tr.snapshots.back(), free_gaussian(g, 1.0)), 1e-4);
  EXPECT_LT(tr.drift, 1e-8);
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    EXPECT_DOUBLE_EQ(tr.l2_history[k], l2_norm(tr.snapshots[k]));
}

TEST(Evolution, ConstantKernelIsGlobalPhase) {
  auto g = make_grid(40.0, 2047);
  auto a = gaussian(g);
  const double c = 0.3, n2 = std::pow(l2_norm(a), 2);
  auto w = sample_interaction({InteractionKind::Constant, c}, g);
  auto tr = evolve_free(w, a, config(1.0, 0.01));
  auto lin = evolve_free(zero_w(g), a, config(1.0, 0.01));
  cplx z = inner(lin.snapshots.back(), tr.snapshots.back()) / n2;
  EXPECT_LT(std::abs(z - std::polar(1.0, -c * n2 * 1.0)), 1e-3);
}

TEST(Evolution, PerturbedWithZeroPotentialIsFree) {
  auto g = make_grid(20.0, 511);
  auto a = gaussian(g);
  auto w = sample_interaction({InteractionKind::Gaussian, 1.0}, g);
  auto P = make_scaled_potential(square_well(0.0), 1.0);
  auto tp = evolve_perturbed(P, 0.5, w, a, config(0.5, 0.01));
  auto tf = evolve_free(w, a, config(0.5, 0.01));
  EXPECT_LT(sup_l2_distance(tp, tf), 1e-10);
}

TEST(Evolution, NormConservationSquareWell) {
  auto g = make_grid(40.0, 2047);
  auto a = gaussian(g);
  auto w = sample_interaction({InteractionKind::Gaussian, 1.0}, g);
  auto P = make_scaled_potential(square_well(1.0), 2.0);
  auto lin = evolve_perturbed(P, 0.1, zero_w(g), a, config(1.0, 1e-3, 100));
  EXPECT_LT(lin.drift, 1e-8);
  auto tr = evolve_perturbed(P, 0.1, w, a, config(1.0, 1e-3, 100));
  EXPECT_LT(tr.drift, 1e-8);
  EXPECT_THROW(evolve_perturbed(P, 0.005, w, a, config(1.0, 1e-3)), UnderResolvedError);
}

TEST(Evolution, TimeReversal) {
  auto g = make_grid(30.0, 1023);
  auto a = gaussian(g);
  auto w = sample_interaction({InteractionKind::Gaussian, 2.0}, g);
  auto fwd = evolve_free(w, a, config(0.5, 0.01));
  auto back = evolve_free(w, conj(fwd.snapshots.back()), config(0.5, 0.01));
  EXPECT_LT(l2_distance(back.snapshots.back(), conj(a)), 1e-6);
}

TEST(Evolution, PointInteractionBoundStatePhase) {
  auto g = make_grid(40.0, 4096);
  for (double alpha : {-1.0 / (4.0 * kPi), -0.2}) {
    auto pi = make_point_interaction(alpha);
    auto bs = bound_state(pi, g);
    auto tr = evolve_pi(pi, zero_w(g), bs->psi, config(1.0, 0.05));
    auto expect = std::polar(1.0, -bs->energy) * bs->psi;
    EXPECT_LT(l2_distance(tr.snapshots.back(), expect), 1e-3) << alpha;
    EXPECT_LT(tr.drift, 1e-8);
  }
}

TEST(Evolution, PointInteractionFreeBranchAndDrift) {
  auto g = make_grid(40.0, 2047);
  auto a = gaussian(g);
  auto w = sample_interaction({InteractionKind::Gaussian, 1.0}, g);
  auto tf = evolve_free(w, a, config(1.0, 0.01));
  auto ti = evolve_pi(make_point_interaction(INFINITY), w, a, config(1.0, 0.01));
  EXPECT_LT(sup_l2_distance(tf, ti), 1e-10);
  for (double alpha : {-1.0 / (4.0 * kPi), 0.0, 1.0}) {
    auto tr = evolve_pi(make_point_interaction(alpha), w, a, config(1.0, 0.01));
    EXPECT_LT(tr.drift, 1e-6) << alpha;
    EXPECT_EQ(tr.origins.size(), tr.times.size());
  }
}

TEST(Evolution, SupDistance) {
  auto g = make_grid(20.0, 255);
  auto a = gaussian(g);
  auto tr = evolve_free(zero_w(g), a, config(0.2, 0.02));
  EXPECT_EQ(sup_l2_distance(tr, tr), 0.0);
  const double theta = 0.4;
  Trajectory rot = tr;
  for (auto& s : rot.snapshots) s = std::polar(1.0, theta) * s;
  EXPECT_NEAR(sup_l2_distance(tr, rot), 2.0 * std::sin(theta / 2.0) * l2_norm(a), 1e-10);
  auto shorter = evolve_free(zero_w(g), a, config(0.1, 0.02));
  EXPECT_THROW(sup_l2_distance(tr, shorter), DataError);
  auto shifted = evolve_free(zero_w(g), a, config(0.2, 0.02, 5));
  EXPECT_THROW(sup_l2_distance(tr, shifted), DataError);
}

TEST(Evolution, StrangSecondOrder) {
  auto g = make_grid(20.0, 511);
  auto a = gaussian(g);
  auto w = sample_interaction({InteractionKind::Gaussian, 4.0}, g);
  auto P = make_scaled_potential(square_well(1.0), 1.0);
  std::vector<Generator> gens{free_generator(), perturbed_generator(P, 0.5, g),
                              point_generator(make_point_interaction(0.0))};
  for (const auto& H : gens) {
    auto ref = evolve(H, w, a, config(0.5, 0.5 / 64.0, 64));
    auto c1 = evolve(H, w, a, config(0.5, 0.5 / 8.0, 8));
    auto c2 = evolve(H, w, a, config(0.5, 0.5 / 16.0, 16));
    double e1 = l2_distance(c1.snapshots.back(), ref.snapshots.back());
    double e2 = l2_distance(c2.snapshots.back(), ref.snapshots.back());
    // Richardson: with a dt/8 reference e1/e2 = (1 - 1/64)/(1/4 - 1/64) ~ 4.2 for order 2
    EXPECT_GT(e1 / e2, 3.5) << int(H.kind);
    EXPECT_LT(e1 / e2, 4.5) << int(H.kind);
  }
}

TEST(Evolution, PicardContractsBelowThreshold) {
  auto g = make_grid(20.0, 511);
  auto a = gaussian(g);
  Interaction wk{InteractionKind::Gaussian, 1.0};
  auto w = sample_interaction(wk, g);
  const double dt = 0.5 / (3.0 * wk.sup() * std::pow(l2_norm(a), 2));
  for (const auto& H : {free_generator(), point_generator(make_point_interaction(0.0))}) {
    auto c = config(20.0 * dt, dt, 5);
    c.scheme = Scheme::DuhamelPicard;
    c.picard_iters = 50;
    auto pic = evolve(H, w, a, c);
    EXPECT_LE(pic.picard_max, 8);
    c.scheme = Scheme::Strang;
    auto str = evolve(H, w, a, c);
    EXPECT_LT(sup_l2_distance(pic, str), 1e-3);
  }
}

TEST(Evolution, PicardRejectsLargeSteps) {
  auto g = make_grid(20.0, 255);
  auto a = gaussian(g);
  auto w = sample_interaction({InteractionKind::Gaussian, 200.0}, g);
  auto c = config(0.5, 0.25);
  c.scheme = Scheme::DuhamelPicard;
  c.picard_iters = 50;
  EXPECT_THROW(evolve_free(w, a, c), StepSizeError);
}

TEST(Evolution, DriftToleranceExhausted) {
  auto g = make_grid(20.0, 127);
  auto a = gaussian(g);
  auto w = sample_interaction({InteractionKind::Gaussian, 1.0}, g);
  auto c = config(0.1, 0.05);
  c.drift_tol = -1.0;
  EXPECT_THROW(evolve_free(w, a, c), StepSizeError);
}

TEST(Evolution, NonResonantTrendToFree) {
  auto g = make_grid(40.0, 2047);
  auto a = gaussian(g);
  auto w = sample_interaction({InteractionKind::Gaussian, 1.0}, g);
  auto cfg = config(1.0, 1e-2);
  auto uf = evolve_free(w, a, cfg);
  auto P = make_scaled_potential(square_well(-1.0), 3.0);  // V > 0
  double prev = INFINITY;
  for (double eps : {0.4, 0.2, 0.1}) {
    double d = sup_l2_distance(evolve_perturbed(P, eps, w, a, cfg), uf);
    EXPECT_LT(d, prev) << eps;
    prev = d;
  }
}

TEST(PQR, Degenerate) {
  auto g = make_grid(20.0, 511);
  auto a = gaussian(g);
  Interaction wk{InteractionKind::Gaussian, 1.0};
  auto w = sample_interaction(wk, g);
  auto cfg = config(0.5, 0.01);
  auto P = make_scaled_potential(square_well(1.0), 1.0);

  auto lin_e = evolve_perturbed(P, 0.5, zero_w(g), a, cfg);
  auto lin_f = evolve_free(zero_w(g), a, cfg);
  auto r0 = pqr_diagnostic(lin_e, lin_f, P, 0.5, Interaction{InteractionKind::Constant, 0.0});
  EXPECT_LT(r0.Q_sup, 1e-10);
  EXPECT_LT(r0.R_sup, 1e-12);
  EXPECT_NEAR(r0.P_sup, r0.total_sup, 1e-10);

  auto P0 = make_scaled_potential(square_well(0.0), 1.0);
  auto ue = evolve_perturbed(P0, 0.5, w, a, cfg);
  auto uf = evolve_free(w, a, cfg);
  auto r1 = pqr_diagnostic(ue, uf, P0, 0.5, wk);
  EXPECT_LT(r1.P_sup, 1e-12);
  EXPECT_LT(r1.R_sup, 1e-12);

  auto un = evolve_perturbed(P, 0.5, w, a, cfg);
  auto r2 = pqr_diagnostic(un, uf, P, 0.5, wk);
  EXPECT_TRUE(r2.bound_ok);
  for (double gn : r2.g_norm) EXPECT_LE(gn, r2.g_bound * (1.0 + 1e-3));
  // P + Q + R reproduces the total difference; Q is second order in the perturbation here
  EXPECT_GT(r2.P_sup, 0.0);
  EXPECT_LE(r2.total_sup, r2.P_sup + r2.Q_sup + r2.R_sup + 1e-12);
}
