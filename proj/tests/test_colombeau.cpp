#include <gtest/gtest.h>

#include <cmath>

#include "deltalab/colombeau.hpp"
#include "deltalab/spectral.hpp"

using namespace deltalab;

namespace {

const std::vector<double> kLadder{0.4, 0.2, 0.1, 0.05};

NetRecord power_net(double p, double c = 1.0) {
  NetRecord r{kLadder, {}};
  for (double e : kLadder) r.values.push_back(c * std::pow(e, p));
  return r;
}

ReducedWave gaussian(const RadialGrid& g) {
  return reduce(g, [](double r) { return cplx(std::exp(-r * r / 2.0)); });
}

ReducedWave free_gaussian(const RadialGrid& g, double t) {
  cplx z(1.0, 2.0 * t);
  return reduce(g, [&](double r) { return std::pow(z, -1.5) * std::exp(-r * r / (2.0 * z)); });
}

Trajectory exact_free(const RadialGrid& g, double T, double d) {
  Trajectory tr;
  const int steps = int(std::lround(T / d));
  for (int k = 0; k <= steps; ++k) {
    tr.times.push_back(k * d);
    tr.snapshots.push_back(free_gaussian(g, k * d));
  }
  return tr;
}

EvolutionConfig config(double T, double dt, std::size_t stride) {
  EvolutionConfig c;
  c.T = T;
  c.dt = dt;
  c.snapshot_stride = stride;
  return c;
}

}  // namespace

TEST(Classify, ExactPowers) {
  auto m = classify_net(power_net(-2.0));
  EXPECT_EQ(m.tag, NetTag::Moderate);
  EXPECT_EQ(m.order, 2);
  EXPECT_NEAR(m.fit.slope, -2.0, 1e-12);
  EXPECT_NEAR(m.fit.half_width, 0.0, 1e-10);

  auto n = classify_net(power_net(3.0));
  EXPECT_EQ(n.tag, NetTag::NegligibleUpTo);
  EXPECT_EQ(n.order, 3);
  EXPECT_NEAR(n.fit.slope, 3.0, 1e-12);

  auto b = classify_net(power_net(0.0, 5.0));
  EXPECT_EQ(b.tag, NetTag::Moderate);
  EXPECT_EQ(b.order, 0);
}

TEST(Classify, ScaleEquivariant) {
  for (double p : {-2.5, -1.0, 2.0}) {
    auto a = classify_net(power_net(p));
    auto b = classify_net(power_net(p, 37.0));
    EXPECT_EQ(a.tag, b.tag);
    EXPECT_EQ(a.order, b.order);
    EXPECT_NEAR(a.fit.slope, b.fit.slope, 1e-12);
  }
}

TEST(Classify, InvariantsOnOrder) {
  for (double p : {-3.05, -2.95, -1.5, -0.2, 0.7, 1.95, 2.3}) {
    auto c = classify_net(power_net(p));
    if (c.tag == NetTag::Moderate) EXPECT_GE(c.fit.slope, -c.order - 0.1) << p;
    if (c.tag == NetTag::NegligibleUpTo) EXPECT_GE(c.fit.slope, c.order - 0.1) << p;
  }
}

TEST(Classify, Errors) {
  NetRecord three{{0.4, 0.2, 0.1}, {1, 2, 3}};
  EXPECT_THROW(classify_net(three), DataError);
  NetRecord unordered{{0.4, 0.1, 0.2, 0.05}, {1, 2, 3, 4}};
  EXPECT_THROW(classify_net(unordered), DataError);
  NetRecord negative{kLadder, {1, -2, 3, 4}};
  EXPECT_THROW(classify_net(negative), DataError);
  NetRecord nan{kLadder, {1, NAN, 3, 4}};
  EXPECT_THROW(classify_net(nan), DataError);
  EXPECT_THROW(fit_loglog({0.1, 0.2}, {1.0, 0.0}), DataError);
}

TEST(Classify, NonPowerAndZero) {
  NetRecord r{kLadder, {}};
  for (double e : kLadder) r.values.push_back(std::exp(1.0 / e));
  EXPECT_EQ(classify_net(r).tag, NetTag::Unclassified);
  NetRecord z{kLadder, {0, 0, 0, 0}};
  EXPECT_EQ(classify_net(z).tag, NetTag::Unclassified);
}

TEST(Embedding, DeltaNetSlopes) {
  auto g = make_grid(40.0, 4096);
  NetRecord l2{kLadder, {}}, h1{kLadder, {}};
  for (double e : kLadder) {
    auto d = embed_delta(gaussian_mollifier(), e, g);
    l2.values.push_back(l2_norm(d));
    h1.values.push_back(h1_surrogate(d));
  }
  auto c = classify_net(l2);
  EXPECT_EQ(c.tag, NetTag::Moderate);
  EXPECT_EQ(c.order, 2);
  EXPECT_NEAR(c.fit.slope, -1.5, 0.05);
  EXPECT_NEAR(classify_net(h1).fit.slope, -2.5, 0.1);
}

TEST(Surrogates, GaussianGradient) {
  auto g = make_grid(40.0, 4096);
  auto u = gaussian(g);
  // ||grad e^{-r^2/2}||^2 = (3/2) ||e^{-r^2/2}||^2
  EXPECT_NEAR(gradient_norm(u), std::sqrt(1.5) * l2_norm(u), 1e-4);
  // ||Delta e^{-r^2/2}||^2 = (15/4) ||e^{-r^2/2}||^2
  EXPECT_NEAR(h2_surrogate(u), (1.0 + std::sqrt(15.0 / 4.0)) * l2_norm(u), 1e-3);
}

TEST(Residual, ExactSolutionIsDiscretisationError) {
  std::vector<double> res;
  for (std::size_t n : {1023u, 2047u}) {
    auto g = make_grid(40.0, n);
    double d = n == 1023u ? 0.08 : 0.04;
    auto tr = exact_free(g, 1.0, d);
    RadialFunction w0{g, rvec::Zero(g.n)};
    auto s = residual_series(tr, free_generator(), w0);
    res.push_back(*std::max_element(s.begin(), s.end()));
  }
  EXPECT_GT(res[0] / res[1], 4.0);
}

TEST(Residual, SolverOutputAndFaultInjection) {
  auto g = make_grid(40.0, 4096);
  auto a = gaussian(g);
  RadialFunction w0{g, rvec::Zero(g.n)};
  auto tr = evolve_free(w0, a, config(1.0, 1e-3, 10));
  auto rec = residual_net({1.0}, {tr}, {free_generator()}, w0);
  EXPECT_LT(rec.values[0], 1e-6);

  auto bad = tr;
  bad.snapshots[50] = 1.1 * bad.snapshots[50];
  auto rb = residual_net({1.0}, {bad}, {free_generator()}, w0);
  EXPECT_GT(rb.values[0], 10.0 * rec.values[0]);

  auto sparse = evolve_free(w0, a, config(0.05, 1e-2, 1));
  EXPECT_THROW(residual_series(sparse, free_generator(), w0), DataError);
}

TEST(Residual, PerturbedHartreeOutput) {
  auto g = make_grid(20.0, 1023);
  auto a = gaussian(g);
  auto w = sample_interaction({InteractionKind::Gaussian, 1.0}, g);
  auto H = perturbed_generator(make_scaled_potential(gaussian_profile(-1.0), 1.0), 0.5, g);
  // same snapshot spacing for both, fine enough that time differencing of the E ~ 100 modes
  // V excites stays below the splitting defect
  auto fine = evolve(H, w, a, config(0.2, 1e-3, 2));
  auto coarse = evolve(H, w, a, config(0.2, 2e-3, 1));
  double rf = residual_net({1.0}, {fine}, {H}, w).values[0];
  double rc = residual_net({1.0}, {coarse}, {H}, w).values[0];
  // the Strang defect is second order in dt
  EXPECT_GT(rc / rf, 3.5);
  EXPECT_LT(rc / rf, 4.5);
  EXPECT_THROW(apply_generator(point_generator(make_point_interaction(0.0)), a), DomainError);
}

TEST(Compatibility, TrivialAndErrors) {
  auto g = make_grid(20.0, 511);
  auto a = gaussian(g);
  auto w = sample_interaction({InteractionKind::Gaussian, 1.0}, g);
  ColombeauSetup s;
  s.coefficient = 0.0;
  s.mollify_data = false;
  auto run = colombeau_pipeline(s, {0.8, 0.6, 0.4}, w, a, config(0.2, 1e-2, 5));
  EXPECT_EQ(run.report.verdict, Verdict::Compatible);
  for (double d : run.report.distances) EXPECT_EQ(d, 0.0);

  EXPECT_THROW(check_compatibility({0.4, 0.2}, {run.family[0], run.family[1]}, run.classical),
               DataError);
  s.phi = bump_mollifier();
  EXPECT_THROW(colombeau_pipeline(s, {0.8, 0.6, 0.4}, w, a, config(0.2, 1e-2, 5)),
               ConfigurationError);
}

TEST(Compatibility, MollifiedDataOnly) {
  auto g = make_grid(40.0, 1023);
  auto a = gaussian(g);
  auto w = sample_interaction({InteractionKind::Gaussian, 1.0}, g);
  ColombeauSetup s;
  s.coefficient = 0.0;
  const std::vector<double> eps{0.8, 0.4, 0.2};
  auto run = colombeau_pipeline(s, eps, w, a, config(0.5, 1e-2, 10));
  EXPECT_EQ(run.report.verdict, Verdict::Compatible);

  auto rot = run.family;
  auto cl = run.classical;
  const cplx ph = std::polar(1.0, 0.9);
  for (auto& t : rot)
    for (auto& s : t.snapshots) s = ph * s;
  for (auto& s : cl.snapshots) s = ph * s;
  auto again = check_compatibility(eps, rot, cl);
  EXPECT_EQ(again.verdict, run.report.verdict);
  for (std::size_t k = 0; k < eps.size(); ++k)
    EXPECT_NEAR(again.distances[k], run.report.distances[k], 1e-12);
}

TEST(Compatibility, DeltaCoefficientTrend) {
  auto g = make_grid(40.0, 2047);
  auto a = gaussian(g);
  auto w = sample_interaction({InteractionKind::Gaussian, 1.0}, g);
  const std::vector<double> eps{0.4, 0.2, 0.1};
  auto run = colombeau_pipeline({}, eps, w, a, config(1.0, 1e-2, 10));
  const auto& d = run.report.distances;
  EXPECT_LT(d[1], d[0]);
  EXPECT_LT(d[2], d[1]);
}

TEST(Compatibility, ResonantFamilyAgainstFreeIsInconclusive) {
  auto g = make_grid(40.0, 2047);
  auto a = gaussian(g);
  auto w = sample_interaction({InteractionKind::Gaussian, 1.0}, g);
  auto cfg = config(1.0, 1e-2, 10);
  const std::vector<double> eps{0.4, 0.2, 0.1};
  std::vector<Trajectory> fam;
  for (double e : eps) {
    double d = stencil_resonant_depth(ProfileKind::SquareWell, g.h / e);
    fam.push_back(evolve_perturbed(make_scaled_potential(square_well(d), 2.0), e, w, a, cfg));
  }
  auto rep = check_compatibility(eps, fam, evolve_free(w, a, cfg));
  EXPECT_EQ(rep.verdict, Verdict::Inconclusive);
}
