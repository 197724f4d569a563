#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "deltalab/harness.hpp"
#include "json.hpp"

using namespace deltalab;

namespace {

// small linear evolution sweep, a few seconds
SweepConfig small_sweep() {
  SweepConfig c;
  c.potential.sigmas = {3.0};
  c.potential.amplitude = 1.0;
  c.interaction = {InteractionKind::Constant, 0.0};
  c.r_max = 20.0;
  c.n = 1023;
  c.evolution.T = 0.2;
  c.evolution.dt = 1e-2;
  c.epsilons = {0.4, 0.2, 0.1};
  return c;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

TEST(Config, EmptyLadderIsValidationError) {
  SweepConfig c;
  c.epsilons.clear();
  EXPECT_THROW(validate(c), ValidationError);
  EXPECT_THROW(run_sweep(c), ValidationError);
  EXPECT_THROW(parse_config("epsilons: []\n"), ValidationError);
}

TEST(Config, AllViolationsListed) {
  const char* yaml =
      "epsilons: [0.1, 0.2]\n"
      "potential: {profile: nonsense, sigmas: [4]}\n"
      "grid: {n: 4}\n";
  try {
    parse_config(yaml);
    FAIL();
  } catch (const ValidationError& e) {
    std::string m = e.what();
    EXPECT_NE(m.find("strictly decreasing"), std::string::npos) << m;
    EXPECT_NE(m.find("potential.profile"), std::string::npos) << m;
    EXPECT_NE(m.find("outside [0, 3]"), std::string::npos) << m;
    EXPECT_NE(m.find("grid.n"), std::string::npos) << m;
  }
}

TEST(Config, UnknownKeysAndTypes) {
  try {
    parse_config("colour: red\npotential: {sigmas: [1], shape: x}\ngrid: {n: many}\n");
    FAIL();
  } catch (const ValidationError& e) {
    std::string m = e.what();
    EXPECT_NE(m.find("config.colour: unknown key"), std::string::npos) << m;
    EXPECT_NE(m.find("potential.shape: unknown key"), std::string::npos) << m;
    EXPECT_NE(m.find("grid.n: wrong type"), std::string::npos) << m;
  }
  EXPECT_THROW(parse_config("mode: sideways\n"), ValidationError);
  EXPECT_THROW(parse_config("[1, 2"), ValidationError);
  EXPECT_THROW(load_config("/nonexistent/cfg.yaml"), IoError);
}

TEST(Config, RoundTripAndHash) {
  SweepConfig c;
  c.mode = SweepMode::Resolvent;
  c.potential = {"gaussian", 0.3, {0.0, 2.5}, {1.0, -0.25}, true};
  c.interaction = {InteractionKind::Exponential, 0.7};
  c.initial = {"shell", 0.9, 3.0};
  c.evolution.scheme = Scheme::DuhamelPicard;
  c.evolution.dt = 1.0 / 3.0;
  c.lambdas = {0.5, 2.0};
  c.reference = Reference::Point;
  c.alpha = -1.0 / (4.0 * kPi);
  c.format = ReportFormat::Csv;
  c.seed = 12345678901ULL;
  auto d = parse_config(dump_config(c));
  EXPECT_EQ(dump_config(d), dump_config(c));
  EXPECT_EQ(d.alpha, c.alpha);
  EXPECT_EQ(d.evolution.dt, c.evolution.dt);
  EXPECT_EQ(config_hash(d), config_hash(c));

  auto w = c;
  w.workers = 4;
  w.out_dir = "elsewhere";
  EXPECT_EQ(config_hash(w), config_hash(c));
  w.seed = 2;
  EXPECT_NE(config_hash(w), config_hash(c));
  EXPECT_EQ(config_hash(c).size(), 16u);

  c.alpha = INFINITY;
  EXPECT_TRUE(std::isinf(parse_config(dump_config(c)).alpha));
}

TEST(Sweep, SinglePointSmoke) {
  auto c = small_sweep();
  c.epsilons = {0.2};
  auto rep = run_sweep(c);
  ASSERT_EQ(rep.rows.size(), 1u);
  const auto& r = rep.rows[0];
  EXPECT_TRUE(r.error.empty()) << r.error;
  EXPECT_EQ(r.sigma, 3.0);
  EXPECT_EQ(r.epsilon, 0.2);
  EXPECT_GT(r.distance_l2, 0.0);
  EXPECT_LT(r.drift, 1e-8);
  EXPECT_TRUE(std::isnan(r.slope));  // one row carries no rate
  EXPECT_EQ(rep.config_hash, config_hash(c));
}

TEST(Sweep, RowsAreTraceable) {
  auto c = small_sweep();
  auto rep = run_sweep(c);
  ASSERT_EQ(rep.rows.size(), 3u);
  const auto& r = rep.rows[1];
  auto g = make_grid(c.r_max, c.n);
  auto a = initial_datum(c.initial, g);
  auto w = sample_interaction(c.interaction, g);
  auto u = evolve_perturbed(row_potential(c.potential, r.sigma, r.epsilon, g), r.epsilon, w, a,
                            c.evolution);
  EXPECT_EQ(r.distance_l2, sup_l2_distance(u, evolve_free(w, a, c.evolution)));
  EXPECT_EQ(r.verdict, "decreasing");
  EXPECT_FALSE(std::isnan(r.slope));
}

TEST(Sweep, WorkersDoNotChangeResults) {
  auto c = small_sweep();
  c.potential.sigmas = {1.0, 3.0};
  auto one = run_sweep(c);
  c.workers = 3;
  auto three = run_sweep(c);
  EXPECT_EQ(report_json(one), report_json(three));
  for (std::size_t k = 0; k < three.rows.size(); ++k) EXPECT_EQ(three.rows[k].index, k);
}

TEST(Sweep, FailingRowIsRecorded) {
  auto c = small_sweep();
  c.potential.sigmas = {1.0, 3.0};
  c.epsilons = {0.4, 0.2, 0.05};  // under 4 cells at eps=0.05 on this grid
  auto rep = run_sweep(c);
  ASSERT_EQ(rep.rows.size(), 6u);
  EXPECT_TRUE(rep.any_failed());
  EXPECT_TRUE(rep.rows[1].error.empty());
  EXPECT_NE(rep.rows[2].error.find("fewer than 4 cells"), std::string::npos) << rep.rows[2].error;
  EXPECT_EQ(rep.rows[2].verdict, "error");
  EXPECT_EQ(rep.rows[0].verdict, "incomplete");
  EXPECT_TRUE(std::isnan(rep.rows[5].distance_l2));
  EXPECT_GT(rep.rows[4].distance_l2, 0.0);
}

TEST(Sweep, ResolventRows) {
  SweepConfig c;
  c.mode = SweepMode::Resolvent;
  c.potential.sigmas = {0.0};
  c.r_max = 20.0;
  c.n = 1023;
  c.epsilons = {0.4, 0.2, 0.1};
  c.lambdas = {1.0, 4.0};
  auto rep = run_sweep(c);
  ASSERT_EQ(rep.rows.size(), 6u);
  auto g = make_grid(c.r_max, c.n);
  auto probes = probe_set(g);
  const auto& r = rep.rows[3];
  EXPECT_EQ(r.lambda, 4.0);
  ASSERT_GE(r.probe_id, 0);
  auto P = row_potential(c.potential, r.sigma, r.epsilon, g);
  double d = probe_distance(
      probes, [&](const ReducedWave& f) { return perturbed_resolvent_apply(P, r.epsilon, 4.0, f); },
      [&](const ReducedWave& f) { return free_resolvent_apply(4.0, f); });
  EXPECT_EQ(r.distance_l2, d);
}

TEST(FitRate, MirrorsClassifyExamples) {
  auto rows_for = [](double p, double c) {
    std::vector<ReportRow> rows;
    for (double e : {0.4, 0.2, 0.1, 0.05}) {
      ReportRow r;
      r.epsilon = e;
      r.distance_l2 = c * std::pow(e, p);
      rows.push_back(r);
    }
    return rows;
  };
  EXPECT_NEAR(fit_rate(rows_for(-2.0, 1.0)).slope, -2.0, 1e-12);
  EXPECT_NEAR(fit_rate(rows_for(-2.0, 1.0)).half_width, 0.0, 1e-10);
  EXPECT_NEAR(fit_rate(rows_for(3.0, 1.0)).slope, 3.0, 1e-12);
  EXPECT_NEAR(fit_rate(rows_for(0.5, 37.0)).slope, fit_rate(rows_for(0.5, 1.0)).slope, 1e-12);

  auto bad = rows_for(1.0, 1.0);
  bad[2].distance_l2 = 0.0;
  EXPECT_THROW(fit_rate(bad), DataError);
  bad = rows_for(1.0, 1.0);
  bad.resize(2);
  EXPECT_THROW(fit_rate(bad), DataError);
}

TEST(Report, JsonAndCsvCarryTheSameNumbers) {
  auto c = small_sweep();
  c.reference = Reference::Point;
  c.alpha = INFINITY;  // point reference at alpha = inf is the free flow
  auto rep = run_sweep(c);
  auto j = nlohmann::json::parse(report_json(rep));
  std::stringstream csv(report_csv(rep));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "sigma,epsilon,lambda,distance_l2,probe_id,resonant,alpha,slope,verdict");
  std::size_t k = 0;
  while (std::getline(csv, line)) {
    auto f = split(line);
    ASSERT_EQ(f.size(), 9u) << line;
    const auto& o = j["rows"][k];
    EXPECT_EQ(std::stod(f[0]), o["sigma"].get<double>());
    EXPECT_EQ(std::stod(f[1]), o["epsilon"].get<double>());
    EXPECT_TRUE(f[2].empty() && o["lambda"].is_null());
    EXPECT_EQ(std::stod(f[3]), o["distance_l2"].get<double>());
    EXPECT_EQ(std::stod(f[3]), rep.rows[k].distance_l2);
    EXPECT_EQ(f[6], "inf");
    EXPECT_EQ(o["alpha"], "inf");
    EXPECT_EQ(std::stod(f[7]), o["slope"].get<double>());
    EXPECT_EQ(f[8], o["verdict"].get<std::string>());
    ++k;
  }
  EXPECT_EQ(k, rep.rows.size());
}

TEST(Report, RerunIsByteIdenticalAndBadPathNamed) {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "deltalab_test_report";
  fs::remove_all(dir);
  auto c = small_sweep();
  auto p1 = emit_report(run_sweep(c), (dir / "a").string(), ReportFormat::Json);
  auto p2 = emit_report(run_sweep(c), (dir / "b").string(), ReportFormat::Json);
  EXPECT_EQ(fs::path(p1).filename(), "report.json");
  EXPECT_EQ(slurp(p1), slurp(p2));
  auto p3 = emit_report(run_sweep(c), (dir / "a").string(), ReportFormat::Csv);
  EXPECT_EQ(fs::path(p3).filename(), "report.csv");

  // a regular file where a directory is expected
  std::ofstream(dir / "blocker") << "x";
  auto bad = (dir / "blocker" / "sub").string();
  try {
    emit_report(run_sweep(c), bad, ReportFormat::Json);
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find(bad), std::string::npos) << e.what();
  }
  fs::remove_all(dir);
}

TEST(Initial, Catalogue) {
  auto g = make_grid(20.0, 511);
  EXPECT_NEAR(l2_norm(initial_datum({"gaussian", 1.0, 0.0}, g)), std::pow(kPi, 0.75), 1e-6);
  auto b = initial_datum({"bump", 2.0, 0.0}, g);
  EXPECT_EQ(b.chi[std::size_t(2.5 / g.h)], cplx(0.0));
  EXPECT_GT(std::abs(b.chi[10]), 0.0);
  EXPECT_THROW(initial_datum({"comet", 1.0, 0.0}, g), ConfigurationError);
}
