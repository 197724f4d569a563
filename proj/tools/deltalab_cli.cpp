#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "deltalab/harness.hpp"
#include "deltalab/oracles.hpp"
#include "json.hpp"

using namespace deltalab;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kValidation = 1, kNumerical = 2, kIo = 3 };

struct Common {
  std::string config, out, format;
  int workers = 0;
  long long seed = -1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "YAML configuration file")->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--workers", c.workers, "concurrent rows")->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "seed of the Monte-Carlo oracle")->check(CLI::NonNegativeNumber);
  sub->add_option("--format", c.format, "report format")->check(CLI::IsMember({"json", "csv"}));
}

SweepConfig resolve(const Common& c) {
  SweepConfig cfg = c.config.empty() ? SweepConfig{} : load_config(c.config);
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (c.workers > 0) cfg.workers = c.workers;
  if (c.seed >= 0) cfg.seed = std::uint64_t(c.seed);
  if (!c.format.empty()) cfg.format = format_by_name(c.format);
  validate(cfg);
  return cfg;
}

json num(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x + 0.0;  // no -0
}

json grid_json(const RadialGrid& g) { return {{"r_max", g.r_max}, {"n", g.n}, {"h", g.h}}; }

std::string write_file(const std::string& dir, const std::string& name, const std::string& body) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  auto path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << body;
  out.close();
  if (!out) throw IoError("write failed for '" + path + "'");
  return path;
}

json resonance_json(const ResonanceReport& r) {
  return {{"nearest_eigenvalue", r.nearest_eigenvalue},
          {"resonant", r.resonant},
          {"v_phi_integral", num(r.v_phi_integral)},
          {"alpha", num(r.alpha)},
          {"tol", r.tol},
          {"grid", grid_json(r.grid)}};
}

int cmd_resonance(const SweepConfig& cfg) {
  auto g = make_grid(cfg.r_max, cfg.n);
  auto P = scaled_potential(cfg.potential, 0.0);
  if (cfg.potential.resonant) P.base.amplitude = -bs_resonant_depth(P.base.kind, g);
  auto rep = detect_resonance_confirmed(P, g);
  json j = resonance_json(rep);
  j["profile"] = profile_name(P.base.kind);
  j["amplitude"] = P.base.amplitude;
  j["eta_prime0"] = P.eta.prime0();
  j["config_hash"] = config_hash(cfg);
  std::cout << write_file(cfg.out_dir, "resonance.json", j.dump(2) + "\n") << "\n";
  return kOk;
}

int emit_sweep(const Report& rep, const SweepConfig& cfg) {
  std::cout << emit_report(rep, cfg.out_dir, cfg.format) << "\n";
  for (const auto& r : rep.rows)
    if (!r.error.empty())
      std::cerr << "row " << r.index << " (sigma=" << r.sigma << ", eps=" << r.epsilon
                << "): " << r.error << "\n";
  return rep.any_failed() ? kNumerical : kOk;
}

// Factorisation discrepancy with the Gaussian probe, then the probe-distance sweep.
int cmd_resolvent_check(SweepConfig cfg) {
  cfg.mode = SweepMode::Resolvent;
  auto g = make_grid(cfg.r_max, cfg.n);
  auto probe = probe_set(g).front();
  json checks = json::array();
  bool failed = false;
  for (double sigma : cfg.potential.sigmas)
    for (double eps : cfg.epsilons)
      for (double lam : cfg.lambdas) {
        json row = {{"sigma", sigma}, {"epsilon", eps}, {"lambda", lam}};
        try {
          auto P = row_potential(cfg.potential, sigma, eps, g);
          row["discrepancy"] = resolvent_difference_check(P, eps, lam, probe).discrepancy;
        } catch (const std::exception& e) {
          row["discrepancy"] = nullptr;
          row["error"] = e.what();
          failed = true;
        }
        checks.push_back(row);
      }
  json j = {{"config_hash", config_hash(cfg)}, {"grid", grid_json(g)}, {"checks", checks}};
  std::cout << write_file(cfg.out_dir, "factorisation.json", j.dump(2) + "\n") << "\n";
  int code = emit_sweep(run_sweep(cfg), cfg);
  return failed ? kNumerical : code;
}

// First sigma and epsilon of the config; columns t, norm.
int cmd_evolve(const SweepConfig& cfg) {
  auto g = make_grid(cfg.r_max, cfg.n);
  const double sigma = cfg.potential.sigmas.front(), eps = cfg.epsilons.front();
  auto a = initial_datum(cfg.initial, g);
  auto w = sample_interaction(cfg.interaction, g);
  auto u = evolve_perturbed(row_potential(cfg.potential, sigma, eps, g), eps, w, a, cfg.evolution);
  std::string csv = "t,norm_l2\n";
  char buf[64];
  for (std::size_t k = 0; k < u.times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", u.times[k], u.l2_history[k]);
    csv += buf;
  }
  std::cout << write_file(cfg.out_dir, "trajectory.csv", csv) << "\n";
  std::cerr << "drift " << u.drift << ", dt " << u.dt_used << "\n";
  return kOk;
}

int cmd_colombeau(const SweepConfig& cfg, double fraction) {
  auto g = make_grid(cfg.r_max, cfg.n);
  ColombeauSetup s;
  s.fraction = fraction;
  s.coefficient = cfg.potential.amplitude;
  auto run = colombeau_pipeline(s, cfg.epsilons, sample_interaction(cfg.interaction, g),
                                initial_datum(cfg.initial, g), cfg.evolution);
  json rows = json::array();
  for (std::size_t k = 0; k < run.report.epsilons.size(); ++k)
    rows.push_back({{"epsilon", run.report.epsilons[k]},
                    {"distance_l2", run.report.distances[k]},
                    {"drift", run.family[k].drift}});
  json j = {{"config_hash", config_hash(cfg)},
            {"grid", grid_json(g)},
            {"coefficient", s.coefficient},
            {"fraction", fraction},
            {"verdict", verdict_name(run.report.verdict)},
            {"rows", rows}};
  std::cout << write_file(cfg.out_dir, "colombeau.json", j.dump(2) + "\n") << "\n";
  return kOk;
}

int cmd_oracle(const SweepConfig& cfg) {
  auto well = [](double r) { return r < 1.0 ? 1.0 : 0.0; };
  auto gauss = [](double r) { return std::exp(-r * r); };
  json j;
  j["seed"] = cfg.seed;
  j["square_well_resonant_depth"] = {{"closed_form", oracle::square_well_resonant_depth()},
                                     {"shooting", oracle::resonant_depth(well, 1.0, 1.0, 4.0)}};
  j["gaussian_resonant_depth_shooting"] = oracle::resonant_depth(gauss, 8.0, 1.0, 6.0);
  j["rollnik_square_well_depth1"] = oracle::rollnik_monte_carlo(well, 1.0, 2000000, cfg.seed);
  j["gaussian_l2_norm"] = oracle::gaussian_l2_norm();
  j["gaussian_convolution_r1"] = oracle::gaussian_convolution(1.0, 1.0, 1.0);
  std::cout << write_file(cfg.out_dir, "oracles.json", j.dump(2) + "\n") << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deltalab: singular point perturbations and the Hartree equation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common c;
  double fraction = 0.5;
  std::vector<std::pair<std::string, std::string>> subs = {
      {"resonance", "zero-energy resonance of the base potential and its alpha"},
      {"resolvent-check", "factorised resolvent discrepancy and probe distances"},
      {"evolve", "one trajectory, norm history as CSV"},
      {"sweep", "distance sweep over sigma and epsilon"},
      {"colombeau", "mollified pipeline and compatibility verdict"},
      {"oracle", "independent reference values"}};
  for (auto& [name, help] : subs) {
    auto* s = app.add_subcommand(name, help);
    add_common(s, c);
    if (name == "colombeau") s->add_option("--fraction", fraction, "required decay of the distance");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int rc = kOk;
  try {
    auto cfg = resolve(c);
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "resonance") rc = cmd_resonance(cfg);
    else if (cmd == "resolvent-check") rc = cmd_resolvent_check(cfg);
    else if (cmd == "evolve") rc = cmd_evolve(cfg);
    else if (cmd == "sweep") rc = emit_sweep(run_sweep(cfg), cfg);
    else if (cmd == "colombeau") rc = cmd_colombeau(cfg, fraction);
    else rc = cmd_oracle(cfg);
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  } catch (const ConfigurationError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kValidation;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  std::cerr << "elapsed "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
            << " s\n";
  return rc;
}
