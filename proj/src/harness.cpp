#include "deltalab/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <thread>

#include "json.hpp"

namespace deltalab {

ReducedWave initial_datum(const InitialSpec& s, const RadialGrid& g) {
  const double w = s.width, c = s.center;
  if (s.kind == "gaussian")
    return reduce(g, [w](double r) { return cplx(std::exp(-r * r / (2.0 * w * w))); });
  if (s.kind == "shell")
    return reduce(g, [w, c](double r) { return cplx(std::exp(-(r - c) * (r - c) / (w * w))); });
  if (s.kind == "bump")
    return reduce(g, [w](double r) {
      double x = r / w;
      return cplx(x < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - x * x)) : 0.0);
    });
  throw ConfigurationError("unknown initial datum '" + s.kind + "'");
}

ScaledPotential scaled_potential(const PotentialSpec& spec, double sigma) {
  return make_scaled_potential(profile_by_name(spec.profile, spec.amplitude), sigma,
                               make_eta(spec.eta));
}

ScaledPotential row_potential(const PotentialSpec& spec, double sigma, double eps,
                              const RadialGrid& g) {
  auto P = scaled_potential(spec, sigma);
  if (spec.resonant) P.base.amplitude = -stencil_resonant_depth(P.base.kind, g.h / eps);
  return P;
}

bool Report::any_failed() const {
  for (const auto& r : rows)
    if (!r.error.empty()) return true;
  return false;
}

SlopeFit fit_rate(const std::vector<ReportRow>& rows) {
  std::vector<double> e, d;
  for (const auto& r : rows) {
    e.push_back(r.epsilon);
    d.push_back(r.distance_l2);
  }
  return fit_loglog(e, d, 3);
}

namespace {

struct Task {
  ReportRow row;
  std::function<void(ReportRow&)> work;
};

void run_tasks(std::vector<Task>& tasks, int workers) {
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < tasks.size();) {
      try {
        tasks[k].work(tasks[k].row);
      } catch (const std::exception& e) {
        tasks[k].row.error = e.what();
        if (tasks[k].row.error.empty()) tasks[k].row.error = "unknown error";
      }
    }
  };
  const int nt = std::max(1, std::min<int>(workers, int(tasks.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
}

// slope and verdict per (kind, sigma, lambda) series
void summarise(std::vector<ReportRow>& rows) {
  std::map<std::tuple<std::string, double, double>, std::vector<std::size_t>> series;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    double lam = std::isnan(rows[k].lambda) ? -1.0 : rows[k].lambda;
    series[{rows[k].kind, rows[k].sigma, lam}].push_back(k);
  }
  for (auto& [key, idx] : series) {
    bool failed = false, decreasing = true;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      failed = failed || !rows[idx[j]].error.empty();
      if (j > 0) decreasing = decreasing && rows[idx[j]].distance_l2 < rows[idx[j - 1]].distance_l2;
    }
    double slope = kNaN;
    if (!failed && idx.size() >= 3) {
      std::vector<ReportRow> sel;
      for (auto i : idx) sel.push_back(rows[i]);
      try {
        slope = fit_rate(sel).slope;
      } catch (const DataError&) {
      }
    }
    for (auto i : idx) {
      rows[i].slope = slope;
      rows[i].verdict = !rows[i].error.empty() ? "error"
                        : failed              ? "incomplete"
                        : decreasing          ? "decreasing"
                                              : "not_decreasing";
    }
  }
}

}  // namespace

Report run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  Report rep;
  rep.config_hash = config_hash(cfg);
  rep.grid = make_grid(cfg.r_max, cfg.n);
  const auto& g = rep.grid;
  const double ref_alpha = cfg.reference == Reference::Point ? cfg.alpha : kNaN;
  const auto pi = make_point_interaction(cfg.reference == Reference::Point ? cfg.alpha : INFINITY);

  std::vector<Task> tasks;
  auto base_row = [&](const char* kind, double sigma, double eps) {
    ReportRow r;
    r.index = tasks.size();
    r.kind = kind;
    r.sigma = sigma;
    r.epsilon = eps;
    r.resonant = cfg.potential.resonant;
    r.alpha = ref_alpha;
    return r;
  };

  if (cfg.mode == SweepMode::Evolution) {
    auto a = initial_datum(cfg.initial, g);
    auto w = sample_interaction(cfg.interaction, g);
    // shared, read-only once built
    Trajectory ref;
    std::string ref_error;
    try {
      ref = cfg.reference == Reference::Free ? evolve_free(w, a, cfg.evolution)
                                             : evolve_pi(pi, w, a, cfg.evolution);
    } catch (const std::exception& e) {
      ref_error = std::string("reference trajectory: ") + e.what();
    }
    for (double sigma : cfg.potential.sigmas)
      for (double eps : cfg.epsilons) {
        Task t{base_row("evolution", sigma, eps), {}};
        t.work = [&, sigma, eps](ReportRow& row) {
          if (!ref_error.empty()) throw NumericalError(ref_error);
          auto P = row_potential(cfg.potential, sigma, eps, g);
          row.amplitude = P.base.amplitude;
          auto u = evolve_perturbed(P, eps, w, a, cfg.evolution);
          row.drift = u.drift;
          row.distance_l2 = sup_l2_distance(u, ref);
        };
        tasks.push_back(std::move(t));
      }
    run_tasks(tasks, cfg.workers);
  } else {
    auto probes = probe_set(g);
    for (double sigma : cfg.potential.sigmas)
      for (double eps : cfg.epsilons)
        for (double lam : cfg.lambdas) {
          Task t{base_row("resolvent", sigma, eps), {}};
          t.row.lambda = lam;
          t.work = [&, sigma, eps, lam](ReportRow& row) {
            auto P = row_potential(cfg.potential, sigma, eps, g);
            row.amplitude = P.base.amplitude;
            double worst = -1.0;
            for (std::size_t k = 0; k < probes.size(); ++k) {
              auto ref = cfg.reference == Reference::Free ? free_resolvent_apply(lam, probes[k])
                                                          : pi_resolvent_apply(pi, lam, probes[k]);
              double d = l2_distance(perturbed_resolvent_apply(P, eps, lam, probes[k]), ref);
              if (d > worst) {
                worst = d;
                row.probe_id = int(k);
              }
            }
            row.distance_l2 = worst;
          };
          tasks.push_back(std::move(t));
        }
    run_tasks(tasks, cfg.workers);
  }
  for (auto& t : tasks) rep.rows.push_back(std::move(t.row));
  summarise(rep.rows);
  return rep;
}

namespace {

nlohmann::json num(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x + 0.0;  // no -0
}

std::string csv_num(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string report_json(const Report& rep) {
  nlohmann::ordered_json j;
  j["version"] = rep.version;
  j["config_hash"] = rep.config_hash;
  j["grid"] = {{"r_max", rep.grid.r_max}, {"n", rep.grid.n}, {"h", rep.grid.h}};
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rep.rows) {
    nlohmann::ordered_json o;
    o["index"] = r.index;
    o["kind"] = r.kind;
    o["sigma"] = num(r.sigma);
    o["epsilon"] = num(r.epsilon);
    o["lambda"] = num(r.lambda);
    o["distance_l2"] = num(r.distance_l2);
    o["probe_id"] = r.probe_id < 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.probe_id);
    o["resonant"] = r.resonant;
    o["alpha"] = num(r.alpha);
    o["slope"] = num(r.slope);
    o["verdict"] = r.verdict;
    o["amplitude"] = num(r.amplitude);
    o["drift"] = num(r.drift);
    o["error"] = r.error;
    j["rows"].push_back(o);
  }
  return j.dump(2) + "\n";
}

std::string report_csv(const Report& rep) {
  std::string s = "sigma,epsilon,lambda,distance_l2,probe_id,resonant,alpha,slope,verdict\n";
  for (const auto& r : rep.rows) {
    s += csv_num(r.sigma) + "," + csv_num(r.epsilon) + "," + csv_num(r.lambda) + "," +
         csv_num(r.distance_l2) + "," + (r.probe_id < 0 ? "" : std::to_string(r.probe_id)) + "," +
         (r.resonant ? "true" : "false") + "," + csv_num(r.alpha) + "," + csv_num(r.slope) + "," +
         r.verdict + "\n";
  }
  return s;
}

std::string emit_report(const Report& rep, const std::string& dir, ReportFormat fmt) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  auto path = (fs::path(dir) / ("report." + format_name(fmt))).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << (fmt == ReportFormat::Json ? report_json(rep) : report_csv(rep));
  out.close();
  if (!out) throw IoError("write failed for '" + path + "'");
  return path;
}

}  // namespace deltalab
