#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "deltalab/colombeau.hpp"
#include "deltalab/evolution.hpp"
#include "deltalab/spectral.hpp"

namespace deltalab {

inline constexpr const char* kVersion = "0.1.0";

struct PotentialSpec {
  std::string profile = "square_well";  // square_well | gaussian | exponential
  double amplitude = -1.0;              // V = amplitude * shape; a well of depth d is -d
  std::vector<double> sigmas{3.0};
  std::vector<double> eta;  // q coefficients of eta(e) = 1 + e (1 - e) q(e)
  // Replace the amplitude per eps by the attractive depth at which the sampled operator has
  // a zero-energy resonance (meaningful at sigma = 2).
  bool resonant = false;
};

struct InitialSpec {
  std::string kind = "gaussian";  // gaussian e^{-r^2/2w^2} | shell e^{-(r-c)^2/w^2} | bump
  double width = 1.0;
  double center = 4.0;
};

enum class SweepMode { Evolution, Resolvent };
enum class Reference { Free, Point };
enum class ReportFormat { Json, Csv };

struct SweepConfig {
  SweepMode mode = SweepMode::Evolution;
  PotentialSpec potential;
  Interaction interaction{InteractionKind::Gaussian, 1.0};
  InitialSpec initial;
  double r_max = 40.0;
  std::size_t n = 4096;
  EvolutionConfig evolution;
  std::vector<double> epsilons{0.4, 0.2, 0.1, 0.05};
  std::vector<double> lambdas{1.0};
  Reference reference = Reference::Free;
  double alpha = 0.0;  // of the point-interaction reference
  std::string out_dir = "out";
  ReportFormat format = ReportFormat::Json;
  std::uint64_t seed = 1;
  int workers = 1;
};

// Every violation found, empty when valid.
std::vector<std::string> violations(const SweepConfig& cfg);
// Throws ValidationError listing all violations.
void validate(const SweepConfig& cfg);

// YAML. Unknown keys, wrong types and out-of-range values are collected and thrown together
// as one ValidationError. Missing keys keep their defaults.
SweepConfig parse_config(const std::string& yaml_text);
SweepConfig load_config(const std::string& path);  // IoError when unreadable
// Canonical YAML of every field, so that parse_config(dump_config(c)) == c.
std::string dump_config(const SweepConfig& cfg);
// 16 hex digits of FNV-1a over dump_config.
std::string config_hash(const SweepConfig& cfg);

ReducedWave initial_datum(const InitialSpec& spec, const RadialGrid& g);
ScaledPotential scaled_potential(const PotentialSpec& spec, double sigma);
// The potential actually used at (sigma, eps), with the resonant depth substituted if asked.
ScaledPotential row_potential(const PotentialSpec& spec, double sigma, double eps,
                              const RadialGrid& g);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ReportRow {
  std::size_t index = 0;
  std::string kind;  // evolution | resolvent
  double sigma = kNaN, epsilon = kNaN, lambda = kNaN;
  double distance_l2 = kNaN;
  int probe_id = -1;  // worst probe of a resolvent row
  bool resonant = false;
  double alpha = kNaN;  // of the reference, NaN for the free one
  double slope = kNaN;  // fitted over the row's series
  std::string verdict;  // decreasing | not_decreasing | error
  double amplitude = kNaN;  // of the base profile actually used
  double drift = kNaN;
  std::string error;
};

struct Report {
  std::string config_hash;
  std::string version = kVersion;
  RadialGrid grid;
  std::vector<ReportRow> rows;
  bool any_failed() const;
};

// Rows run concurrently on cfg.workers threads and are merged in index order; a failing row
// records its error and does not stop the others.
Report run_sweep(const SweepConfig& cfg);

// Log-log slope of distance against epsilon; at least 3 rows, DataError on non-positive values.
SlopeFit fit_rate(const std::vector<ReportRow>& rows);

std::string report_json(const Report& rep);
std::string report_csv(const Report& rep);
// Writes report.json or report.csv under dir (created if missing) and returns the path.
// IoError names the path.
std::string emit_report(const Report& rep, const std::string& dir, ReportFormat fmt);

std::string format_name(ReportFormat f);
ReportFormat format_by_name(const std::string& s);  // ConfigurationError

}  // namespace deltalab
