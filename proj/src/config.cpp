#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "deltalab/harness.hpp"

namespace deltalab {

std::string format_name(ReportFormat f) { return f == ReportFormat::Json ? "json" : "csv"; }

ReportFormat format_by_name(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  throw ConfigurationError("unknown report format '" + s + "' (json, csv)");
}

namespace {

const char* mode_name(SweepMode m) { return m == SweepMode::Evolution ? "evolution" : "resolvent"; }
const char* reference_name(Reference r) { return r == Reference::Free ? "free" : "point"; }
const char* scheme_name(Scheme s) { return s == Scheme::Strang ? "strang" : "duhamel_picard"; }

// Collects every problem instead of stopping at the first.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& errs) : errs_(errs) {}

  // Checks that `node` is a map holding only `allowed` keys.
  bool map(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed) {
    if (!node.IsMap()) {
      errs_.push_back(path + ": expected a mapping");
      return false;
    }
    for (const auto& kv : node) {
      auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) errs_.push_back(path + "." + key + ": unknown key");
    }
    return true;
  }

  template <class T>
  void get(const YAML::Node& node, const std::string& key, const std::string& path, T& out) {
    auto v = node[key];
    if (!v) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      errs_.push_back(path + "." + key + ": wrong type");
    }
  }

  template <class T>
  void list(const YAML::Node& node, const std::string& key, const std::string& path,
            std::vector<T>& out) {
    auto v = node[key];
    if (!v) return;
    if (!v.IsSequence()) {
      errs_.push_back(path + "." + key + ": expected a list");
      return;
    }
    try {
      out = v.as<std::vector<T>>();
    } catch (const YAML::Exception&) {
      errs_.push_back(path + "." + key + ": wrong element type");
    }
  }

  template <class E>
  void choice(const YAML::Node& node, const std::string& key, const std::string& path,
              const std::map<std::string, E>& names, E& out) {
    std::string s;
    bool present = bool(node[key]);
    get(node, key, path, s);
    if (!present || s.empty()) return;
    auto it = names.find(s);
    if (it == names.end())
      errs_.push_back(path + "." + key + ": unknown value '" + s + "'");
    else
      out = it->second;
  }

  void error(const std::string& m) { errs_.push_back(m); }

 private:
  std::vector<std::string>& errs_;
};

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& m : v) s += "\n  " + m;
  return s;
}

}  // namespace

std::vector<std::string> violations(const SweepConfig& c) {
  std::vector<std::string> v;
  if (c.epsilons.empty()) v.push_back("epsilons: ladder is empty");
  for (std::size_t k = 0; k < c.epsilons.size(); ++k) {
    double e = c.epsilons[k];
    if (!(e > 0.0 && e <= 1.0)) v.push_back("epsilons: " + std::to_string(e) + " outside (0, 1]");
    if (k > 0 && !(e < c.epsilons[k - 1])) v.push_back("epsilons: not strictly decreasing");
  }
  if (c.mode == SweepMode::Resolvent && c.lambdas.empty()) v.push_back("lambdas: empty");
  for (double l : c.lambdas)
    if (!(l > 0.0)) v.push_back("lambdas: " + std::to_string(l) + " must be positive");
  try {
    profile_by_name(c.potential.profile, c.potential.amplitude);
  } catch (const ConfigurationError& e) {
    v.push_back(std::string("potential.profile: ") + e.what());
  }
  if (!std::isfinite(c.potential.amplitude)) v.push_back("potential.amplitude: not finite");
  if (c.potential.sigmas.empty()) v.push_back("potential.sigmas: empty");
  for (double s : c.potential.sigmas)
    if (!(s >= 0.0 && s <= 3.0)) v.push_back("potential.sigmas: " + std::to_string(s) + " outside [0, 3]");
  for (double q : c.potential.eta)
    if (!std::isfinite(q)) v.push_back("potential.eta: coefficient not finite");
  if (c.initial.kind != "gaussian" && c.initial.kind != "shell" && c.initial.kind != "bump")
    v.push_back("initial.kind: unknown value '" + c.initial.kind + "'");
  if (!(c.initial.width > 0.0)) v.push_back("initial.width: must be positive");
  if (!(c.initial.center >= 0.0)) v.push_back("initial.center: must be non-negative");
  if (!(c.r_max > 0.0)) v.push_back("grid.r_max: must be positive");
  if (c.n < 16) v.push_back("grid.n: must be at least 16");
  if (!std::isfinite(c.interaction.strength)) v.push_back("interaction.strength: not finite");
  try {
    validate(c.evolution);
  } catch (const ConfigurationError& e) {
    v.push_back(e.what());
  }
  if (c.reference == Reference::Point && std::isnan(c.alpha)) v.push_back("reference.alpha: NaN");
  if (c.workers < 1) v.push_back("workers: must be >= 1");
  if (c.out_dir.empty()) v.push_back("output.dir: empty");
  return v;
}

void validate(const SweepConfig& cfg) {
  auto v = violations(cfg);
  if (!v.empty()) throw ValidationError("invalid configuration:" + join(v));
}

SweepConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string("invalid configuration: YAML: ") + e.what());
  }
  SweepConfig c;
  std::vector<std::string> errs;
  Reader r(errs);
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (r.map(root, "config",
            {"mode", "potential", "interaction", "initial", "grid", "evolution", "epsilons",
             "lambdas", "reference", "output", "seed", "workers"})) {
    r.choice(root, "mode", "config",
             std::map<std::string, SweepMode>{{"evolution", SweepMode::Evolution},
                                              {"resolvent", SweepMode::Resolvent}},
             c.mode);
    if (auto p = root["potential"];
        p && r.map(p, "potential", {"profile", "amplitude", "sigmas", "eta", "resonant"})) {
      r.get(p, "profile", "potential", c.potential.profile);
      r.get(p, "amplitude", "potential", c.potential.amplitude);
      r.list(p, "sigmas", "potential", c.potential.sigmas);
      r.list(p, "eta", "potential", c.potential.eta);
      r.get(p, "resonant", "potential", c.potential.resonant);
    }
    if (auto w = root["interaction"]; w && r.map(w, "interaction", {"kernel", "strength"})) {
      std::string kernel = interaction_name(c.interaction.kind);
      r.get(w, "kernel", "interaction", kernel);
      r.get(w, "strength", "interaction", c.interaction.strength);
      try {
        c.interaction = interaction_by_name(kernel, c.interaction.strength);
      } catch (const ConfigurationError& e) {
        r.error(std::string("interaction.kernel: ") + e.what());
      }
    }
    if (auto a = root["initial"]; a && r.map(a, "initial", {"kind", "width", "center"})) {
      r.get(a, "kind", "initial", c.initial.kind);
      r.get(a, "width", "initial", c.initial.width);
      r.get(a, "center", "initial", c.initial.center);
    }
    if (auto g = root["grid"]; g && r.map(g, "grid", {"r_max", "n"})) {
      r.get(g, "r_max", "grid", c.r_max);
      long long n = (long long)c.n;
      r.get(g, "n", "grid", n);
      if (n < 0) r.error("grid.n: must be positive");
      else c.n = std::size_t(n);
    }
    if (auto e = root["evolution"];
        e && r.map(e, "evolution",
                   {"T", "dt", "snapshot_stride", "scheme", "picard_iters", "picard_tol",
                    "drift_tol", "max_halvings"})) {
      auto& ev = c.evolution;
      r.get(e, "T", "evolution", ev.T);
      r.get(e, "dt", "evolution", ev.dt);
      long long stride = (long long)ev.snapshot_stride;
      r.get(e, "snapshot_stride", "evolution", stride);
      if (stride < 1) r.error("evolution.snapshot_stride: must be >= 1");
      else ev.snapshot_stride = std::size_t(stride);
      r.choice(e, "scheme", "evolution",
               std::map<std::string, Scheme>{{"strang", Scheme::Strang},
                                             {"duhamel_picard", Scheme::DuhamelPicard}},
               ev.scheme);
      r.get(e, "picard_iters", "evolution", ev.picard_iters);
      r.get(e, "picard_tol", "evolution", ev.picard_tol);
      r.get(e, "drift_tol", "evolution", ev.drift_tol);
      r.get(e, "max_halvings", "evolution", ev.max_halvings);
    }
    r.list(root, "epsilons", "config", c.epsilons);
    r.list(root, "lambdas", "config", c.lambdas);
    if (auto ref = root["reference"]; ref && r.map(ref, "reference", {"kind", "alpha"})) {
      r.choice(ref, "kind", "reference",
               std::map<std::string, Reference>{{"free", Reference::Free},
                                                {"point", Reference::Point}},
               c.reference);
      r.get(ref, "alpha", "reference", c.alpha);
    }
    if (auto o = root["output"]; o && r.map(o, "output", {"dir", "format"})) {
      r.get(o, "dir", "output", c.out_dir);
      r.choice(o, "format", "output",
               std::map<std::string, ReportFormat>{{"json", ReportFormat::Json},
                                                   {"csv", ReportFormat::Csv}},
               c.format);
    }
    r.get(root, "seed", "config", c.seed);
    r.get(root, "workers", "config", c.workers);
  }
  if (errs.empty()) errs = violations(c);
  if (!errs.empty()) throw ValidationError("invalid configuration:" + join(errs));
  return c;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const SweepConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << mode_name(c.mode);
  out << YAML::Key << "potential" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "profile" << YAML::Value << c.potential.profile;
  out << YAML::Key << "amplitude" << YAML::Value << c.potential.amplitude;
  out << YAML::Key << "sigmas" << YAML::Value << YAML::Flow << c.potential.sigmas;
  out << YAML::Key << "eta" << YAML::Value << YAML::Flow << c.potential.eta;
  out << YAML::Key << "resonant" << YAML::Value << c.potential.resonant;
  out << YAML::EndMap;
  out << YAML::Key << "interaction" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kernel" << YAML::Value << interaction_name(c.interaction.kind);
  out << YAML::Key << "strength" << YAML::Value << c.interaction.strength;
  out << YAML::EndMap;
  out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << c.initial.kind;
  out << YAML::Key << "width" << YAML::Value << c.initial.width;
  out << YAML::Key << "center" << YAML::Value << c.initial.center;
  out << YAML::EndMap;
  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "r_max" << YAML::Value << c.r_max;
  out << YAML::Key << "n" << YAML::Value << (unsigned long long)c.n;
  out << YAML::EndMap;
  const auto& e = c.evolution;
  out << YAML::Key << "evolution" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "T" << YAML::Value << e.T;
  out << YAML::Key << "dt" << YAML::Value << e.dt;
  out << YAML::Key << "snapshot_stride" << YAML::Value << (unsigned long long)e.snapshot_stride;
  out << YAML::Key << "scheme" << YAML::Value << scheme_name(e.scheme);
  out << YAML::Key << "picard_iters" << YAML::Value << e.picard_iters;
  out << YAML::Key << "picard_tol" << YAML::Value << e.picard_tol;
  out << YAML::Key << "drift_tol" << YAML::Value << e.drift_tol;
  out << YAML::Key << "max_halvings" << YAML::Value << e.max_halvings;
  out << YAML::EndMap;
  out << YAML::Key << "epsilons" << YAML::Value << YAML::Flow << c.epsilons;
  out << YAML::Key << "lambdas" << YAML::Value << YAML::Flow << c.lambdas;
  out << YAML::Key << "reference" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << reference_name(c.reference);
  out << YAML::Key << "alpha" << YAML::Value << c.alpha;
  out << YAML::EndMap;
  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dir" << YAML::Value << c.out_dir;
  out << YAML::Key << "format" << YAML::Value << format_name(c.format);
  out << YAML::EndMap;
  out << YAML::Key << "seed" << YAML::Value << (unsigned long long)c.seed;
  out << YAML::Key << "workers" << YAML::Value << c.workers;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string config_hash(const SweepConfig& cfg) {
  // workers and the output location do not change any number in the report
  SweepConfig c = cfg;
  c.workers = 1;
  c.out_dir = "-";
  c.format = ReportFormat::Json;
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : dump_config(c)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

}  // namespace deltalab
