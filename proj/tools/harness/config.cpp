#include "harness/config.hpp"

#include <charconv>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace kelab::harness {

using nlohmann::json;

namespace {

struct Name {
  Subcommand sub;
  const char* text;
};

constexpr Name kNames[] = {
    {Subcommand::SpecialFn, "special-fn"}, {Subcommand::Curvature, "curvature"}, {Subcommand::SolveDisk, "solve-disk"},
    {Subcommand::Sweep, "sweep"},          {Subcommand::Energy, "energy"},       {Subcommand::Rescale, "rescale"},
    {Subcommand::Cylinder, "cylinder"},    {Subcommand::All, "all"},
};

// Reads obj[key] into out when present, recording the key as consumed.
template <class T>
void read(const json& obj, const char* key, T& out, std::set<std::string>& seen) {
  seen.insert(key);
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& obj, const std::set<std::string>& seen, const std::string& where) {
  for (const auto& item : obj.items())
    if (!seen.count(item.key())) throw ConfigError("unknown config key '" + item.key() + "' in " + where);
}

json section(const json& root, const char* name) {
  if (!root.contains(name)) return json::object();
  const json& s = root.at(name);
  if (!s.is_object()) throw ConfigError(std::string("config section '") + name + "' must be an object");
  return s;
}

void require_ladder(const std::vector<double>& betas, const std::string& what, bool allow_zero) {
  if (betas.empty()) throw ConfigError(what + " must not be empty");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const double b = betas[i];
    const bool in_range = allow_zero ? (b >= 0.0 && b < 1.0) : (b > 0.0 && b < 1.0);
    if (!in_range) throw ConfigError(what + " entries must lie in " + (allow_zero ? "[0, 1)" : "(0, 1)"));
    if (i > 0 && !(b < betas[i - 1])) throw ConfigError(what + " must be strictly decreasing");
  }
}

void require_in_unit_interval(const std::vector<double>& betas, const std::string& what) {
  if (betas.empty()) throw ConfigError(what + " must not be empty");
  for (double b : betas)
    if (!(b > 0.0 && b < 1.0)) throw ConfigError(what + " entries must lie in (0, 1)");
}

}  // namespace

Subcommand parse_subcommand(std::string_view name) {
  for (const auto& n : kNames)
    if (name == n.text) return n.sub;
  throw ConfigError("unknown subcommand '" + std::string(name) + "'");
}

std::string to_string(Subcommand s) {
  for (const auto& n : kNames)
    if (n.sub == s) return n.text;
  return "unknown";
}

const std::vector<Subcommand>& suite_order() {
  static const std::vector<Subcommand> order{Subcommand::SpecialFn, Subcommand::Curvature, Subcommand::SolveDisk,
                                             Subcommand::Sweep,     Subcommand::Energy,    Subcommand::Rescale,
                                             Subcommand::Cylinder};
  return order;
}

std::vector<double> parse_ladder(std::string_view csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    std::string_view item = csv.substr(pos, comma == std::string_view::npos ? csv.size() - pos : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw ConfigError("cannot parse beta ladder entry '" + std::string(item) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

void RunConfig::validate() const {
  require_ladder(beta_ladder, "beta_ladder", false);
  if (grid < 128 || grid > (1 << 22)) throw ConfigError("grid must lie in [128, 4194304]");
  if (out_dir.empty()) throw ConfigError("output directory must not be empty");

  require_in_unit_interval(special_fn.betas, "special-fn.betas");
  if (special_fn.t_points < 10) throw ConfigError("special-fn.t_points must be at least 10");
  if (!(special_fn.cancellation_tolerance > 0.0)) throw ConfigError("special-fn.cancellation_tolerance must be positive");

  for (double b : curvature.betas)
    if (!(b > 0.0 && b <= 0.5)) throw ConfigError("curvature.betas must lie in (0, 1/2]");
  if (curvature.betas.empty()) throw ConfigError("curvature.betas must not be empty");
  require_in_unit_interval(curvature.disk_betas, "curvature.disk_betas");
  if (curvature.dimension < 2 || curvature.dimension > 6) throw ConfigError("curvature.dimension must lie in [2, 6]");
  if (curvature.backgrounds.empty()) throw ConfigError("curvature.backgrounds must not be empty");
  for (const auto& b : curvature.backgrounds)
    if (b != "flat" && b != "quadratic" && b != "cross-term") throw ConfigError("unknown background '" + b + "'");

  require_ladder(solve_disk.oracle_betas, "solve-disk.oracle_betas", true);
  if (solve_disk.max_newton_iterations < 1) throw ConfigError("solve-disk.max_newton_iterations must be positive");

  if (!(sweep.k_min > 0.05 && sweep.k_max < 0.9 && sweep.k_min < sweep.k_max)) {
    throw ConfigError("sweep compact set must satisfy 0.05 < k_min < k_max < 0.9");
  }

  require_ladder(energy.betas, "energy.betas", false);
  if (!(energy.step > 0.0 && energy.step <= 0.01)) throw ConfigError("energy.step must lie in (0, 0.01]");
  if (energy.jensen_samples < 1 || energy.translation_samples < 1) throw ConfigError("energy sample counts must be positive");

  require_ladder(rescale.betas, "rescale.betas", false);
  if (rescale.betas.size() < 2) throw ConfigError("rescale.betas needs at least two entries");
  if (rescale.expansion_points < 4) throw ConfigError("rescale.expansion_points must be at least 4");
  if (!(rescale.expansion_beta_min > 0.0 && rescale.expansion_beta_min < rescale.expansion_beta_max &&
        rescale.expansion_beta_max < 1.0)) {
    throw ConfigError("rescale expansion ladder bounds must satisfy 0 < min < max < 1");
  }
  if (rescale.log_moduli.empty()) throw ConfigError("rescale.log_moduli must not be empty");
  for (double l : rescale.log_moduli)
    if (l == 0.0 || std::abs(l) > 1.38) throw ConfigError("rescale.log_moduli must be nonzero with 1/2 <= |w1| <= 2");

  if (cylinder.count < 1) throw ConfigError("cylinder.count must be positive");
  if (cylinder.min_dimension < 2 || cylinder.max_dimension < cylinder.min_dimension || cylinder.max_dimension > 12) {
    throw ConfigError("cylinder dimensions must satisfy 2 <= min <= max <= 12");
  }
  if (cylinder.records < 0) throw ConfigError("cylinder.records must be nonnegative");
}

RunConfig load_config(const std::optional<std::filesystem::path>& file) {
  RunConfig cfg;
  if (!file) return cfg;
  std::ifstream in(*file);
  if (!in) throw ConfigError("cannot open config file " + file->string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + file->string() + " is not valid JSON: " + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");

  std::set<std::string> seen;
  std::string out = cfg.out_dir.string();
  read(root, "beta_ladder", cfg.beta_ladder, seen);
  read(root, "grid", cfg.grid, seen);
  read(root, "out", out, seen);
  read(root, "seed", cfg.seed, seen);
  cfg.out_dir = out;
  for (const auto& n : kNames)
    if (n.sub != Subcommand::All) seen.insert(n.text);
  reject_unknown(root, seen, "the top level");

  {
    const json s = section(root, "special-fn");
    std::set<std::string> k;
    read(s, "betas", cfg.special_fn.betas, k);
    read(s, "t_points", cfg.special_fn.t_points, k);
    read(s, "cancellation_tolerance", cfg.special_fn.cancellation_tolerance, k);
    reject_unknown(s, k, "special-fn");
  }
  {
    const json s = section(root, "curvature");
    std::set<std::string> k;
    read(s, "betas", cfg.curvature.betas, k);
    read(s, "backgrounds", cfg.curvature.backgrounds, k);
    read(s, "dimension", cfg.curvature.dimension, k);
    read(s, "epsilon", cfg.curvature.epsilon, k);
    read(s, "disk_betas", cfg.curvature.disk_betas, k);
    read(s, "max_sup_ratio", cfg.curvature.max_sup_ratio, k);
    reject_unknown(s, k, "curvature");
  }
  {
    const json s = section(root, "solve-disk");
    std::set<std::string> k;
    read(s, "oracle_betas", cfg.solve_disk.oracle_betas, k);
    read(s, "bump_amplitude", cfg.solve_disk.bump_amplitude, k);
    read(s, "max_newton_iterations", cfg.solve_disk.max_newton_iterations, k);
    read(s, "stability_factor", cfg.solve_disk.stability_factor, k);
    reject_unknown(s, k, "solve-disk");
  }
  {
    const json s = section(root, "sweep");
    std::set<std::string> k;
    read(s, "k_min", cfg.sweep.k_min, k);
    read(s, "k_max", cfg.sweep.k_max, k);
    read(s, "final_tolerance", cfg.sweep.final_tolerance, k);
    reject_unknown(s, k, "sweep");
  }
  {
    const json s = section(root, "energy");
    std::set<std::string> k;
    read(s, "betas", cfg.energy.betas, k);
    read(s, "step", cfg.energy.step, k);
    read(s, "jensen_samples", cfg.energy.jensen_samples, k);
    read(s, "translation_samples", cfg.energy.translation_samples, k);
    read(s, "final_gap_tolerance", cfg.energy.final_gap_tolerance, k);
    reject_unknown(s, k, "energy");
  }
  {
    const json s = section(root, "rescale");
    std::set<std::string> k;
    read(s, "betas", cfg.rescale.betas, k);
    read(s, "expansion_points", cfg.rescale.expansion_points, k);
    read(s, "expansion_beta_max", cfg.rescale.expansion_beta_max, k);
    read(s, "expansion_beta_min", cfg.rescale.expansion_beta_min, k);
    read(s, "log_moduli", cfg.rescale.log_moduli, k);
    read(s, "chain_samples", cfg.rescale.chain_samples, k);
    reject_unknown(s, k, "rescale");
  }
  {
    const json s = section(root, "cylinder");
    std::set<std::string> k;
    read(s, "count", cfg.cylinder.count, k);
    read(s, "min_dimension", cfg.cylinder.min_dimension, k);
    read(s, "max_dimension", cfg.cylinder.max_dimension, k);
    read(s, "records", cfg.cylinder.records, k);
    reject_unknown(s, k, "cylinder");
  }
  return cfg;
}

}  // namespace kelab::harness
