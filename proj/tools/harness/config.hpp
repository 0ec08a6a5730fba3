#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kelab::harness {

// Malformed or inconsistent run configuration (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Subcommand { SpecialFn, Curvature, SolveDisk, Sweep, Energy, Rescale, Cylinder, All };

Subcommand parse_subcommand(std::string_view name);
std::string to_string(Subcommand s);
const std::vector<Subcommand>& suite_order();  // every subcommand except All

struct SpecialFnSection {
  std::vector<double> betas{0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50};
  int t_points = 1000;
  double cancellation_tolerance = 1e-10;
};

struct CurvatureSection {
  std::vector<double> betas{0.5, 0.25, 0.1, 0.05};
  std::vector<std::string> backgrounds{"quadratic", "cross-term"};
  int dimension = 2;
  double epsilon = 0.1;
  std::vector<double> disk_betas{0.01, 0.05, 0.1, 0.25, 0.5};
  double max_sup_ratio = 2.0;
};

struct SolveDiskSection {
  std::vector<double> oracle_betas{0.5, 0.1, 0.01, 0.0};
  double bump_amplitude = 1.0;
  int max_newton_iterations = 8;
  double stability_factor = 2.0;
};

struct SweepSection {
  double k_min = 0.25;
  double k_max = 0.75;
  double final_tolerance = 0.05;
};

struct EnergySection {
  std::vector<double> betas{0.5, 0.25, 0.1, 0.05, 0.01, 0.001};
  double step = 1e-3;
  int jensen_samples = 50;
  int translation_samples = 20;
  double final_gap_tolerance = 1e-2;
};

struct RescaleSection {
  std::vector<double> betas{0.2, 0.1, 0.05, 0.025};
  int expansion_points = 12;
  double expansion_beta_max = 0.2;
  double expansion_beta_min = 0.005;
  std::vector<double> log_moduli{-1.2, -0.6, 0.6, 1.2};
  int chain_samples = 50;
};

struct CylinderSection {
  int count = 1000;
  int min_dimension = 2;
  int max_dimension = 5;
  int records = 10;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::All;
  std::vector<double> beta_ladder{0.5, 0.25, 0.1, 0.05, 0.01};
  int grid = 4096;
  std::filesystem::path out_dir = "kelab-out";
  std::uint64_t seed = 42;

  SpecialFnSection special_fn;
  CurvatureSection curvature;
  SolveDiskSection solve_disk;
  SweepSection sweep;
  EnergySection energy;
  RescaleSection rescale;
  CylinderSection cylinder;

  void validate() const;  // throws ConfigError
};

// Defaults, overlaid with the JSON file when given. Unknown keys are errors.
RunConfig load_config(const std::optional<std::filesystem::path>& file);

// "0.5,0.1,0.01" -> {0.5, 0.1, 0.01}
std::vector<double> parse_ladder(std::string_view csv);

}  // namespace kelab::harness
