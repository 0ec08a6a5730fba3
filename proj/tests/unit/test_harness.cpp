#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <string>

#include "harness/config.hpp"

using namespace kelab::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("kelab-test-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(KELAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(HarnessConfig, ParsesLadders) {
  EXPECT_EQ(parse_ladder("0.5,0.1,0.01"), (std::vector<double>{0.5, 0.1, 0.01}));
  EXPECT_EQ(parse_ladder(" 0.25 , 0.125"), (std::vector<double>{0.25, 0.125}));
  EXPECT_THROW(parse_ladder(""), ConfigError);
  EXPECT_THROW(parse_ladder("0.5,x"), ConfigError);
  EXPECT_THROW(parse_ladder("0.5,,0.1"), ConfigError);
}

TEST(HarnessConfig, ValidatesRanges) {
  RunConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.beta_ladder = {0.1, 0.5};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.beta_ladder = {1.0, 0.5};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.grid = 64;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.sweep.k_min = 0.8;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.rescale.log_moduli = {0.0};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.cylinder.min_dimension = 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(HarnessConfig, DefaultFileMatchesBuiltInDefaults) {
  const RunConfig from_file = load_config(fs::path(KELAB_DEFAULT_CONFIG));
  const RunConfig defaults;
  EXPECT_EQ(from_file.beta_ladder, defaults.beta_ladder);
  EXPECT_EQ(from_file.grid, defaults.grid);
  EXPECT_EQ(from_file.seed, defaults.seed);
  EXPECT_EQ(from_file.special_fn.betas, defaults.special_fn.betas);
  EXPECT_EQ(from_file.curvature.backgrounds, defaults.curvature.backgrounds);
  EXPECT_EQ(from_file.curvature.epsilon, defaults.curvature.epsilon);
  EXPECT_EQ(from_file.solve_disk.oracle_betas, defaults.solve_disk.oracle_betas);
  EXPECT_EQ(from_file.sweep.k_max, defaults.sweep.k_max);
  EXPECT_EQ(from_file.energy.betas, defaults.energy.betas);
  EXPECT_EQ(from_file.rescale.log_moduli, defaults.rescale.log_moduli);
  EXPECT_EQ(from_file.cylinder.count, defaults.cylinder.count);
}

TEST(HarnessConfig, RejectsUnknownKeys) {
  const fs::path dir = scratch("config");
  std::ofstream(dir / "bad.json") << R"({"sweep": {"k_minimum": 0.3}})";
  EXPECT_THROW(load_config(dir / "bad.json"), ConfigError);
  std::ofstream(dir / "bad_top.json") << R"({"ladder": [0.5]})";
  EXPECT_THROW(load_config(dir / "bad_top.json"), ConfigError);
  std::ofstream(dir / "ok.json") << R"({"seed": 7, "sweep": {"k_min": 0.3}})";
  const RunConfig cfg = load_config(dir / "ok.json");
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.sweep.k_min, 0.3);
}

TEST(HarnessCli, CylinderRunsAreReproducible) {
  const fs::path a = scratch("cyl-a");
  const fs::path b = scratch("cyl-b");
  ASSERT_EQ(run_cli("cylinder --out " + a.string()), 0);
  ASSERT_EQ(run_cli("cylinder --out " + b.string()), 0);
  EXPECT_EQ(slurp(a / "cylinder.json"), slurp(b / "cylinder.json"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
  EXPECT_FALSE(slurp(a / "cylinder.json").empty());
}

TEST(HarnessCli, LadderOverrideControlsTheSweep) {
  const fs::path dir = scratch("sweep");
  ASSERT_EQ(run_cli("sweep --beta-ladder 0.5,0.1,0.01 --out " + dir.string()), 0);
  std::ifstream in(dir / "sweep.csv");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 4);
}

TEST(HarnessCli, ConfigErrorsExitWithTwo) {
  const fs::path dir = scratch("errors");
  std::ofstream(dir / "bad.json") << R"({"cylinder": {"size": 3}})";
  EXPECT_EQ(run_cli("cylinder --config " + (dir / "bad.json").string() + " --out " + dir.string()), 2);
  EXPECT_EQ(run_cli("sweep --beta-ladder 0.1,0.5 --out " + dir.string()), 2);
  EXPECT_EQ(run_cli("no-such-command"), 2);
}

TEST(HarnessCli, SpecialFunctionSummaryListsCriteria) {
  const fs::path dir = scratch("special");
  ASSERT_EQ(run_cli("special-fn --out " + dir.string()), 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(summary.at("suite"), "special-fn");
  EXPECT_TRUE(summary.at("hard_checks_pass").get<bool>());
  EXPECT_EQ(summary.at("criteria").at("AC-1"), "pass");
  EXPECT_EQ(summary.at("criteria").at("AC-2"), "pass");
  EXPECT_TRUE(fs::exists(dir / "special_fn.json"));
  EXPECT_TRUE(fs::exists(dir / "timings.json"));
}
