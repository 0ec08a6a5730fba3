#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "harness/config.hpp"
#include "harness/suites.hpp"

namespace {

void print_report(const kelab::harness::SuiteReport& rep) {
  using kelab::harness::format_number;
  using kelab::harness::Status;
  for (const auto& c : rep.checks) {
    const char* mark = c.status == Status::Pass ? "PASS" : c.status == Status::Fail ? "FAIL" : "INFO";
    std::printf("[%s] %-26s %-62s %8.3f s\n", mark, c.id.c_str(), c.title.c_str(), c.seconds);
    for (const auto& v : c.values) std::printf("         %-34s %s\n", v.name.c_str(), format_number(v.value).c_str());
    if (!c.note.empty()) std::printf("         note: %s\n", c.note.c_str());
  }
  std::printf("%s: %s in %.2f s\n", rep.suite.c_str(),
              rep.hard_checks_pass() ? "all hard checks pass" : "hard check failures", rep.seconds);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace kelab::harness;
  CLI::App app{"Numerical lab for conic and cusp Kahler-Einstein metrics"};
  app.require_subcommand(1);

  std::string config_path, out_dir, ladder;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  app.add_option("--config", config_path, "JSON config file with per-subcommand sections");
  app.add_option("--out", out_dir, "output directory for CSV and JSON artifacts");
  app.add_option("--seed", seed, "seed for every random draw");
  app.add_option("--beta-ladder", ladder, "comma-separated decreasing cone angles for solve-disk and sweep");
  app.add_option("--grid", grid, "solver grid intervals");
  for (const char* name : {"special-fn", "curvature", "solve-disk", "sweep", "energy", "rescale", "cylinder", "all"})
    app.add_subcommand(name)->fallthrough();
  app.fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  SuiteReport rep;
  try {
    RunConfig cfg = load_config(config_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(config_path));
    cfg.subcommand = parse_subcommand(app.get_subcommands().front()->get_name());
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed) cfg.seed = *seed;
    if (grid) cfg.grid = *grid;
    if (!ladder.empty()) cfg.beta_ladder = parse_ladder(ladder);
    cfg.validate();
    rep = run(cfg);
    print_report(rep);
    std::printf("artifacts: %s\n", cfg.out_dir.string().c_str());
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return rep.hard_checks_pass() ? 0 : 1;
}
