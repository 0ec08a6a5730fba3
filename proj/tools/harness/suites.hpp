#pragma once

#include "harness/config.hpp"
#include "harness/report.hpp"

namespace kelab::harness {

// Runs one subcommand, writes its artifacts plus summary.json and timings.json
// into cfg.out_dir, and returns the report. Numerical failures inside a check
// turn that check into a failure; they do not abort the run.
SuiteReport run(const RunConfig& cfg);

// Subsets used by run(); each writes its own artifacts.
std::vector<CheckEntry> run_special_fn(const RunConfig& cfg, ArtifactWriter& out);
std::vector<CheckEntry> run_curvature(const RunConfig& cfg, ArtifactWriter& out);
std::vector<CheckEntry> run_solve_disk(const RunConfig& cfg, ArtifactWriter& out);
std::vector<CheckEntry> run_sweep(const RunConfig& cfg, ArtifactWriter& out);
std::vector<CheckEntry> run_energy(const RunConfig& cfg, ArtifactWriter& out);
std::vector<CheckEntry> run_rescale(const RunConfig& cfg, ArtifactWriter& out);
std::vector<CheckEntry> run_cylinder(const RunConfig& cfg, ArtifactWriter& out);

// Upper bound on the wall time of `all`.
inline constexpr double kFullSuiteSeconds = 300.0;

}  // namespace kelab::harness
