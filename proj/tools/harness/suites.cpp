#include "harness/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "kelab/background.hpp"
#include "kelab/curvature.hpp"
#include "kelab/cylinder.hpp"
#include "kelab/disk_solver.hpp"
#include "kelab/energy.hpp"
#include "kelab/metric_models.hpp"
#include "kelab/rescaling.hpp"
#include "kelab/special_functions.hpp"

namespace kelab::harness {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Max that lets a NaN through, so that a NaN measurement fails every <= test.
void raise(double& acc, double v) {
  if (std::isnan(v) || v > acc) acc = v;
}

Status verdict(bool ok) { return ok ? Status::Pass : Status::Fail; }

std::string tag(double beta) { return format_number(beta); }

CheckEntry check(std::string id, std::string title, double time_limit, const std::function<Status(CheckEntry&)>& body) {
  CheckEntry e;
  e.id = std::move(id);
  e.title = std::move(title);
  e.time_limit = time_limit;
  const auto start = Clock::now();
  try {
    e.status = body(e);
  } catch (const std::exception& ex) {
    e.status = Status::Fail;
    e.note = std::string("error: ") + ex.what();
  }
  e.seconds = seconds_since(start);
  if (e.hard() && time_limit > 0.0 && e.seconds > time_limit) {
    e.status = Status::Fail;
    e.note += (e.note.empty() ? "" : "; ") + std::string("runtime over limit");
  }
  return e;
}

SolverConfig solver_config(const RunConfig& cfg) {
  SolverConfig c;
  c.grid = cfg.grid;
  return c;
}

std::vector<std::vector<double>> solver_rows(const SolverState& s) {
  const std::vector<double> psi = comparison_potential(s);
  std::vector<std::vector<double>> rows;
  rows.reserve(s.metric.x.size());
  for (std::size_t i = 0; i < s.metric.x.size(); ++i) {
    const double x = s.metric.x[i];
    rows.push_back({x, std::exp(x), s.metric.lambda[i], s.lambda_model[i], s.metric.lambda[i] / s.lambda_model[i],
                    psi[i]});
  }
  return rows;
}

const std::vector<std::string> kSolverColumns{"x", "r", "lambda", "lambda_model", "ratio", "psi"};

json solver_json(const SolverState& s) {
  return {{"beta", s.beta},
          {"iterations", s.iterations},
          {"normalization", s.normalization},
          {"final_residual", s.final_residual},
          {"residual_history", s.residual_history},
          {"fine_residual_history", s.fine_residual_history}};
}

}  // namespace

std::vector<CheckEntry> run_special_fn(const RunConfig& cfg, ArtifactWriter& out) {
  const auto& sec = cfg.special_fn;
  std::vector<CheckEntry> checks;
  json doc;

  checks.push_back(check("AC-1", "cancellation identity of the model coefficient", 1.0, [&](CheckEntry& e) {
    const double lo = -27.0;
    const double hi = std::log(0.25);
    double worst = 0.0;
    int points = 0;
    json rows = json::array();
    for (double beta : sec.betas) {
      const ConeAngle cone(beta);
      double w = 0.0;
      for (int i = 0; i < sec.t_points; ++i) {
        const double lt = lo + (hi - lo) * i / (sec.t_points - 1);
        raise(w, cancellation_relative_residual(lt, cone));
        ++points;
      }
      rows.push_back({{"beta", beta}, {"max_relative_residual", w}});
      raise(worst, w);
    }
    doc["cancellation"] = rows;
    e.values = {{"max_relative_residual", worst},
                {"points", static_cast<double>(points)},
                {"tolerance", sec.cancellation_tolerance}};
    return verdict(worst <= sec.cancellation_tolerance);
  }));

  checks.push_back(check("AC-2", "elementary inequalities and their equality points", 1.0, [&](CheckEntry& e) {
    InequalityGrid grid = InequalityGrid::standard();
    grid.betas = sec.betas;
    grid.t_points = sec.t_points;
    const InequalityReport rep = check_cone_inequalities(grid);
    json eq = json::array();
    for (std::size_t i = 0; i < rep.part_i_equality.size(); ++i) {
      const auto& p1 = rep.part_i_equality[i];
      const auto& p2 = rep.part_ii_equality[i];
      eq.push_back({{"beta", p1.beta},
                    {"part_i_located", p1.located},
                    {"part_i_exact", p1.exact},
                    {"part_ii_located", p2.located},
                    {"part_ii_exact", p2.exact}});
    }
    doc["inequalities"] = {{"part_i_max_violation", rep.part_i_max_violation},
                    {"part_ii_max_violation", rep.part_ii_max_violation},
                    {"part_iii_A_sup", rep.part_iii_A_sup},
                    {"part_iii_B_sup", rep.part_iii_B_sup},
                    {"equality_points", eq}};
    e.values = {{"part_i_max_violation", rep.part_i_max_violation},
                {"part_ii_max_violation", rep.part_ii_max_violation},
                {"max_equality_error", rep.max_equality_error()},
                {"part_iii_A_sup", rep.part_iii_A_sup},
                {"part_iii_B_sup", rep.part_iii_B_sup},
                {"points", static_cast<double>(rep.points_checked)}};
    return verdict(rep.ok(1e-14, 1e-9));
  }));

  out.json("special_fn.json", doc);
  return checks;
}

std::vector<CheckEntry> run_curvature(const RunConfig& cfg, ArtifactWriter& out) {
  const auto& sec = cfg.curvature;
  std::vector<CheckEntry> checks;

  checks.push_back(check("AC-3", "constant curvature of the disk models", 5.0, [&](CheckEntry& e) {
    constexpr int kSamples = 200;
    const double x_lo = std::log(1e-6);
    const double x_hi = std::log(0.9);
    // K = 2 R_{1111} / g^2 for a metric g i dz ^ dz-bar.
    auto gauss = [](const MetricField& f, Complex z) {
      CVector p(1);
      p(0) = z;
      const CurvatureTensor r = curvature_tensor(f, p);
      const double g = r.metric()(0, 0).real();
      return 2.0 * r(0, 0, 0, 0).real() / (g * g);
    };
    // Under w = z^beta the model becomes |dw|^2 / (1 - |w|^2)^2, the parameter-one model.
    const DiskModelField substituted(1.0);
    std::vector<std::vector<double>> rows;
    double mean_lo = kInf, mean_hi = -kInf, worst_sd = 0.0, worst_oracle = 0.0, worst_fd = 0.0, total = 0.0;
    for (double beta : sec.disk_betas) {
      const DiskModelField model(beta);
      const LogConformalFactor log_lambda = [beta](double x) { return log_disk_model_x(x, beta); };
      std::vector<double> ks;
      for (int i = 0; i < kSamples; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / (kSamples - 1);
        const double phase = 0.37 * i;
        const Complex z = std::polar(std::exp(x), phase);
        const double k = gauss(model, z);
        const double k_oracle = gauss(substituted, std::polar(std::exp(beta * x), beta * phase));
        const double k_fd = gauss_curvature_radial(log_lambda, z, {0.0, 1.0});
        rows.push_back({beta, std::exp(x), k, k_oracle, k_fd});
        ks.push_back(k);
        raise(worst_oracle, std::fabs(k - k_oracle));
        raise(worst_fd, std::fabs(k - k_fd));
      }
      double mean = 0.0, var = 0.0;
      for (double k : ks) mean += k / kSamples;
      for (double k : ks) var += (k - mean) * (k - mean) / kSamples;
      raise(worst_sd, std::sqrt(var));
      mean_lo = std::min(mean_lo, mean);
      mean_hi = std::max(mean_hi, mean);
      total += mean;
      e.values.push_back({"mean_b" + tag(beta), mean});
    }
    const double variation = mean_hi - mean_lo;
    e.values.push_back({"curvature", total / static_cast<double>(sec.disk_betas.size())});
    e.values.push_back({"max_grid_sd", worst_sd});
    e.values.push_back({"beta_variation", variation});
    e.values.push_back({"max_oracle_difference", worst_oracle});
    e.values.push_back({"max_fd_difference", worst_fd});
    out.csv("disk_curvature.csv", {"beta", "r", "K", "K_oracle", "K_radial_fd"}, rows);
    return verdict(worst_sd <= 1e-6 && variation <= 1e-6 && worst_oracle <= 1e-6);
  }));

  checks.push_back(check("AC-4", "uniform bisectional curvature bound on reference metrics", 120.0, [&](CheckEntry& e) {
    BisectionalOptions opts;
    opts.seed = cfg.seed;
    double ceiling = 0.0;
    bool ok = true;
    for (const auto& name : sec.backgrounds) {
      const BackgroundData bg = BackgroundData::builtin(parse_weight_kind(name), sec.dimension, sec.epsilon);
      const std::vector<CVector> samples = standard_sample_schedule(sec.dimension, cfg.seed);
      std::vector<std::vector<double>> rows;
      double lo = kInf, hi = 0.0;
      for (double beta : sec.betas) {
        const CurvatureReport rep = bisectional_sup(ConeAngle(beta), bg, samples, opts);
        for (const auto& p : rep.points)
          rows.push_back({beta, static_cast<double>(p.point_id), p.log_t, p.sup_bisec, p.g11_ratio, p.offdiag_ratio});
        e.values.push_back({"sup_" + name + "_b" + tag(beta), rep.sup});
        lo = std::min(lo, rep.sup);
        raise(hi, rep.sup);
      }
      const double ratio = hi / lo;
      e.values.push_back({"ratio_" + name, ratio});
      ok = ok && ratio <= sec.max_sup_ratio;
      raise(ceiling, hi);
      out.csv("curvature_" + name + ".csv",
              {"beta", "point_id", "log_t", "sup_bisec", "g11_ratio", "offdiag_ratio"}, rows);
    }
    e.values.push_back({"ceiling", ceiling});
    e.values.push_back({"max_sup_ratio", sec.max_sup_ratio});
    if (!ok) e.note = "per-beta sups stay below the ceiling but their spread exceeds max_sup_ratio";
    return verdict(ok && std::isfinite(ceiling));
  }));

  checks.push_back(check("curvature.inverse-metric", "inverse metric in the adapted chart", 0.0, [&](CheckEntry& e) {
    const std::string name = sec.backgrounds.front();
    const BackgroundData bg = BackgroundData::builtin(parse_weight_kind(name), sec.dimension, sec.epsilon);
    std::vector<double> grid;
    for (double lt = -2.0; lt >= -40.0; lt -= 2.0) grid.push_back(lt);
    std::vector<std::vector<double>> rows;
    for (double beta : sec.betas) {
      const InverseMetricReport rep = inverse_metric_asymptotics(ConeAngle(beta), bg, grid);
      for (const auto& r : rep.rows)
        rows.push_back({beta, r.log_t, r.g11_times_A, r.g11_times_one_plus_A, r.offdiag_ratio});
      e.values.push_back({"offdiag_sup_b" + tag(beta), rep.offdiag_sup});
      e.values.push_back({"g11_times_A_deepest_b" + tag(beta), rep.rows.back().g11_times_A});
    }
    out.csv("inverse_metric.csv", {"beta", "log_t", "g11_times_A", "g11_times_one_plus_A", "offdiag_ratio"}, rows);
    return Status::Measured;
  }));

  return checks;
}

std::vector<CheckEntry> run_solve_disk(const RunConfig& cfg, ArtifactWriter& out) {
  const auto& sec = cfg.solve_disk;
  const SolverConfig base = solver_config(cfg);
  SolverConfig bumped = base;
  bumped.perturbation = Perturbation::bump(sec.bump_amplitude);
  std::vector<CheckEntry> checks;
  json doc;

  checks.push_back(check("AC-5", "solver recovers the closed-form conic and cusp metrics", 30.0, [&](CheckEntry& e) {
    bool ok = true;
    json runs = json::array();
    for (double beta : sec.oracle_betas) {
      const SolverState s = solve_radial_ke(beta, base);
      const double err = max_relative_error(s);
      SolverConfig plain = base;
      plain.extrapolate = false;
      const double fine = max_relative_error(solve_radial_ke(beta, plain));
      plain.grid = base.grid / 2;
      const double coarse = max_relative_error(solve_radial_ke(beta, plain));
      const double ratio = coarse / fine;
      e.values.push_back({"error_b" + tag(beta), err});
      e.values.push_back({"refinement_ratio_b" + tag(beta), ratio});
      e.values.push_back({"newton_b" + tag(beta), static_cast<double>(s.iterations)});
      ok = ok && err <= 1e-6 && ratio >= 3.2 && ratio <= 4.8 && s.iterations <= sec.max_newton_iterations;
      json r = solver_json(s);
      r["max_relative_error"] = err;
      r["unextrapolated_error"] = fine;
      r["half_grid_error"] = coarse;
      runs.push_back(r);
      out.csv("solve_disk_model_b" + tag(beta) + ".csv", kSolverColumns, solver_rows(s));
    }
    doc["model_runs"] = runs;
    return verdict(ok);
  }));

  checks.push_back(check("AC-7", "uniform equivalence under a compact perturbation", 60.0, [&](CheckEntry& e) {
    const RatioReport rr = verify_uniform_equivalence(cfg.beta_ladder, bumped);
    const RatioReport r0 = verify_uniform_equivalence(cfg.beta_ladder, base);
    double unperturbed = 0.0;
    for (const auto& row : r0.rows) {
      raise(unperturbed, std::fabs(row.ratio_min - 1.0));
      raise(unperturbed, std::fabs(row.ratio_max - 1.0));
    }
    json rows = json::array();
    for (const auto& row : rr.rows) {
      e.values.push_back({"ratio_min_b" + tag(row.beta), row.ratio_min});
      e.values.push_back({"ratio_max_b" + tag(row.beta), row.ratio_max});
      rows.push_back({{"beta", row.beta}, {"ratio_min", row.ratio_min}, {"ratio_max", row.ratio_max}});
    }
    e.values.push_back({"c_star", rr.c_star});
    e.values.push_back({"spread", rr.spread});
    e.values.push_back({"unperturbed_deviation", unperturbed});
    doc["equivalence"] = {{"c_star", rr.c_star}, {"spread", rr.spread}, {"rows", rows},
                          {"unperturbed_deviation", unperturbed}};
    return verdict(rr.spread <= sec.stability_factor && unperturbed <= 1e-6 && std::isfinite(rr.c_star));
  }));

  checks.push_back(check("AC-8", "a priori bounds stay stable along the ladder", 10.0, [&](CheckEntry& e) {
    std::vector<double> psi_floor, band, growth;
    double psi_min = kInf, c_rec = 0.0;
    json rows = json::array();
    for (double beta : cfg.beta_ladder) {
      const SolverState s = solve_radial_ke(beta, bumped);
      const AprioriReport a = verify_apriori_bounds(s);
      // Maximum principle: at an interior minimum of the relative potential u,
      // 2u >= -(F + C), and u = 0 on the boundary.
      double sup_rhs = -kInf;
      for (double x : s.metric.x) sup_rhs = std::max(sup_rhs, bumped.perturbation(x) + s.normalization);
      c_rec = std::max(c_rec, std::max(0.0, sup_rhs));
      psi_min = std::min(psi_min, a.psi_min);
      // Additive constants are compared through the multiplicative bounds they give.
      psi_floor.push_back(std::exp(a.psi_floor_constant));
      band.push_back(std::exp(2.0 * a.band_constant));
      growth.push_back(a.growth_constant);
      rows.push_back({{"beta", beta},
                      {"psi_min", a.psi_min},
                      {"psi_floor_constant", a.psi_floor_constant},
                      {"band_constant", a.band_constant},
                      {"growth_exponent", a.growth_exponent},
                      {"growth_constant", a.growth_constant},
                      {"min_is_interior", a.min_is_interior},
                      {"max_principle_d2", a.max_principle_d2},
                      {"solver", solver_json(s)}});
      out.csv("solve_disk_bump_b" + tag(beta) + ".csv", kSolverColumns, solver_rows(s));
    }
    auto spread = [](const std::vector<double>& v) {
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      return *hi / *lo;
    };
    const double s_floor = spread(psi_floor), s_band = spread(band), s_growth = spread(growth);
    e.values = {{"psi_floor_spread", s_floor},   {"band_spread", s_band},    {"growth_spread", s_growth},
                {"min_psi", psi_min},        {"c_rec", c_rec},           {"stability_factor", sec.stability_factor}};
    doc["apriori"] = {{"rows", rows}, {"c_rec", c_rec}, {"min_psi", psi_min}};
    const bool stable = s_floor <= sec.stability_factor && s_band <= sec.stability_factor &&
                        s_growth <= sec.stability_factor;
    return verdict(stable && psi_min >= -c_rec);
  }));

  out.json("solve_disk.json", doc);
  return checks;
}

std::vector<CheckEntry> run_sweep(const RunConfig& cfg, ArtifactWriter& out) {
  const auto& sec = cfg.sweep;
  std::vector<CheckEntry> checks;
  checks.push_back(check("AC-6", "conic solutions converge to the cusp solution on a compact set", 30.0,
                         [&](CheckEntry& e) {
                           const ConvergenceTable t =
                               beta_sweep_convergence(cfg.beta_ladder, sec.k_min, sec.k_max, solver_config(cfg));
                           std::vector<std::vector<double>> rows;
                           for (const auto& r : t.rows) {
                             rows.push_back({r.beta, r.c0_deviation, r.c1_deviation});
                             e.values.push_back({"c0_b" + tag(r.beta), r.c0_deviation});
                             e.values.push_back({"c1_b" + tag(r.beta), r.c1_deviation});
                           }
                           e.values.push_back({"c0_non_increasing", t.c0_non_increasing ? 1.0 : 0.0});
                           e.values.push_back({"c1_non_increasing", t.c1_non_increasing ? 1.0 : 0.0});
                           e.values.push_back({"potential_monotone_fraction", t.potential_monotone_fraction});
                           out.csv("sweep.csv", {"beta", "c0_deviation", "c1_deviation"}, rows);
                           const double last = t.rows.back().c0_deviation;
                           return verdict(last <= sec.final_tolerance && t.c0_non_increasing);
                         }));
  return checks;
}

std::vector<CheckEntry> run_energy(const RunConfig& cfg, ArtifactWriter& out) {
  const auto& sec = cfg.energy;
  QuadratureOptions quad;
  quad.step = sec.step;
  const RadialData flat = RadialData::flat();
  const RadialPotential cusp = RadialPotential::cusp_truncated();
  std::mt19937_64 rng(cfg.seed);
  std::vector<CheckEntry> checks;
  json doc;

  checks.push_back(check("AC-11", "energy functionals: closed forms, translations, continuity in beta", 20.0,
                         [&](CheckEntry& e) {
                           double l_err = 0.0;
                           for (double beta : sec.betas) {
                             const FunctionalValue l = energy_L(RadialPotential::constant(0.0), beta, flat, quad);
                             raise(l_err, std::fabs(l.value + std::log(std::numbers::pi / beta)));
                           }
                           std::uniform_real_distribution<double> shift(-5.0, 5.0);
                           std::uniform_int_distribution<std::size_t> pick(0, sec.betas.size() - 1);
                           double e_err = 0.0, t_err = 0.0;
                           for (int i = 0; i < sec.translation_samples; ++i) {
                             const double c = shift(rng);
                             const double beta = sec.betas[pick(rng)];
                             const RadialPotential moved = cusp.shifted(c);
                             raise(e_err, std::fabs(energy_E(moved, flat, quad).value - energy_E(cusp, flat, quad).value - c));
                             raise(t_err, std::fabs(energy_L(moved, beta, flat, quad).value -
                                                    energy_L(cusp, beta, flat, quad).value + c));
                           }
                           const ContinuityTable t = beta_continuity(cusp, sec.betas, flat, quad);
                           std::vector<std::vector<double>> rows;
                           for (const auto& r : t.rows) rows.push_back({r.beta, r.E, r.L, r.G, r.quad_err});
                           rows.push_back({0.0, t.limit.E, t.limit.L, t.limit.G, t.limit.quad_err});
                           out.csv("energy.csv", {"beta", "E", "L", "G", "quad_err"}, rows);
                           json table = json::array();
                           for (const auto& r : t.rows)
                             table.push_back({{"beta", r.beta}, {"G", r.G}, {"gap", r.gap}, {"diverged", r.diverged}});
                           doc["continuity"] = {{"rows", table},
                                                {"limit_G", t.limit.G},
                                                {"final_gap", t.final_gap},
                                                {"gaps_non_increasing", t.gaps_non_increasing}};
                           e.values = {{"flat_L_error", l_err},
                                       {"E_translation_error", e_err},
                                       {"L_translation_error", t_err},
                                       {"limit_G", t.limit.G},
                                       {"final_gap", t.final_gap},
                                       {"gaps_non_increasing", t.gaps_non_increasing ? 1.0 : 0.0}};
                           return verdict(l_err <= 1e-8 && e_err <= 1e-10 && t_err <= 1e-10 && !t.limit_diverged &&
                                          t.final_gap <= sec.final_gap_tolerance && t.gaps_non_increasing);
                         }));

  checks.push_back(check("energy.jensen", "Jensen slack is nonnegative", 0.0, [&](CheckEntry& e) {
    std::uniform_real_distribution<double> shift(-3.0, 3.0);
    std::uniform_int_distribution<std::size_t> pick(0, sec.betas.size() - 1);
    double worst = kInf;
    for (int i = 0; i < sec.jensen_samples; ++i) {
      const double beta = sec.betas[pick(rng)];
      const JensenReport j = jensen_check(cusp.shifted(shift(rng)), beta, flat, quad);
      worst = std::isnan(j.slack) ? j.slack : std::min(worst, j.slack);
    }
    e.values = {{"min_slack", worst}, {"samples", static_cast<double>(sec.jensen_samples)}};
    return verdict(worst >= -1e-12);
  }));

  checks.push_back(check("energy.domination", "conic model potentials dominate the cusp potential", 0.0,
                         [&](CheckEntry& e) {
                           const DominationReport d = domination_check(sec.betas);
                           e.values = {{"c_rec", d.c_rec},
                                       {"observed_max", d.observed_max},
                                       {"min_difference", d.min_difference},
                                       {"max_excess", d.max_excess}};
                           doc["domination"] = {{"c_rec", d.c_rec},
                                                {"observed_max", d.observed_max},
                                                {"min_difference", d.min_difference},
                                                {"max_excess", d.max_excess},
                                                {"points", d.points}};
                           return verdict(d.min_difference >= -1e-12 && d.max_excess <= 1e-12);
                         }));

  checks.push_back(check("energy.stationarity", "model data are critical points of G", 0.0, [&](CheckEntry& e) {
    std::vector<double> betas = sec.betas;
    betas.push_back(0.0);
    bool ok = true;
    json rows = json::array();
    for (double beta : betas) {
      const StationarityReport s = stationarity_check(beta, std::exp(-1.0), quad);
      e.values.push_back({"model_b" + tag(beta), s.max_model_derivative});
      e.values.push_back({"control_b" + tag(beta), s.min_control_derivative});
      rows.push_back({{"beta", beta},
                      {"max_model_derivative", s.max_model_derivative},
                      {"min_control_derivative", s.min_control_derivative}});
      ok = ok && s.max_model_derivative <= 1e-6;
      if (!std::isnan(s.min_control_derivative)) ok = ok && s.min_control_derivative > 1e-3;
    }
    doc["stationarity"] = rows;
    return verdict(ok);
  }));

  out.json("energy.json", doc);
  return checks;
}

std::vector<CheckEntry> run_rescale(const RunConfig& cfg, ArtifactWriter& out) {
  const auto& sec = cfg.rescale;
  std::vector<CheckEntry> checks;
  json doc;

  checks.push_back(check("AC-9", "rescaled models converge to the cylindrical limit", 5.0, [&](CheckEntry& e) {
    const CompactConvergence cc = convergence_on_compact(sec.betas);
    const double lim = limit_coefficient();
    double unit_err = 0.0;
    std::vector<std::vector<double>> rows;
    for (double beta : sec.betas) {
      CVector w = CVector::Zero(2);
      w(0) = 1.0;
      raise(unit_err, std::fabs(pullback_rescaled_model(w, ConeAngle(beta))(0, 0).real() - lim));
      for (int i = 0; i <= 40; ++i) {
        const double r = 0.5 * std::pow(4.0, i / 40.0);
        w(0) = r;
        const double coeff = pullback_rescaled_model(w, ConeAngle(beta))(0, 0).real() * r * r;
        rows.push_back({beta, r, coeff, lim, std::fabs(coeff - lim)});
      }
    }
    out.csv("rescale.csv", {"beta", "w1_modulus", "coeff", "limit_coeff", "deviation"}, rows);
    json table = json::array();
    for (const auto& r : cc.rows) {
      e.values.push_back({"deviation_b" + tag(r.beta), r.deviation});
      table.push_back({{"beta", r.beta}, {"deviation", r.deviation}});
    }
    e.values.push_back({"slope", cc.slope});
    e.values.push_back({"c_fit", cc.c_fit});
    e.values.push_back({"unit_circle_error", unit_err});
    doc["compact"] = {{"rows", table}, {"slope", cc.slope}, {"intercept", cc.intercept}, {"c_fit", cc.c_fit}};
    return verdict(cc.slope >= 0.8 && cc.slope <= 1.2 && unit_err <= 1e-14);
  }));

  checks.push_back(check("rescale.expansion", "expansion coefficients of the rescaled potential", 0.0,
                         [&](CheckEntry& e) {
                           std::vector<double> ladder;
                           for (int i = 0; i < sec.expansion_points; ++i)
                             ladder.push_back(sec.expansion_beta_max *
                                              std::pow(sec.expansion_beta_min / sec.expansion_beta_max,
                                                       static_cast<double>(i) / (sec.expansion_points - 1)));
                           const int degree = std::min(8, sec.expansion_points - 1);
                           const ExpansionReport r = expansion_check(ladder, sec.log_moduli, degree);
                           e.values = {{"constant_fit", r.constant_fit},
                                       {"constant_expected", r.constant_expected},
                                       {"linear_fit", r.linear_fit},
                                       {"linear_expected", r.linear_expected},
                                       {"linear_printed", r.linear_printed},
                                       {"quadratic_fit", r.quadratic_fit},
                                       {"ddc_coefficient", r.ddc_coefficient},
                                       {"ddc_error", r.ddc_error},
                                       {"constant_fit_squared_log", r.constant_fit_squared_log},
                                       {"linear_fit_squared_log", r.linear_fit_squared_log}};
                           doc["expansion"] = {{"betas", r.betas},
                                               {"log_moduli", r.log_moduli},
                                               {"constant_fit", r.constant_fit},
                                               {"constant_expected", r.constant_expected},
                                               {"linear_fit", r.linear_fit},
                                               {"linear_candidates", {r.linear_expected, r.linear_printed}},
                                               {"quadratic_fit", r.quadratic_fit},
                                               {"ddc_coefficient", r.ddc_coefficient},
                                               {"ddc_error", r.ddc_error},
                                               {"max_constant_error", r.max_constant_error},
                                               {"max_linear_error", r.max_linear_error}};
                           return Status::Measured;
                         }));

  checks.push_back(check("rescale.chain-rule", "pulled-back model against a numerical complex Hessian", 0.0,
                         [&](CheckEntry& e) {
                           std::mt19937_64 rng(cfg.seed);
                           std::uniform_real_distribution<double> unit(0.0, 1.0);
                           std::uniform_int_distribution<std::size_t> pick(0, sec.betas.size() - 1);
                           double worst = 0.0;
                           for (int i = 0; i < sec.chain_samples; ++i) {
                             const double beta = sec.betas[pick(rng)];
                             CVector w(2);
                             w(0) = std::polar(0.5 * std::pow(4.0, unit(rng)), 2.0 * std::numbers::pi * unit(rng));
                             w(1) = std::polar(unit(rng), 2.0 * std::numbers::pi * unit(rng));
                             const CMatrix a = pullback_rescaled_model(w, ConeAngle(beta));
                             const CMatrix b = pullback_chain_rule(w, ConeAngle(beta));
                             raise(worst, (a - b).cwiseAbs().maxCoeff());
                           }
                           e.values = {{"max_difference", worst}};
                           return verdict(worst <= 1e-7);
                         }));

  out.json("rescale.json", doc);
  return checks;
}

namespace {

CMatrix random_positive_definite(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  return g * g.adjoint() + 0.1 * CMatrix::Identity(n, n);
}

CMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  return Eigen::HouseholderQR<CMatrix>(g).householderQ() * CMatrix::Identity(n, n);
}

json matrix_json(const CMatrix& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back({a(i, j).real(), a(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::vector<CheckEntry> run_cylinder(const RunConfig& cfg, ArtifactWriter& out) {
  const auto& sec = cfg.cylinder;
  std::vector<CheckEntry> checks;
  json doc;
  CMatrix first;

  checks.push_back(check("AC-10", "normal form and invariants of cylindrical metrics", 5.0, [&](CheckEntry& e) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> dim(sec.min_dimension, sec.max_dimension);
    std::bernoulli_distribution flip(0.5);
    double min_margin = kInf, inv_err = 0.0, rec_err = 0.0, witness = 0.0;
    json records = json::array();
    for (int m = 0; m < sec.count; ++m) {
      const int n = dim(rng);
      const CMatrix a = random_positive_definite(n, rng);
      if (m == 0) first = a;
      const NormalFormResult nf = cylinder_normal_form(a);
      const IsometryInvariants inv = isometry_invariants(a);
      const double scale = std::max(1.0, nf.form.a);
      min_margin = std::min(min_margin, (nf.form.a - nf.form.b * nf.form.b) / scale);

      const CMatrix t = allowed_isometry(flip(rng) ? -1 : 1, random_unitary(n - 1, rng));
      const CMatrix moved = t.adjoint() * a * t;
      const IsometryInvariants inv2 = isometry_invariants(moved);
      raise(inv_err, std::fabs(inv2.trace - inv.trace) / std::max(1.0, std::fabs(inv.trace)));
      raise(inv_err, std::fabs(inv2.determinant - inv.determinant) / scale);
      raise(witness, isometry_witness(a, moved).residual / std::max(1.0, a.cwiseAbs().maxCoeff()));

      const CylinderNormalForm back = invariants_to_normal_form(inv.trace, inv.determinant, n);
      raise(rec_err, std::fabs(back.a - nf.form.a) / scale);
      raise(rec_err, std::fabs(back.b - nf.form.b) / std::max(1.0, nf.form.b));

      if (m < sec.records) {
        records.push_back({{"matrix", matrix_json(a)},
                           {"a", nf.form.a},
                           {"b", nf.form.b},
                           {"invariants", {{"trace", inv.trace}, {"determinant", inv.determinant}}}});
      }
    }
    doc["records"] = records;
    e.values = {{"min_relative_margin", min_margin},
                {"max_invariant_error", inv_err},
                {"max_recovery_error", rec_err},
                {"max_witness_residual", witness},
                {"count", static_cast<double>(sec.count)}};
    doc["summary"] = {{"count", sec.count},
                      {"min_relative_margin", min_margin},
                      {"max_invariant_error", inv_err},
                      {"max_recovery_error", rec_err},
                      {"max_witness_residual", witness}};
    return verdict(min_margin > 0.0 && inv_err <= 1e-10 && rec_err <= 1e-12);
  }));

  checks.push_back(check("cylinder.ricci", "cylindrical metrics are Ricci-flat", 0.0, [&](CheckEntry& e) {
    const CylindricalMetric metric(first.size() ? first : CMatrix(CMatrix::Identity(2, 2)));
    const RicciFlatReport flat = ricci_flat_check(metric, 50, cfg.seed);
    const RicciFlatReport control =
        ricci_flat_check(radially_deformed_field(metric, 0.5), metric.dimension(), 50, cfg.seed);
    e.values = {{"max_log_det_derivative", flat.max_log_det_derivative},
                {"max_coefficient_variation", flat.max_coefficient_variation},
                {"control_log_det_derivative", control.max_log_det_derivative}};
    doc["ricci"] = {{"flat", flat.flat}, {"control_flat", control.flat}};
    return verdict(flat.flat && !control.flat);
  }));

  out.json("cylinder.json", doc);
  return checks;
}

SuiteReport run(const RunConfig& cfg) {
  cfg.validate();
  ArtifactWriter out(cfg.out_dir);
  SuiteReport rep;
  rep.suite = to_string(cfg.subcommand);
  rep.seed = cfg.seed;
  const auto start = Clock::now();

  using SuiteFn = std::vector<CheckEntry> (*)(const RunConfig&, ArtifactWriter&);
  auto suite_fn = [](Subcommand s) -> SuiteFn {
    switch (s) {
      case Subcommand::SpecialFn:
        return run_special_fn;
      case Subcommand::Curvature:
        return run_curvature;
      case Subcommand::SolveDisk:
        return run_solve_disk;
      case Subcommand::Sweep:
        return run_sweep;
      case Subcommand::Energy:
        return run_energy;
      case Subcommand::Rescale:
        return run_rescale;
      case Subcommand::Cylinder:
        return run_cylinder;
      case Subcommand::All:
        break;
    }
    return nullptr;
  };
  auto append = [&](std::vector<CheckEntry> v) {
    for (auto& c : v) rep.checks.push_back(std::move(c));
  };

  if (cfg.subcommand == Subcommand::All) {
    for (Subcommand s : suite_order()) append(suite_fn(s)(cfg, out));
    const double total = seconds_since(start);
    int failures = 0;
    for (const auto& c : rep.checks) failures += c.status == Status::Fail ? 1 : 0;
    CheckEntry full;
    full.id = "AC-12";
    full.title = "full suite completes in time with every hard check passing";
    full.time_limit = kFullSuiteSeconds;
    full.seconds = total;
    full.values = {{"hard_failures", static_cast<double>(failures)}};
    full.status = verdict(failures == 0 && total < kFullSuiteSeconds);
    if (total >= kFullSuiteSeconds) full.note = "runtime over limit";
    rep.checks.push_back(std::move(full));
  } else {
    append(suite_fn(cfg.subcommand)(cfg, out));
  }

  std::stable_sort(rep.checks.begin(), rep.checks.end(), [](const CheckEntry& a, const CheckEntry& b) {
    auto key = [](const std::string& id) {
      return id.rfind("AC-", 0) == 0 ? std::stoi(id.substr(3)) : 1000;
    };
    return key(a.id) < key(b.id);
  });
  rep.seconds = seconds_since(start);
  rep.artifacts = out.written();
  rep.artifacts.push_back("summary.json");
  rep.artifacts.push_back("timings.json");
  out.json("summary.json", summary_json(rep));
  out.json("timings.json", timings_json(rep));
  return rep;
}

}  // namespace kelab::harness
