#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "kelab/disk_solver.hpp"
#include "kelab/errors.hpp"
#include "kelab/metric_models.hpp"

using namespace kelab;

namespace {

using State = std::array<double, 2>;

// Shooting solution of v'' = 8 exp(v + F + C) with the model boundary values,
// evaluated at the requested x (increasing, inside the annulus).
std::vector<double> shooting_log_lambda(double beta, const SolverConfig& cfg, double c, const std::vector<double>& xs) {
  namespace odeint = boost::numeric::odeint;
  const double x0 = std::log(cfg.r_min), x1 = std::log(cfg.r_max);
  const double va = model_log_lambda(beta, x0) + 2 * x0;
  const double vb = model_log_lambda(beta, x1) + 2 * x1;
  auto rhs = [&](const State& y, State& dy, double x) {
    dy[0] = y[1];
    // Capped so that overshooting slopes stay finite; the solution never gets near the cap.
    dy[1] = 8.0 * std::exp(std::min(y[0] + cfg.perturbation(x) + c, 30.0));
  };
  auto shoot = [&](double slope, const std::vector<double>& stops) {
    State y{va, slope};
    double x = x0;
    std::vector<double> out;
    for (double target : stops) {
      odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(1e-13, 1e-13), rhs, y, x,
                                 target, 1e-4);
      x = target;
      out.push_back(y[0]);
    }
    return out;
  };
  // The endpoint value increases with the initial slope; bisect on it, treating
  // blow-up before x1 as overshooting.
  auto miss = [&](double slope) {
    const double end = shoot(slope, {x1}).back();
    return std::isfinite(end) ? end - vb : INFINITY;
  };
  const double h = 1e-6;
  const double guess = (model_log_lambda(beta, x0 + h) - model_log_lambda(beta, x0 - h)) / (2 * h) + 2.0;
  double lo = guess - 0.5, hi = guess + 0.5;
  while (miss(lo) > 0) lo -= 2 * (hi - lo);
  while (miss(hi) < 0) hi += 2 * (hi - lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::fabs(hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (miss(mid) < 0 ? lo : hi) = mid;
  }
  const double s1 = 0.5 * (lo + hi);
  std::vector<double> v = shoot(s1, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) v[i] -= 2 * xs[i];
  return v;
}

}  // namespace

TEST(DiskSolver, RecoversClosedFormModels) {
  const SolverConfig cfg;
  for (double beta : {0.5, 0.1, 0.01, 0.0}) {
    const SolverState s = solve_radial_ke(beta, cfg);
    EXPECT_LE(max_relative_error(s), 1e-6) << beta;
    EXPECT_LE(s.iterations, 8) << beta;
    EXPECT_EQ(s.metric.x.size(), static_cast<std::size_t>(cfg.grid + 1));
  }
}

TEST(DiskSolver, SecondOrderRefinement) {
  SolverConfig cfg;
  cfg.extrapolate = false;
  for (double beta : {0.5, 0.0}) {
    cfg.grid = 1024;
    const double coarse = max_relative_error(solve_radial_ke(beta, cfg));
    cfg.grid = 2048;
    const double fine = max_relative_error(solve_radial_ke(beta, cfg));
    EXPECT_GT(coarse / fine, 3.8) << beta;
    EXPECT_LT(coarse / fine, 4.2) << beta;
  }
  SolverConfig base;
  // The worst residual sits next to r_max, where the model has a log singularity
  // at distance |log r_max|; the ratio is asymptotic only once h << |log r_max|.
  const double r1 = model_discrete_residual(0.3, base, 2048);
  const double r2 = model_discrete_residual(0.3, base, 4096);
  EXPECT_NEAR(r1 / r2, 4.0, 0.15);
}

TEST(DiskSolver, ExtrapolationImprovesAccuracy) {
  SolverConfig cfg;
  cfg.grid = 512;
  const double with = max_relative_error(solve_radial_ke(0.25, cfg));
  cfg.extrapolate = false;
  const double without = max_relative_error(solve_radial_ke(0.25, cfg));
  EXPECT_LT(with, 0.01 * without);
}

TEST(DiskSolver, PerturbedSolutionMatchesShooting) {
  SolverConfig cfg;
  cfg.perturbation = Perturbation::bump(1.0);
  for (double beta : {0.5, 0.05, 0.0}) {
    const SolverState s = solve_radial_ke(beta, cfg);
    std::vector<std::size_t> nodes;
    std::vector<double> xs;
    for (std::size_t i = 200; i < s.metric.x.size() - 200; i += 600) {
      nodes.push_back(i);
      xs.push_back(s.metric.x[i]);
    }
    const std::vector<double> oracle = shooting_log_lambda(beta, cfg, s.normalization, xs);
    for (std::size_t k = 0; k < nodes.size(); ++k)
      EXPECT_NEAR(std::log(s.metric.lambda[nodes[k]]), oracle[k], 1e-8) << beta << " " << xs[k];
  }
}

TEST(DiskSolver, CustomBoundaryData) {
  SolverConfig cfg;
  cfg.boundary = BoundarySource::Custom;
  cfg.custom_log_lambda_min = model_log_lambda(0.2, std::log(cfg.r_min));
  cfg.custom_log_lambda_max = model_log_lambda(0.2, std::log(cfg.r_max));
  EXPECT_LE(max_relative_error(solve_radial_ke(0.2, cfg)), 1e-6);
  cfg.custom_log_lambda_max += 0.1;
  const SolverState s = solve_radial_ke(0.2, cfg);
  EXPECT_NEAR(std::log(s.metric.lambda.back()), cfg.custom_log_lambda_max, 1e-12);
}

TEST(DiskSolver, InvalidConfigurations) {
  SolverConfig cfg;
  cfg.grid = 32;
  EXPECT_THROW(solve_radial_ke(0.5, cfg), DomainError);
  cfg = SolverConfig{};
  cfg.r_min = 0.95;
  EXPECT_THROW(solve_radial_ke(0.5, cfg), DomainError);
  cfg = SolverConfig{};
  cfg.r_max = 1.0;
  EXPECT_THROW(solve_radial_ke(0.5, cfg), DomainError);
  EXPECT_THROW(solve_radial_ke(1.5, SolverConfig{}), DomainError);
}

TEST(DiskSolver, NewtonBudgetExhaustedThrows) {
  SolverConfig cfg;
  cfg.perturbation = Perturbation::bump(3.0);
  cfg.max_iterations = 1;
  cfg.tolerance = 1e-14;
  try {
    solve_radial_ke(0.3, cfg);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_FALSE(e.residual_history().empty());
  }
}

TEST(DiskSolver, BumpPerturbation) {
  const Perturbation p = Perturbation::bump(0.7);
  EXPECT_NEAR(p(p.center), 0.7, 1e-15);
  EXPECT_EQ(p(p.center + p.half_width), 0.0);
  EXPECT_EQ(p(p.center - 2 * p.half_width), 0.0);
  EXPECT_GT(p(p.center + 0.5 * p.half_width), 0.0);
  EXPECT_TRUE(p.active());
  EXPECT_FALSE(Perturbation{}.active());
}

TEST(DiskSolver, ConstantShiftOnlyChangesNormalization) {
  SolverConfig cfg;
  cfg.perturbation.shift = 0.4;
  const SolverState s = solve_radial_ke(0.3, cfg);
  EXPECT_NEAR(s.normalization, -0.4, 1e-12);
  EXPECT_LE(max_relative_error(s), 1e-6);
}

TEST(DiskSolver, ConvergenceTableShape) {
  const ConvergenceTable t = beta_sweep_convergence({0.5, 0.1, 0.01}, 0.25, 0.75, SolverConfig{});
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_TRUE(t.c0_non_increasing);
  EXPECT_TRUE(t.c1_non_increasing);
  EXPECT_LT(t.rows.back().c0_deviation, 1e-3);
}

TEST(DiskSolver, UnperturbedRatiosAreOne) {
  const RatioReport r = verify_uniform_equivalence({0.5, 0.1, 0.0}, SolverConfig{});
  EXPECT_NEAR(r.c_star, 1.0, 1e-6);
  EXPECT_NEAR(r.spread, 1.0, 1e-6);
}

TEST(DiskSolver, AprioriBoundsOnModel) {
  const SolverState s = solve_radial_ke(0.2, SolverConfig{});
  const AprioriReport a = verify_apriori_bounds(s);
  EXPECT_LE(a.band_constant, 1e-9);
  // psi = psi_beta - psi_0 >= 0 when u = 0.
  EXPECT_GE(a.psi_min, -1e-9);
  EXPECT_EQ(a.psi_floor_constant, 0.0);
  EXPECT_EQ(comparison_potential(s).size(), s.metric.x.size());
}
