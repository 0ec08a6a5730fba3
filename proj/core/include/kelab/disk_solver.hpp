#pragma once

#include <vector>

namespace kelab {

// Rotation-invariant metric lambda(x) i dz ^ dz-bar on an annulus, x = log r.
struct RadialMetric {
  std::vector<double> x;
  std::vector<double> lambda;

  void validate() const;  // strictly increasing grid, lambda > 0
};

// Compact bump exp(1 - 1/(1 - s^2)), s = (x - center)/half_width, scaled by
// amplitude; sup |F| = |amplitude|. shift adds a constant everywhere.
struct Perturbation {
  double amplitude = 0.0;
  double center = -1.2;
  double half_width = 0.8;
  double shift = 0.0;

  bool active() const noexcept { return amplitude != 0.0 || shift != 0.0; }
  double operator()(double x) const;
  static Perturbation bump(double amplitude = 1.0) { return {amplitude, -1.2, 0.8, 0.0}; }
};

enum class BoundarySource { Model, Custom };

struct SolverConfig {
  double r_min = 0.05;
  double r_max = 0.9;
  int grid = 4096;  // number of intervals
  double tolerance = 1e-10;
  int max_iterations = 30;
  BoundarySource boundary = BoundarySource::Model;
  // log lambda at r_min and r_max when boundary == Custom.
  double custom_log_lambda_min = 0.0;
  double custom_log_lambda_max = 0.0;
  Perturbation perturbation;
  // Pick the additive constant of the right-hand side so that the perturbed
  // density has the model mass on the annulus.
  bool normalize = true;
  // Combine the solutions on N and 2N intervals (Richardson) to cancel the
  // leading h^2 error term.
  bool extrapolate = true;

  void validate() const;
};

// The Kahler-Einstein condition d dbar log lambda = 2 exp(G) lambda (Gaussian
// curvature -4 exp(G)) is solved for v = log(r^2 lambda) = log lambda + 2x:
//   v'' = 8 exp(v + G(x)),  G = F + C.
// beta > 0 selects the conic model for boundary data and comparison, beta = 0
// the cusp model.
struct SolverState {
  double beta;
  RadialMetric metric;
  std::vector<double> lambda_model;
  // 1/2 log(lambda / lambda_model); satisfies lambda_model + d dbar u = exp(G) lambda.
  std::vector<double> relative_potential;
  std::vector<double> residual_history;  // relative residual per Newton step on N
  std::vector<double> fine_residual_history;
  int iterations;
  double normalization;  // C
  double final_residual;
};

SolverState solve_radial_ke(double beta, const SolverConfig& cfg);

// log lambda of the model (conic or cusp) at x = log r.
double model_log_lambda(double beta, double x);

// sup_i |D2 v_model - 8 exp(v_model)| on the uniform grid with `grid` intervals.
double model_discrete_residual(double beta, const SolverConfig& cfg, int grid);

// Maximum relative error |lambda / lambda_model - 1| on the grid.
double max_relative_error(const SolverState& s);

struct ConvergenceRow {
  double beta;
  double c0_deviation;  // sup_K |lambda_beta / lambda_0 - 1|
  double c1_deviation;  // sup_K |d_x log lambda_beta - d_x log lambda_0|
};

struct ConvergenceTable {
  double k_min;
  double k_max;
  std::vector<ConvergenceRow> rows;
  bool c0_non_increasing;
  bool c1_non_increasing;
  // Fraction of K-grid points where phi_beta + beta log t increased from one
  // ladder entry to the next (measured only).
  double potential_monotone_fraction;
};

ConvergenceTable beta_sweep_convergence(const std::vector<double>& betas, double k_min, double k_max,
                                        const SolverConfig& cfg);

struct RatioRow {
  double beta;
  double ratio_min;
  double ratio_max;
};

struct RatioReport {
  std::vector<RatioRow> rows;
  double c_star;   // all ratios in [1/c_star, c_star]
  double spread;   // max over beta of ratio_max / min over beta of ratio_max
};

RatioReport verify_uniform_equivalence(const std::vector<double>& betas, const SolverConfig& cfg);

struct AprioriReport {
  double beta;
  // psi = model potential + log(lambda / lambda_model) + log log^2 t, squared-log normalization.
  double psi_min;
  double psi_floor_constant;     // max(0, -psi_min)
  double max_principle_d2;   // discrete second difference of psi at its minimum
  bool min_is_interior;
  double potential_min;      // relative potential band
  double potential_max;
  double band_constant;      // max |relative potential|
  double growth_exponent;    // smallest A with lambda t (-log t)^-A <= 1 on t <= exp(-2)
  double growth_constant;    // sup over t <= exp(-1) of lambda t (-log t)^-A
};

AprioriReport verify_apriori_bounds(const SolverState& s);

// psi at each grid point of a state.
std::vector<double> comparison_potential(const SolverState& s);

}  // namespace kelab
