#pragma once

#include <functional>
#include <string>
#include <vector>

namespace kelab {

// Radial functions on the punctured unit disk are written in the variable
// s = log(-log t), t = |z|^2. s -> +inf is the puncture, s -> -inf the unit
// circle. Area: dA = pi dt = pi t e^s ds.

enum class Regularity { Bounded, CuspType };

class RadialPotential {
 public:
  using Profile = std::function<double(double s)>;

  // kinks: values of s where the profile is not smooth; the quadrature grid is
  // anchored on the first one.
  RadialPotential(Profile profile, Regularity regularity, std::vector<double> kinks = {}, std::string name = "phi");

  double operator()(double s) const { return profile_(s); }
  double at_log_t(double log_t) const;
  Regularity regularity() const noexcept { return regularity_; }
  const std::vector<double>& kinks() const noexcept { return kinks_; }
  const std::string& name() const noexcept { return name_; }

  RadialPotential shifted(double c) const;

  static RadialPotential constant(double c);
  // -2 log(-log t) for t <= exp(-2), constant -2 log 2 on exp(-2) < t < 1.
  static RadialPotential cusp_truncated();

 private:
  Profile profile_;
  Regularity regularity_;
  std::vector<double> kinks_;
  std::string name_;
};

// Reference area density rho (omega = rho dA) and the smooth part h + C of the
// weight e^{h+C} dA / t^{1-beta} entering L, both as functions of log t.
struct RadialData {
  std::function<double(double log_t)> log_density;
  std::function<double(double log_t)> log_weight;
  std::string name;

  // rho = 1, h + C = 0.
  static RadialData flat();
  // The model metric pulled back by z -> kappa z (kappa in (0, 1)), with the
  // weight chosen so that phi = 0 solves the equation; beta = 0 is the cusp.
  static RadialData model_on_disk(double beta, double kappa);
};

struct QuadratureOptions {
  double step = 1e-3;
  double s_min = -37.0;
  double s_max = 37.0;
  // Relative size of the integral over the outermost unit of s on either end
  // above which the integral is declared divergent.
  double tail_tolerance = 1e-9;

  void validate() const;
};

struct FunctionalValue {
  double value;
  double error_estimate;  // |I_h - I_2h| / 3
  bool diverged;
};

// Total reference mass int rho dA.
FunctionalValue reference_volume(const RadialData& data, const QuadratureOptions& opts = {});

// E(phi) = (1/2V) [int phi omega + int phi (omega + dd^c phi)], where the
// Dirichlet part int phi dd^c phi is assembled by summation by parts.
FunctionalValue energy_E(const RadialPotential& phi, const RadialData& data, const QuadratureOptions& opts = {});

// L(phi) = -log int e^{phi + h + C} dA / t^{1 - beta}; beta = 0 is allowed.
FunctionalValue energy_L(const RadialPotential& phi, double beta, const RadialData& data,
                         const QuadratureOptions& opts = {});

struct EnergyReport {
  double beta;
  double E;
  double L;
  double G;  // E + L
  double volume;
  double E_error;
  double L_error;
  bool diverged;
};

EnergyReport evaluate_functionals(const RadialPotential& phi, double beta, const RadialData& data,
                                  const QuadratureOptions& opts = {});

// The two normalizations of a potential: sup phi = 0 on the quadrature grid, and
// L(phi) = -log V (unit normalized weight mass).
RadialPotential normalize_sup(const RadialPotential& phi, const QuadratureOptions& opts = {});
RadialPotential normalize_mass(const RadialPotential& phi, double beta, const RadialData& data,
                               const QuadratureOptions& opts = {});

// Jensen slack log int w dmu - int log w dmu for the probability measure
// mu = omega / V and w the density of e^{phi + h + C} dA / t^{1-beta} against it.
struct JensenReport {
  double beta;
  double log_mean;
  double mean_log;
  double slack;
};

JensenReport jensen_check(const RadialPotential& phi, double beta, const RadialData& data,
                          const QuadratureOptions& opts = {});

// psi_beta = -2 log((1 - t^beta)/beta) against psi_0 = -2 log(-log t) on t <= e^-1.
struct DominationReport {
  double c_rec;            // max over the ladder of 2 log(beta / (1 - e^-beta))
  double observed_max;     // max of psi_beta over grid and ladder
  double min_difference;   // min of psi_beta - psi_0 (>= 0 expected)
  double max_excess;       // max of |psi_beta - psi_0| - (c_rec - psi_0) (<= 0 expected)
  int points;              // grid points summed over the ladder
};

DominationReport domination_check(const std::vector<double>& betas, int points = 10000);

struct ContinuityRow {
  double beta;
  double E;
  double L;
  double G;
  double quad_err;
  bool diverged;
  double gap;  // |G_beta - G_0|
};

struct ContinuityTable {
  std::vector<ContinuityRow> rows;
  ContinuityRow limit;  // beta = 0
  bool limit_diverged;
  double final_gap;
  bool gaps_non_increasing;
  DominationReport domination;
};

ContinuityTable beta_continuity(const RadialPotential& phi, const std::vector<double>& betas, const RadialData& data,
                                const QuadratureOptions& opts = {});

// First variation of G at phi = 0 on model data, in the directions of compactly
// supported bumps in s; on the reference data it vanishes, on flat data it does
// not (control).
struct StationarityReport {
  double beta;
  double max_model_derivative;   // relative to int |v| dmu
  double min_control_derivative;  // NaN when the flat control diverges (beta = 0) or is trivial (beta = 1)
};

StationarityReport stationarity_check(double beta, double kappa, const QuadratureOptions& opts = {});

}  // namespace kelab
