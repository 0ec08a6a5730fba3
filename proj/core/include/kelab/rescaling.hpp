#pragma once

#include <vector>

#include "kelab/cone_angle.hpp"
#include "kelab/linalg.hpp"

namespace kelab {

// w -> (e^{-1/beta} w1, beta w2, ..., beta wn), from the polydisk
// |w1| <= e^{1/(2 beta)}, |wk| <= 1/beta onto |z1| <= e^{-1/(2 beta)}, |zk| <= 1.
class RescalingMap {
 public:
  explicit RescalingMap(ConeAngle beta);

  double beta() const noexcept { return beta_; }
  double source_w1_radius() const noexcept;   // e^{1/(2 beta)}
  double target_z1_radius() const noexcept;   // e^{-1/(2 beta)}

  bool in_source(const CVector& w) const;
  bool in_target(const CVector& z) const;

  CVector apply(const CVector& w) const;    // throws DomainError outside the source
  CVector inverse(const CVector& z) const;  // throws DomainError outside the target

 private:
  double beta_;
};

// Coefficient matrix of the pullback of beta^-2 times the model metric
// (conic in z1, flat in the other variables): diagonal with first entry
// e^-2 |w1|^{2 beta} / ((1 - e^-2 |w1|^{2 beta})^2 |w1|^2).
CMatrix pullback_rescaled_model(const CVector& w, ConeAngle beta);

// The same matrix from a complex Hessian of rescaled_potential by finite
// differences in real coordinates (fourth order).
CMatrix pullback_chain_rule(const CVector& w, ConeAngle beta, double step = 2e-3);

// Pullback of beta^-2 times the model potential:
//   -beta^-2 log(1 - e^-2 |w1|^{2 beta}) + beta^-2 log beta + sum_k |wk|^2.
double rescaled_potential(const CVector& w, ConeAngle beta);

// Same potential minus its value at |w1| = 1, w' = 0 (computed without the
// large cancelling constant).
double rescaled_potential_centered(const CVector& w, ConeAngle beta);

// e^-2 / (1 - e^-2)^2, coefficient of i dw1 ^ dw1-bar / |w1|^2 in the limit.
double limit_coefficient();

struct CompactDeviationRow {
  double beta;
  double deviation;  // sup over 1/2 <= |w1| <= 2 of |coeff |w1|^2 - limit|
};

struct CompactConvergence {
  std::vector<CompactDeviationRow> rows;
  double slope;      // least-squares slope of log deviation against log beta
  double intercept;
  double c_fit;      // max deviation / beta
};

CompactConvergence convergence_on_compact(const std::vector<double>& betas, int radial_samples = 2001);

// Polynomial fit in beta of beta^2 (P_beta(w) - beta^-2 log beta) at fixed
// w1 = e^{ell/2}; its coefficients are the constant, the beta^-1 log|w1|^2 and
// the log^2|w1|^2 terms of the expansion of P.
struct ExpansionReport {
  std::vector<double> betas;
  std::vector<double> log_moduli;   // ell = log |w1|^2 sampled
  double constant_fit;              // beta^-2 level constant
  double constant_expected;         // -log(1 - e^-2)
  double linear_fit;                // coefficient of beta^-1 ell
  double linear_expected;           // e^-2 / (1 - e^-2)
  double linear_printed;            // e^2 / (1 - e^-2)
  double quadratic_fit;             // coefficient of ell^2
  double ddc_coefficient;           // dd^c of quadratic_fit ell^2, per dw1 ^ dw1-bar / |w1|^2
  double ddc_error;                 // against limit_coefficient()
  double max_constant_error;
  double max_linear_error;
  // Values in the squared-log normalization, where potentials carry log(.)^2.
  double constant_fit_squared_log;
  double linear_fit_squared_log;
};

ExpansionReport expansion_check(const std::vector<double>& betas, const std::vector<double>& log_moduli,
                                int degree = 8);

}  // namespace kelab
