#pragma once

#include <cmath>
#include <vector>

#include "kelab/cone_angle.hpp"

namespace kelab {

// Log-space kernels shared by the public evaluators, the metric assembly and the
// curvature code. Real may be double, long double or a hyper-dual scalar. All
// functions take log t; 1 - t^beta is always formed as -expm1(beta log t).
namespace sf {

template <class Real>
Real one_minus_tpow(const Real& log_t, double beta) {
  using std::expm1;
  return -expm1(Real(beta) * log_t);
}

// log A(t), A(t) = beta^2 t^(beta-1) (1 - t^beta)^-2
template <class Real>
Real log_A(const Real& log_t, double beta) {
  using std::log;
  const Real b(beta);
  return Real(2) * log(b) + (b - Real(1)) * log_t - Real(2) * log(one_minus_tpow(log_t, beta));
}

template <class Real>
Real A(const Real& log_t, double beta) {
  using std::exp;
  return exp(log_A(log_t, beta));
}

// B(t) = beta t^beta / (1 - t^beta)
template <class Real>
Real B(const Real& log_t, double beta) {
  using std::exp;
  const Real b(beta);
  return b * exp(b * log_t) / one_minus_tpow(log_t, beta);
}

// A'(t) = beta^2 t^(beta-2) (1-u)^-3 [(beta-1) + (beta+1) u],  u = t^beta
template <class Real>
Real A_prime(const Real& log_t, double beta) {
  using std::exp;
  using std::log;
  const Real b(beta);
  const Real u = exp(b * log_t);
  const Real w = one_minus_tpow(log_t, beta);
  const Real scale = exp(Real(2) * log(b) + (b - Real(2)) * log_t - Real(3) * log(w));
  return scale * ((b - Real(1)) + (b + Real(1)) * u);
}

// A''(t) = beta^2 t^(beta-3) (1-u)^-4 [(b-1)(b-2) + 4(b^2-1) u + (b^2+3b+2) u^2]
template <class Real>
Real A_second(const Real& log_t, double beta) {
  using std::exp;
  using std::log;
  const Real b(beta);
  const Real u = exp(b * log_t);
  const Real w = one_minus_tpow(log_t, beta);
  const Real scale = exp(Real(2) * log(b) + (b - Real(3)) * log_t - Real(4) * log(w));
  const Real c0 = (b - Real(1)) * (b - Real(2));
  const Real c1 = Real(4) * (b * b - Real(1));
  const Real c2 = b * b + Real(3) * b + Real(2);
  return scale * (c0 + (c1 + c2 * u) * u);
}

// (1 - t^beta) / beta, defined for every t > 0.
template <class Real>
Real one_minus_tbeta_over_beta(const Real& log_t, double beta) {
  return one_minus_tpow(log_t, beta) / Real(beta);
}

// -(t A'' + A') + t A'^2 / A + 2 A^2, which vanishes identically.
template <class Real>
Real cancellation_residual(const Real& log_t, double beta) {
  using std::exp;
  const Real t = exp(log_t);
  const Real a = A(log_t, beta);
  const Real a1 = A_prime(log_t, beta);
  const Real a2 = A_second(log_t, beta);
  return -(t * a2 + a1) + t * a1 * a1 / a + Real(2) * a * a;
}

}  // namespace sf

struct ADerivatives {
  double first;
  double second;
};

double eval_A(RadialParam t, ConeAngle beta);
double eval_B(RadialParam t, ConeAngle beta);
ADerivatives eval_A_derivs(RadialParam t, ConeAngle beta);
double one_minus_tbeta_over_beta(RadialParam t, ConeAngle beta);
// Same quantity for any t > 0 given through log t (t = 1 gives 0).
double one_minus_tbeta_over_beta_log(double log_t, ConeAngle beta);

// Relative residual |cancellation_residual| / (2 A^2), evaluated in extended
// precision: the leading terms cancel down to a fraction of order beta^2 t^beta
// of their size, which exhausts double precision at small t.
double cancellation_relative_residual(double log_t, ConeAngle beta);

struct InequalityGrid {
  std::vector<double> betas;
  double log_t_min = -27.0;
  double log_t_max = -1.3862943611198906;  // log(1/4)
  int t_points = 1000;
  // Part (ii) uses its own log-spaced grid in |log t| over [1e-8, 700].
  int part_ii_points = 10000;

  static InequalityGrid standard();  // beta in {0.05, 0.10, ..., 0.50}
};

struct EqualityPoint {
  double beta;
  double located;
  double exact;
};

struct InequalityReport {
  // (i)  beta / (1 - t^beta) <= 1 on t <= 1/4
  double part_i_max_violation;
  std::vector<EqualityPoint> part_i_equality;
  // (ii) (1 - t^beta)/beta <= -log t, violation measured relative to |log t|
  double part_ii_max_violation;
  std::vector<EqualityPoint> part_ii_equality;
  // (iii) sup A t^(1-beta) and sup B over the grid
  double part_iii_A_sup;
  double part_iii_B_sup;
  int points_checked;

  double max_equality_error() const;
  bool ok(double violation_tol = 1e-14, double location_tol = 1e-9) const;
};

InequalityReport check_cone_inequalities(const InequalityGrid& grid);

}  // namespace kelab
