#include "kelab/special_functions.hpp"

#include <algorithm>
#include <cmath>

namespace kelab {

double eval_A(RadialParam t, ConeAngle beta) { return sf::A(t.log_t(), beta.value()); }

double eval_B(RadialParam t, ConeAngle beta) { return sf::B(t.log_t(), beta.value()); }

ADerivatives eval_A_derivs(RadialParam t, ConeAngle beta) {
  return {sf::A_prime(t.log_t(), beta.value()), sf::A_second(t.log_t(), beta.value())};
}

double one_minus_tbeta_over_beta(RadialParam t, ConeAngle beta) {
  return sf::one_minus_tbeta_over_beta(t.log_t(), beta.value());
}

double one_minus_tbeta_over_beta_log(double log_t, ConeAngle beta) {
  return sf::one_minus_tbeta_over_beta(log_t, beta.value());
}

double cancellation_relative_residual(double log_t, ConeAngle beta) {
  const long double l = log_t;
  const long double a = sf::A(l, beta.value());
  const long double r = sf::cancellation_residual(l, beta.value());
  return static_cast<double>(std::fabs(r) / (2.0L * a * a));
}

InequalityGrid InequalityGrid::standard() {
  InequalityGrid g;
  for (int k = 1; k <= 10; ++k) g.betas.push_back(0.05 * k);
  return g;
}

namespace {

// Bisection for the sign change of f on [lo, hi]; f(lo) and f(hi) differ in sign.
template <class F>
double bisect(F f, double lo, double hi) {
  const bool lo_positive = f(lo) > 0.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((f(mid) > 0.0) == lo_positive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double InequalityReport::max_equality_error() const {
  double e = 0.0;
  for (const auto& p : part_i_equality) e = std::max(e, std::fabs(p.located - p.exact));
  for (const auto& p : part_ii_equality) e = std::max(e, std::fabs(p.located - p.exact));
  return e;
}

bool InequalityReport::ok(double violation_tol, double location_tol) const {
  return part_i_max_violation <= violation_tol && part_ii_max_violation <= violation_tol &&
         part_iii_A_sup <= 1.0 + violation_tol && part_iii_B_sup <= 1.0 + violation_tol &&
         max_equality_error() <= location_tol;
}

InequalityReport check_cone_inequalities(const InequalityGrid& grid) {
  InequalityReport rep{};
  rep.part_i_max_violation = -1.0;
  rep.part_ii_max_violation = -1.0;
  const int nt = std::max(grid.t_points, 2);
  for (double beta : grid.betas) {
    for (int i = 0; i < nt; ++i) {
      const double l = grid.log_t_min + (grid.log_t_max - grid.log_t_min) * i / (nt - 1);
      const double w = sf::one_minus_tpow(l, beta);
      rep.part_i_max_violation = std::max(rep.part_i_max_violation, beta / w - 1.0);
      rep.part_iii_A_sup = std::max(rep.part_iii_A_sup, sf::A(l, beta) * std::exp((1.0 - beta) * l));
      rep.part_iii_B_sup = std::max(rep.part_iii_B_sup, sf::B(l, beta));
      ++rep.points_checked;
    }

    const int np = std::max(grid.part_ii_points, 2);
    const double lo = std::log(1e-8);
    const double hi = std::log(700.0);
    for (int i = 0; i < np; ++i) {
      const double l = -std::exp(lo + (hi - lo) * i / (np - 1));
      const double v = (sf::one_minus_tbeta_over_beta(l, beta) + l) / std::fabs(l);
      rep.part_ii_max_violation = std::max(rep.part_ii_max_violation, v);
      ++rep.points_checked;
    }

    // (i): 1 - t^beta - beta changes sign at t^beta = 1 - beta.
    const double li = bisect([beta](double l) { return sf::one_minus_tpow(l, beta) - beta; },
                             -200.0, -1e-300);
    rep.part_i_equality.push_back({beta, std::exp(li), std::pow(1.0 - beta, 1.0 / beta)});
    // (ii): d/dt [-log t - (1-t^beta)/beta] = (t^beta - 1)/t changes sign at t = 1.
    const double lii = bisect([beta](double l) { return std::expm1(beta * l); }, -1.0, 1.0);
    rep.part_ii_equality.push_back({beta, std::exp(lii), 1.0});
  }
  return rep;
}

}  // namespace kelab
