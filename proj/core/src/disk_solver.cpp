#include "kelab/disk_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kelab/errors.hpp"
#include "kelab/metric_models.hpp"
#include "kelab/special_functions.hpp"

namespace kelab {

void RadialMetric::validate() const {
  if (x.size() != lambda.size() || x.size() < 2) throw DomainError("radial metric: grid and values differ in size");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(lambda[i] > 0.0) || !std::isfinite(lambda[i])) throw DomainError("radial metric: lambda must be positive");
    if (i > 0 && !(x[i] > x[i - 1])) throw DomainError("radial metric: grid must be strictly increasing");
  }
}

double Perturbation::operator()(double x) const {
  double f = shift;
  if (amplitude != 0.0 && half_width > 0.0) {
    const double s = (x - center) / half_width;
    if (std::fabs(s) < 1.0) f += amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
  }
  return f;
}

void SolverConfig::validate() const {
  if (!(r_min > 0.0 && r_min < r_max && r_max < 1.0)) throw DomainError("solver annulus must satisfy 0 < r_min < r_max < 1");
  if (grid < 64) throw DomainError("solver grid must have at least 64 intervals");
  if (!(tolerance > 0.0)) throw DomainError("solver tolerance must be positive");
  if (max_iterations < 1) throw DomainError("solver needs at least one iteration");
}

double model_log_lambda(double beta, double x) {
  return beta > 0.0 ? log_disk_model_x(x, beta) : log_poincare_x(x);
}

namespace {

long double model_v_long(double beta, long double x) {
  if (beta > 0.0) return sf::log_A(2.0L * x, beta) + 2.0L * x;
  return -std::log(4.0L) - 2.0L * std::log(-x);
}

struct Grid {
  double x0;
  double h;
  int n;  // intervals
  double at(int i) const { return x0 + h * i; }
};

struct NewtonResult {
  std::vector<double> v;
  std::vector<double> history;
  int iterations;
};

// Unknown w = v - v_model; the model's second difference is formed in extended
// precision so that rounding in v does not set the residual floor.
NewtonResult newton(double beta, const Grid& g, const std::vector<double>& forcing, double w_left, double w_right,
                    const SolverConfig& cfg) {
  const int n = g.n;
  const double h2 = g.h * g.h;
  std::vector<double> vm(n + 1), d2vm(n + 1, 0.0);
  {
    std::vector<long double> vl(n + 1);
    for (int i = 0; i <= n; ++i) vl[i] = model_v_long(beta, static_cast<long double>(g.x0) + static_cast<long double>(g.h) * i);
    for (int i = 0; i <= n; ++i) vm[i] = static_cast<double>(vl[i]);
    for (int i = 1; i < n; ++i) d2vm[i] = static_cast<double>((vl[i - 1] - 2.0L * vl[i] + vl[i + 1]) / (static_cast<long double>(g.h) * g.h));
  }
  std::vector<double> w(n + 1, 0.0);
  w[0] = w_left;
  w[n] = w_right;
  for (int i = 1; i < n; ++i) w[i] = w_left + (w_right - w_left) * i / n;

  std::vector<double> res(n + 1, 0.0), rhs(n + 1, 0.0);
  auto residual = [&](const std::vector<double>& ww) {
    double num = 0.0;
    double den = 0.0;
    for (int i = 1; i < n; ++i) {
      rhs[i] = 8.0 * std::exp(vm[i] + ww[i] + forcing[i]);
      res[i] = (ww[i - 1] - 2.0 * ww[i] + ww[i + 1]) / h2 + d2vm[i] - rhs[i];
      num = std::max(num, std::fabs(res[i]));
      den = std::max(den, std::fabs(rhs[i]));
    }
    const double rel = num / std::max(den, std::numeric_limits<double>::min());
    return std::isfinite(rel) ? rel : std::numeric_limits<double>::infinity();
  };

  NewtonResult out{{}, {}, 0};
  double rel = residual(w);
  out.history.push_back(rel);
  std::vector<double> diag(n + 1), cprime(n + 1), dprime(n + 1), delta(n + 1, 0.0), trial(n + 1);
  while (rel > cfg.tolerance) {
    if (out.iterations >= cfg.max_iterations) {
      throw ConvergenceError("Newton iteration did not converge in " + std::to_string(cfg.max_iterations) + " steps",
                             out.history);
    }
    // Thomas algorithm for J delta = -res, J = tridiag(1/h^2, -2/h^2 - rhs, 1/h^2).
    const double off = 1.0 / h2;
    for (int i = 1; i < n; ++i) diag[i] = -2.0 / h2 - rhs[i];
    cprime[1] = off / diag[1];
    dprime[1] = -res[1] / diag[1];
    for (int i = 2; i < n; ++i) {
      const double m = diag[i] - off * cprime[i - 1];
      cprime[i] = off / m;
      dprime[i] = (-res[i] - off * dprime[i - 1]) / m;
    }
    delta[n - 1] = dprime[n - 1];
    for (int i = n - 2; i >= 1; --i) delta[i] = dprime[i] - cprime[i] * delta[i + 1];

    double step = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 20; ++halving) {
      trial = w;
      for (int i = 1; i < n; ++i) trial[i] += step * delta[i];
      const double trial_rel = residual(trial);
      if (trial_rel < rel || trial_rel <= cfg.tolerance) {
        w.swap(trial);
        rel = trial_rel;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++out.iterations;
    out.history.push_back(rel);
    if (!accepted) throw ConvergenceError("Newton damping exhausted without residual decrease", out.history);
    residual(w);
  }
  out.v.resize(n + 1);
  for (int i = 0; i <= n; ++i) out.v[i] = vm[i] + w[i];
  return out;
}

double normalization_constant(const Grid& g, double beta, const Perturbation& f) {
  // Trapezoid rule for int exp(F) lambda_model dA / int lambda_model dA; in x the
  // measure lambda dA is 2 pi exp(v) dx.
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i <= g.n; ++i) {
    const double x = g.at(i);
    const double w = (i == 0 || i == g.n) ? 0.5 : 1.0;
    const double m = std::exp(model_log_lambda(beta, x) + 2.0 * x);
    num += w * std::exp(f(x)) * m;
    den += w * m;
  }
  return -std::log(num / den);
}

}  // namespace

SolverState solve_radial_ke(double beta, const SolverConfig& cfg) {
  cfg.validate();
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("solver parameter beta must lie in [0, 1]");
  const double x0 = std::log(cfg.r_min);
  const double x1 = std::log(cfg.r_max);
  const Grid coarse{x0, (x1 - x0) / cfg.grid, cfg.grid};
  const Grid fine{x0, (x1 - x0) / (2 * cfg.grid), 2 * cfg.grid};

  const double c = cfg.normalize ? normalization_constant(coarse, beta, cfg.perturbation) : 0.0;
  auto forcing = [&](const Grid& g) {
    std::vector<double> out(g.n + 1);
    for (int i = 0; i <= g.n; ++i) out[i] = cfg.perturbation(g.at(i)) + c;
    return out;
  };
  double wl = 0.0;
  double wr = 0.0;
  if (cfg.boundary == BoundarySource::Custom) {
    wl = cfg.custom_log_lambda_min - model_log_lambda(beta, x0);
    wr = cfg.custom_log_lambda_max - model_log_lambda(beta, x1);
  }

  const NewtonResult nc = newton(beta, coarse, forcing(coarse), wl, wr, cfg);
  SolverState s{};
  s.beta = beta;
  s.normalization = c;
  s.residual_history = nc.history;
  s.iterations = nc.iterations;
  s.final_residual = nc.history.back();
  std::vector<double> v = nc.v;
  if (cfg.extrapolate) {
    const NewtonResult nf = newton(beta, fine, forcing(fine), wl, wr, cfg);
    s.fine_residual_history = nf.history;
    s.iterations = std::max(s.iterations, nf.iterations);
    s.final_residual = std::max(s.final_residual, nf.history.back());
    for (int i = 0; i <= cfg.grid; ++i) v[i] = (4.0 * nf.v[2 * i] - nc.v[i]) / 3.0;
  }
  const int n = cfg.grid;
  s.metric.x.resize(n + 1);
  s.metric.lambda.resize(n + 1);
  s.lambda_model.resize(n + 1);
  s.relative_potential.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double x = coarse.at(i);
    const double lm = model_log_lambda(beta, x);
    const double l = v[i] - 2.0 * x;
    s.metric.x[i] = x;
    s.metric.lambda[i] = std::exp(l);
    s.lambda_model[i] = std::exp(lm);
    s.relative_potential[i] = 0.5 * (l - lm);
  }
  s.metric.validate();
  return s;
}

double model_discrete_residual(double beta, const SolverConfig& cfg, int grid) {
  const double x0 = std::log(cfg.r_min);
  const double h = (std::log(cfg.r_max) - x0) / grid;
  std::vector<double> v(grid + 1);
  for (int i = 0; i <= grid; ++i) v[i] = model_log_lambda(beta, x0 + h * i) + 2.0 * (x0 + h * i);
  double worst = 0.0;
  for (int i = 1; i < grid; ++i) {
    const double r = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / (h * h) - 8.0 * std::exp(v[i]);
    worst = std::max(worst, std::fabs(r));
  }
  return worst;
}

double max_relative_error(const SolverState& s) {
  double worst = 0.0;
  for (double u : s.relative_potential) worst = std::max(worst, std::fabs(std::expm1(2.0 * u)));
  return worst;
}

namespace {

// Model potential in the squared-log normalization: -log[(1-t^beta)/beta]^2
// for the conic model, -log log^2 t for the cusp.
double squared_log_model_potential(double beta, double log_t) {
  return beta > 0.0 ? 2.0 * disk_model_potential(log_t, beta) : 2.0 * poincare_potential(log_t);
}

}  // namespace

ConvergenceTable beta_sweep_convergence(const std::vector<double>& betas, double k_min, double k_max,
                                        const SolverConfig& cfg) {
  if (!(k_min > cfg.r_min && k_max < cfg.r_max && k_min < k_max)) {
    throw DomainError("compact set must lie strictly inside the solve annulus");
  }
  const SolverState ref = solve_radial_ke(0.0, cfg);
  const auto& x = ref.metric.x;
  std::vector<int> k_idx;
  for (int i = 1; i + 1 < static_cast<int>(x.size()); ++i) {
    const double r = std::exp(x[i]);
    if (r >= k_min && r <= k_max) k_idx.push_back(i);
  }
  auto dlog = [&](const std::vector<double>& lam, int i) {
    return (std::log(lam[i + 1]) - std::log(lam[i - 1])) / (x[i + 1] - x[i - 1]);
  };
  ConvergenceTable tab{k_min, k_max, {}, true, true, 0.0};
  std::vector<std::vector<double>> potentials;
  for (double beta : betas) {
    const SolverState s = beta == 0.0 ? ref : solve_radial_ke(beta, cfg);
    ConvergenceRow row{beta, 0.0, 0.0};
    std::vector<double> pot;
    for (int i : k_idx) {
      row.c0_deviation = std::max(row.c0_deviation, std::fabs(s.metric.lambda[i] / ref.metric.lambda[i] - 1.0));
      row.c1_deviation = std::max(row.c1_deviation, std::fabs(dlog(s.metric.lambda, i) - dlog(ref.metric.lambda, i)));
      const double lt = 2.0 * x[i];
      pot.push_back(squared_log_model_potential(beta, lt) + 2.0 * s.relative_potential[i] + beta * lt);
    }
    if (!tab.rows.empty()) {
      tab.c0_non_increasing = tab.c0_non_increasing && row.c0_deviation <= tab.rows.back().c0_deviation;
      tab.c1_non_increasing = tab.c1_non_increasing && row.c1_deviation <= tab.rows.back().c1_deviation;
    }
    tab.rows.push_back(row);
    potentials.push_back(std::move(pot));
  }
  int pairs = 0;
  int increasing = 0;
  for (std::size_t b = 1; b < potentials.size(); ++b)
    for (std::size_t i = 0; i < potentials[b].size(); ++i) {
      ++pairs;
      if (potentials[b][i] >= potentials[b - 1][i]) ++increasing;
    }
  tab.potential_monotone_fraction = pairs > 0 ? static_cast<double>(increasing) / pairs : 1.0;
  return tab;
}

RatioReport verify_uniform_equivalence(const std::vector<double>& betas, const SolverConfig& cfg) {
  RatioReport rep{{}, 1.0, 1.0};
  double sup_hi = 0.0;
  double sup_lo = INFINITY;
  for (double beta : betas) {
    const SolverState s = solve_radial_ke(beta, cfg);
    RatioRow row{beta, INFINITY, 0.0};
    for (std::size_t i = 0; i < s.metric.lambda.size(); ++i) {
      const double q = s.metric.lambda[i] / s.lambda_model[i];
      row.ratio_min = std::min(row.ratio_min, q);
      row.ratio_max = std::max(row.ratio_max, q);
    }
    rep.c_star = std::max({rep.c_star, row.ratio_max, 1.0 / row.ratio_min});
    sup_hi = std::max(sup_hi, row.ratio_max);
    sup_lo = std::min(sup_lo, row.ratio_max);
    rep.rows.push_back(row);
  }
  rep.spread = rep.rows.empty() ? 1.0 : sup_hi / sup_lo;
  return rep;
}

std::vector<double> comparison_potential(const SolverState& s) {
  std::vector<double> psi(s.metric.x.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double lt = 2.0 * s.metric.x[i];
    psi[i] = squared_log_model_potential(s.beta, lt) + 2.0 * s.relative_potential[i] + std::log(lt * lt);
  }
  return psi;
}

AprioriReport verify_apriori_bounds(const SolverState& s) {
  AprioriReport rep{};
  rep.beta = s.beta;
  const auto psi = comparison_potential(s);
  const auto it = std::min_element(psi.begin(), psi.end());
  const std::size_t k = static_cast<std::size_t>(it - psi.begin());
  rep.psi_min = *it;
  rep.psi_floor_constant = std::max(0.0, -rep.psi_min);
  rep.min_is_interior = k > 0 && k + 1 < psi.size();
  rep.max_principle_d2 = 0.0;
  if (rep.min_is_interior) {
    const double h = s.metric.x[k + 1] - s.metric.x[k];
    rep.max_principle_d2 = (psi[k - 1] - 2.0 * psi[k] + psi[k + 1]) / (h * h);
  }
  const auto [lo, hi] = std::minmax_element(s.relative_potential.begin(), s.relative_potential.end());
  rep.potential_min = *lo;
  rep.potential_max = *hi;
  rep.band_constant = std::max(std::fabs(*lo), std::fabs(*hi));

  rep.growth_exponent = -INFINITY;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double lt = 2.0 * s.metric.x[i];
    if (lt <= -2.0) {
      rep.growth_exponent = std::max(rep.growth_exponent, (std::log(s.metric.lambda[i]) + lt) / std::log(-lt));
    }
  }
  rep.growth_constant = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double lt = 2.0 * s.metric.x[i];
    if (lt <= -1.0) {
      rep.growth_constant = std::max(
          rep.growth_constant, std::exp(std::log(s.metric.lambda[i]) + lt - rep.growth_exponent * std::log(-lt)));
    }
  }
  return rep;
}

}  // namespace kelab
