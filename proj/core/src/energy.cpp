#include "kelab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "kelab/errors.hpp"
#include "kelab/special_functions.hpp"

namespace kelab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_beta(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("beta must lie in [0, 1]");
}

// Nodes s_k = anchor + k h covering [s_min, s_max], anchored at the first kink.
struct SGrid {
  double anchor;
  double h;
  long k_lo;
  long k_hi;

  SGrid(const RadialPotential* phi, const QuadratureOptions& opts) : h(opts.step) {
    opts.validate();
    anchor = (phi != nullptr && !phi->kinks().empty()) ? phi->kinks().front() : 0.0;
    k_lo = static_cast<long>(std::ceil((opts.s_min - anchor) / h));
    k_hi = static_cast<long>(std::floor((opts.s_max - anchor) / h));
  }
  double s(long k) const { return anchor + h * static_cast<double>(k); }
};

// Trapezoid sums of f on the h grid and on the even nodes (2h grid), plus the
// integral of |f| over the outermost unit of s on either side.
struct TrapezoidSums {
  double fine;
  double coarse;
  double tail;
};

template <class F>
TrapezoidSums trapezoid(const SGrid& g, F&& f) {
  const long n = g.k_hi - g.k_lo;
  const long tail_nodes = static_cast<long>(std::ceil(1.0 / g.h));
  const long even_lo = (g.k_lo % 2 == 0) ? g.k_lo : g.k_lo + 1;
  const long even_hi = (g.k_hi % 2 == 0) ? g.k_hi : g.k_hi - 1;
  double fine = 0.0;
  double coarse = 0.0;
  double tail = 0.0;
  for (long k = g.k_lo; k <= g.k_hi; ++k) {
    const double v = f(g.s(k));
    fine += (k == g.k_lo || k == g.k_hi) ? 0.5 * v : v;
    if (k % 2 == 0 && k >= even_lo && k <= even_hi) coarse += (k == even_lo || k == even_hi) ? 0.5 * v : v;
    const long i = k - g.k_lo;
    if (i <= tail_nodes || n - i <= tail_nodes) tail += std::fabs(v);
  }
  return {fine * g.h, coarse * 2.0 * g.h, tail * g.h};
}

bool tail_fails(const TrapezoidSums& t, double tol) {
  return !std::isfinite(t.fine) || t.tail > tol * std::max(1.0, std::fabs(t.fine));
}

double log_t_of(double s) { return -std::exp(s); }

// Integrand weight of dA in s: pi t e^s, in logs.
double log_area_weight(double s) { return log_t_of(s) + s; }

}  // namespace

RadialPotential::RadialPotential(Profile profile, Regularity regularity, std::vector<double> kinks, std::string name)
    : profile_(std::move(profile)), regularity_(regularity), kinks_(std::move(kinks)), name_(std::move(name)) {
  if (!profile_) throw DomainError("radial potential needs a profile");
}

double RadialPotential::at_log_t(double log_t) const {
  if (!(log_t < 0.0)) throw DomainError("radial potential: log t must be negative");
  return profile_(std::log(-log_t));
}

RadialPotential RadialPotential::shifted(double c) const {
  Profile p = profile_;
  return RadialPotential([p, c](double s) { return p(s) + c; }, regularity_, kinks_, name_);
}

RadialPotential RadialPotential::constant(double c) {
  return RadialPotential([c](double) { return c; }, Regularity::Bounded, {}, "constant");
}

RadialPotential RadialPotential::cusp_truncated() {
  const double s0 = std::log(2.0);
  return RadialPotential([s0](double s) { return -2.0 * std::max(s, s0); }, Regularity::CuspType, {s0},
                         "cusp_truncated");
}

RadialData RadialData::flat() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }, "flat"};
}

RadialData RadialData::model_on_disk(double beta, double kappa) {
  check_beta(beta);
  if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("rescaling factor must lie in (0, 1)");
  const double lk = 2.0 * std::log(kappa);
  // omega = lambda i dz ^ dz-bar = 2 lambda dA for the pulled-back model lambda.
  auto log_rho = [beta, lk](double log_t) {
    const double lt = log_t + lk;
    const double log_lambda = beta > 0.0 ? sf::log_A(lt, beta) : -lt - 2.0 * std::log(-lt);
    return std::log(2.0) + lk + log_lambda;
  };
  auto log_w = [beta, log_rho](double log_t) { return log_rho(log_t) - (beta - 1.0) * log_t; };
  return {log_rho, log_w, "model_on_disk"};
}

void QuadratureOptions::validate() const {
  if (!(step > 0.0 && step <= 0.1)) throw DomainError("quadrature step must lie in (0, 0.1]");
  if (!(s_min < s_max - 4.0)) throw DomainError("quadrature range too short");
  if (!(tail_tolerance > 0.0)) throw DomainError("tail tolerance must be positive");
}

FunctionalValue reference_volume(const RadialData& data, const QuadratureOptions& opts) {
  const SGrid g(nullptr, opts);
  const auto t = trapezoid(g, [&](double s) { return std::exp(data.log_density(log_t_of(s)) + log_area_weight(s)); });
  return {kPi * t.fine, kPi * std::fabs(t.fine - t.coarse) / 3.0, tail_fails(t, opts.tail_tolerance)};
}

namespace {

struct Dirichlet {
  double fine;
  double coarse;
};

// int phi dd^c phi = pi [phi r phi_r]_{boundary} - 2 pi int e^{-s} phi_s^2 ds,
// discretized so that the sum telescopes on the grid (summation by parts).
Dirichlet dirichlet_term(const RadialPotential& phi, const SGrid& g) {
  auto sum_on = [&](long stride) {
    const long lo = g.k_lo % stride == 0 ? g.k_lo : g.k_lo + (stride - ((g.k_lo % stride) + stride) % stride);
    long hi = lo;
    while (hi + stride <= g.k_hi) hi += stride;
    const double h = g.h * static_cast<double>(stride);
    double acc = 0.0;
    double prev = phi(g.s(lo));
    for (long k = lo; k < hi; k += stride) {
      const double next = phi(g.s(k + stride));
      const double d = next - prev;
      acc += std::exp(-(g.s(k) + 0.5 * h)) * d * d / h;
      prev = next;
    }
    // r phi_r = -2 e^{-s} phi_s at the outer circle (s_lo) and at the puncture (s_hi).
    auto flux = [&](long a, long b) { return -2.0 * std::exp(-0.5 * (g.s(a) + g.s(b))) * (phi(g.s(b)) - phi(g.s(a))) / h; };
    const double outer = phi(g.s(lo)) * flux(lo, lo + stride);
    const double inner = phi(g.s(hi)) * flux(hi - stride, hi);
    return kPi * (outer - inner) - 2.0 * kPi * acc;
  };
  return {sum_on(1), sum_on(2)};
}

}  // namespace

FunctionalValue energy_E(const RadialPotential& phi, const RadialData& data, const QuadratureOptions& opts) {
  const SGrid g(&phi, opts);
  const auto vol = trapezoid(g, [&](double s) { return std::exp(data.log_density(log_t_of(s)) + log_area_weight(s)); });
  const auto i1 = trapezoid(g, [&](double s) {
    return phi(s) * std::exp(data.log_density(log_t_of(s)) + log_area_weight(s));
  });
  const Dirichlet i2 = dirichlet_term(phi, g);
  const double v_fine = kPi * vol.fine;
  const double v_coarse = kPi * vol.coarse;
  const double e_fine = kPi * i1.fine / v_fine + i2.fine / (2.0 * v_fine);
  const double e_coarse = kPi * i1.coarse / v_coarse + i2.coarse / (2.0 * v_coarse);
  const bool div = tail_fails(vol, opts.tail_tolerance) || tail_fails(i1, opts.tail_tolerance) ||
                   !std::isfinite(i2.fine);
  return {e_fine, std::fabs(e_fine - e_coarse) / 3.0, div};
}

FunctionalValue energy_L(const RadialPotential& phi, double beta, const RadialData& data,
                         const QuadratureOptions& opts) {
  check_beta(beta);
  const SGrid g(&phi, opts);
  // dA / t^{1-beta} = pi t^beta e^s ds.
  const auto t = trapezoid(g, [&](double s) {
    const double lt = log_t_of(s);
    return std::exp(phi(s) + data.log_weight(lt) + beta * lt + s);
  });
  const bool div = tail_fails(t, opts.tail_tolerance) || !(t.fine > 0.0);
  if (div) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity(), true};
  const double l = -std::log(kPi * t.fine);
  return {l, std::fabs(std::log(t.fine / t.coarse)) / 3.0, false};
}

EnergyReport evaluate_functionals(const RadialPotential& phi, double beta, const RadialData& data,
                                  const QuadratureOptions& opts) {
  const FunctionalValue e = energy_E(phi, data, opts);
  const FunctionalValue l = energy_L(phi, beta, data, opts);
  const FunctionalValue v = reference_volume(data, opts);
  return {beta, e.value, l.value, e.value + l.value, v.value, e.error_estimate, l.error_estimate,
          e.diverged || l.diverged || v.diverged};
}

RadialPotential normalize_sup(const RadialPotential& phi, const QuadratureOptions& opts) {
  const SGrid g(&phi, opts);
  double sup = -std::numeric_limits<double>::infinity();
  for (long k = g.k_lo; k <= g.k_hi; ++k) sup = std::max(sup, phi(g.s(k)));
  if (!std::isfinite(sup)) throw DomainError("potential has no finite supremum on the grid");
  return phi.shifted(-sup);
}

RadialPotential normalize_mass(const RadialPotential& phi, double beta, const RadialData& data,
                               const QuadratureOptions& opts) {
  const FunctionalValue l = energy_L(phi, beta, data, opts);
  if (l.diverged) throw DomainError("weight mass of the potential is infinite");
  const FunctionalValue v = reference_volume(data, opts);
  return phi.shifted(l.value + std::log(v.value));
}

JensenReport jensen_check(const RadialPotential& phi, double beta, const RadialData& data,
                          const QuadratureOptions& opts) {
  check_beta(beta);
  const SGrid g(&phi, opts);
  // Discrete probability weights of omega / V and log w at each node.
  std::vector<double> mu;
  std::vector<double> logw;
  mu.reserve(static_cast<std::size_t>(g.k_hi - g.k_lo + 1));
  logw.reserve(mu.capacity());
  double total = 0.0;
  for (long k = g.k_lo; k <= g.k_hi; ++k) {
    const double s = g.s(k);
    const double lt = log_t_of(s);
    const double lr = data.log_density(lt);
    const double m = std::exp(lr + log_area_weight(s)) * ((k == g.k_lo || k == g.k_hi) ? 0.5 : 1.0);
    mu.push_back(m);
    logw.push_back(phi(s) + data.log_weight(lt) + (beta - 1.0) * lt - lr);
    total += m;
  }
  double mean_log = 0.0;
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    mu[i] /= total;
    if (mu[i] > 0.0) {
      mean_log += mu[i] * logw[i];
      peak = std::max(peak, logw[i]);
    }
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] > 0.0) acc += mu[i] * std::exp(logw[i] - peak);
  const double log_mean = peak + std::log(acc);
  return {beta, log_mean, mean_log, log_mean - mean_log};
}

DominationReport domination_check(const std::vector<double>& betas, int points) {
  if (points < 2) throw DomainError("domination grid needs at least two points");
  DominationReport rep{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0};
  for (double beta : betas) {
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("domination ladder entries must lie in (0, 1]");
    rep.c_rec = std::max(rep.c_rec, 2.0 * std::log(beta / -std::expm1(-beta)));
  }
  // -log t log-spaced on [1, 1e12], i.e. t in (0, e^-1].
  for (double beta : betas) {
    for (int i = 0; i < points; ++i) {
      const double ell = std::pow(10.0, 12.0 * i / (points - 1));
      const double x = beta * ell;
      const double psi0 = -2.0 * std::log(ell);
      const double diff = 2.0 * std::log(x / -std::expm1(-x));
      const double psib = psi0 + diff;
      rep.observed_max = std::max(rep.observed_max, psib);
      rep.min_difference = std::min(rep.min_difference, diff);
      rep.max_excess = std::max(rep.max_excess, std::fabs(diff) - (rep.c_rec - psi0));
      ++rep.points;
    }
  }
  return rep;
}

ContinuityTable beta_continuity(const RadialPotential& phi, const std::vector<double>& betas, const RadialData& data,
                                const QuadratureOptions& opts) {
  ContinuityTable tab{};
  const EnergyReport lim = evaluate_functionals(phi, 0.0, data, opts);
  tab.limit = {0.0, lim.E, lim.L, lim.G, lim.E_error + lim.L_error, lim.diverged, 0.0};
  tab.limit_diverged = lim.diverged;
  tab.gaps_non_increasing = !lim.diverged;
  std::vector<double> positive;
  for (double beta : betas) {
    const EnergyReport r = evaluate_functionals(phi, beta, data, opts);
    const double gap = (lim.diverged || r.diverged) ? std::numeric_limits<double>::quiet_NaN() : std::fabs(r.G - lim.G);
    if (!tab.rows.empty() && !(gap <= tab.rows.back().gap)) tab.gaps_non_increasing = false;
    tab.rows.push_back({beta, r.E, r.L, r.G, r.E_error + r.L_error, r.diverged, gap});
    if (beta > 0.0) positive.push_back(beta);
  }
  tab.final_gap = tab.rows.empty() ? std::numeric_limits<double>::quiet_NaN() : tab.rows.back().gap;
  if (!positive.empty()) tab.domination = domination_check(positive);
  return tab;
}

StationarityReport stationarity_check(double beta, double kappa, const QuadratureOptions& opts) {
  const RadialData model = RadialData::model_on_disk(beta, kappa);
  const RadialData flat = RadialData::flat();
  const double eps = 1e-4;
  StationarityReport rep{beta, 0.0, std::numeric_limits<double>::infinity()};
  for (double center : {-1.0, 0.0, 1.0, 2.0}) {
    auto bump = [center](double s) {
      const double u = (s - center) / 0.5;
      return std::fabs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0;
    };
    auto derivative = [&](const RadialData& data) {
      const RadialPotential plus([&](double s) { return eps * bump(s); }, Regularity::Bounded);
      const RadialPotential minus([&](double s) { return -eps * bump(s); }, Regularity::Bounded);
      const double d = (evaluate_functionals(plus, beta, data, opts).G - evaluate_functionals(minus, beta, data, opts).G) /
                       (2.0 * eps);
      const SGrid g(nullptr, opts);
      const auto w = [&](double s) { return std::exp(data.log_density(log_t_of(s)) + log_area_weight(s)); };
      const double scale = trapezoid(g, [&](double s) { return bump(s) * w(s); }).fine / trapezoid(g, w).fine;
      return std::fabs(d) / std::max(std::fabs(scale), 1e-300);
    };
    rep.max_model_derivative = std::max(rep.max_model_derivative, derivative(model));
    if (beta > 0.0 && beta < 1.0) rep.min_control_derivative = std::min(rep.min_control_derivative, derivative(flat));
  }
  if (!(beta > 0.0 && beta < 1.0)) rep.min_control_derivative = std::numeric_limits<double>::quiet_NaN();
  return rep;
}

}  // namespace kelab
