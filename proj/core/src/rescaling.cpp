#include "kelab/rescaling.hpp"

#include <algorithm>
#include <cmath>

#include "kelab/errors.hpp"

namespace kelab {

namespace {

constexpr double kEm2 = 0.1353352832366127;  // e^-2
constexpr double kBoundarySlack = 1e-14;

}  // namespace

RescalingMap::RescalingMap(ConeAngle beta) : beta_(beta.value()) {}

double RescalingMap::source_w1_radius() const noexcept { return std::exp(0.5 / beta_); }
double RescalingMap::target_z1_radius() const noexcept { return std::exp(-0.5 / beta_); }

bool RescalingMap::in_source(const CVector& w) const {
  if (w.size() < 1) return false;
  if (std::abs(w(0)) > source_w1_radius() * (1.0 + kBoundarySlack)) return false;
  for (Eigen::Index k = 1; k < w.size(); ++k)
    if (std::abs(w(k)) > (1.0 / beta_) * (1.0 + kBoundarySlack)) return false;
  return true;
}

bool RescalingMap::in_target(const CVector& z) const {
  if (z.size() < 1) return false;
  if (std::abs(z(0)) > target_z1_radius() * (1.0 + kBoundarySlack)) return false;
  for (Eigen::Index k = 1; k < z.size(); ++k)
    if (std::abs(z(k)) > 1.0 + kBoundarySlack) return false;
  return true;
}

CVector RescalingMap::apply(const CVector& w) const {
  if (!in_source(w)) throw DomainError("point outside the source polydisk of the rescaling map");
  CVector z = beta_ * w;
  z(0) = w(0) * std::exp(-1.0 / beta_);
  return z;
}

CVector RescalingMap::inverse(const CVector& z) const {
  if (!in_target(z)) throw DomainError("point outside the target polydisk of the rescaling map");
  CVector w = z / beta_;
  w(0) = z(0) * std::exp(1.0 / beta_);
  return w;
}

double limit_coefficient() { return kEm2 / ((1.0 - kEm2) * (1.0 - kEm2)); }

namespace {

void check_rescaled_point(const CVector& w, double beta) {
  if (w.size() < 1) throw DomainError("empty point");
  if (!(std::abs(w(0)) > 0.0)) throw DomainError("w1 = 0 lies on the divisor");
  if (!RescalingMap(ConeAngle(beta)).in_source(w)) throw DomainError("point outside the source polydisk");
}

}  // namespace

CMatrix pullback_rescaled_model(const CVector& w, ConeAngle beta) {
  const double b = beta.value();
  check_rescaled_point(w, b);
  const double m2 = std::norm(w(0));
  const double c = kEm2 * std::exp(b * std::log(m2));
  CMatrix g = CMatrix::Identity(w.size(), w.size());
  g(0, 0) = c / ((1.0 - c) * (1.0 - c) * m2);
  return g;
}

double rescaled_potential(const CVector& w, ConeAngle beta) {
  const double b = beta.value();
  check_rescaled_point(w, b);
  const double c = kEm2 * std::exp(b * std::log(std::norm(w(0))));
  double p = (-std::log1p(-c) + std::log(b)) / (b * b);
  for (Eigen::Index k = 1; k < w.size(); ++k) p += std::norm(w(k));
  return p;
}

double rescaled_potential_centered(const CVector& w, ConeAngle beta) {
  const double b = beta.value();
  check_rescaled_point(w, b);
  const double ell = std::log(std::norm(w(0)));
  double p = -std::log1p(-kEm2 * std::expm1(b * ell) / (1.0 - kEm2)) / (b * b);
  for (Eigen::Index k = 1; k < w.size(); ++k) p += std::norm(w(k));
  return p;
}

CMatrix pullback_chain_rule(const CVector& w, ConeAngle beta, double step) {
  if (!(step > 0.0)) throw DomainError("finite-difference step must be positive");
  const Eigen::Index n = w.size();
  check_rescaled_point(w, beta.value());
  if (std::abs(w(0)) <= 3.0 * step) throw StencilError("stencil reaches the divisor w1 = 0");
  Eigen::VectorXd x(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    x(2 * k) = w(k).real();
    x(2 * k + 1) = w(k).imag();
  }
  auto f = [&](const Eigen::VectorXd& y) {
    CVector p(n);
    for (Eigen::Index k = 0; k < n; ++k) p(k) = Complex(y(2 * k), y(2 * k + 1));
    return rescaled_potential_centered(p, beta);
  };
  const double f0 = f(x);
  auto second = [&](const Eigen::VectorXd& dir) {
    const double h = step;
    return (-f(x + 2 * h * dir) + 16 * f(x + h * dir) - 30 * f0 + 16 * f(x - h * dir) - f(x - 2 * h * dir)) /
           (12 * h * h);
  };
  Eigen::MatrixXd hess(2 * n, 2 * n);
  for (Eigen::Index a = 0; a < 2 * n; ++a) {
    const Eigen::VectorXd ea = Eigen::VectorXd::Unit(2 * n, a);
    hess(a, a) = second(ea);
    for (Eigen::Index b = 0; b < a; ++b) {
      const Eigen::VectorXd eb = Eigen::VectorXd::Unit(2 * n, b);
      hess(a, b) = hess(b, a) = 0.25 * (second(ea + eb) - second(ea - eb));
    }
  }
  // d_j dbar_k = (1/4)[(dx_j dx_k + dy_j dy_k) + i (dx_j dy_k - dy_j dx_k)].
  CMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const double re = hess(2 * j, 2 * k) + hess(2 * j + 1, 2 * k + 1);
      const double im = hess(2 * j, 2 * k + 1) - hess(2 * j + 1, 2 * k);
      g(j, k) = 0.25 * Complex(re, im);
    }
  return g;
}

CompactConvergence convergence_on_compact(const std::vector<double>& betas, int radial_samples) {
  if (betas.size() < 2) throw FitError("convergence fit needs at least two values of beta");
  if (radial_samples < 2) throw DomainError("need at least two radial samples");
  CompactConvergence out{{}, 0.0, 0.0, 0.0};
  const double lim = limit_coefficient();
  for (double beta : betas) {
    const ConeAngle cone(beta);
    double dev = 0.0;
    for (int i = 0; i < radial_samples; ++i) {
      const double r = 0.5 * std::pow(4.0, static_cast<double>(i) / (radial_samples - 1));
      CVector w = CVector::Zero(2);
      w(0) = r;
      const CMatrix g = pullback_rescaled_model(w, cone);
      dev = std::max(dev, std::fabs(g(0, 0).real() * r * r - lim));
    }
    out.rows.push_back({beta, dev});
    out.c_fit = std::max(out.c_fit, dev / beta);
  }
  const double m = static_cast<double>(out.rows.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& row : out.rows) {
    const double lx = std::log(row.beta);
    const double ly = std::log(row.deviation);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = m * sxx - sx * sx;
  if (!(std::fabs(denom) > 0.0)) throw FitError("degenerate beta ladder");
  out.slope = (m * sxy - sx * sy) / denom;
  out.intercept = (sy - out.slope * sx) / m;
  return out;
}

ExpansionReport expansion_check(const std::vector<double>& betas, const std::vector<double>& log_moduli, int degree) {
  if (degree < 2) throw FitError("expansion fit needs degree at least 2");
  if (static_cast<int>(betas.size()) < degree + 1) throw FitError("beta ladder too short for the requested degree");
  if (log_moduli.empty()) throw FitError("no sample points for the expansion fit");
  const double scale = *std::max_element(betas.begin(), betas.end());
  const Eigen::Index m = static_cast<Eigen::Index>(betas.size());
  Eigen::MatrixXd vander(m, degree + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    double p = 1.0;
    for (int j = 0; j <= degree; ++j) {
      vander(i, j) = p;
      p *= betas[static_cast<std::size_t>(i)] / scale;
    }
  }
  const auto qr = vander.colPivHouseholderQr();

  const double a_exp = kEm2 / (1.0 - kEm2);
  ExpansionReport rep{};
  rep.betas = betas;
  rep.log_moduli = log_moduli;
  rep.constant_expected = -std::log1p(-kEm2);
  rep.linear_expected = a_exp;
  rep.linear_printed = 1.0 / (kEm2 * (1.0 - kEm2));
  const double quad_expected = 0.5 * a_exp * (1.0 + a_exp);
  double quad_max_error = 0.0;
  for (double ell : log_moduli) {
    if (ell == 0.0) throw FitError("expansion samples must avoid |w1| = 1");
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double b = betas[static_cast<std::size_t>(i)];
      CVector w = CVector::Zero(2);
      w(0) = std::exp(0.5 * ell);
      y(i) = b * b * rescaled_potential(w, ConeAngle(b)) - std::log(b);
    }
    const Eigen::VectorXd coef = qr.solve(y);
    const double f0 = coef(0);
    const double f1 = coef(1) / scale / ell;
    const double f2 = coef(2) / (scale * scale) / (ell * ell);
    rep.constant_fit += f0;
    rep.linear_fit += f1;
    rep.quadratic_fit += f2;
    rep.max_constant_error = std::max(rep.max_constant_error, std::fabs(f0 - rep.constant_expected));
    rep.max_linear_error = std::max(rep.max_linear_error, std::fabs(f1 - a_exp));
    quad_max_error = std::max(quad_max_error, std::fabs(f2 - quad_expected));
  }
  const double k = static_cast<double>(log_moduli.size());
  rep.constant_fit /= k;
  rep.linear_fit /= k;
  rep.quadratic_fit /= k;
  // i d dbar log^2 |w1|^2 = 2 i dw1 ^ dw1-bar / |w1|^2.
  rep.ddc_coefficient = 2.0 * rep.quadratic_fit;
  rep.ddc_error = std::max(std::fabs(rep.ddc_coefficient - limit_coefficient()), 2.0 * quad_max_error);
  rep.constant_fit_squared_log = 2.0 * rep.constant_fit;
  rep.linear_fit_squared_log = 2.0 * rep.linear_fit;
  return rep;
}

}  // namespace kelab
