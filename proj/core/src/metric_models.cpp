#include "kelab/metric_models.hpp"

#include <limits>
#include <string>

namespace kelab {

namespace {

double unit_disk_log_t(Complex z, const char* what) {
  const double r = std::abs(z);
  if (!(r > 0.0 && r < 1.0)) throw DomainError(std::string(what) + ": |z| must lie in (0, 1)");
  return 2.0 * std::log(r);
}

}  // namespace

double eval_disk_model(Complex z, ConeAngle beta) {
  return sf::A(unit_disk_log_t(z, "disk model"), beta.value());
}

double eval_poincare(Complex z) {
  if (std::abs(z) == 1.0) return std::numeric_limits<double>::infinity();
  const double l = unit_disk_log_t(z, "Poincare metric");
  return std::exp(-l - 2.0 * std::log(-l));
}

double log_disk_model_x(double x, double beta) { return sf::log_A(2.0 * x, beta); }

double log_poincare_x(double x) { return -2.0 * x - 2.0 * std::log(-2.0 * x); }

double disk_model_potential(double log_t, double beta) {
  return -std::log(sf::one_minus_tbeta_over_beta(log_t, beta));
}

double poincare_potential(double log_t) { return -std::log(-log_t); }

MetricAtPoint eval_reference_conic(const CVector& p, ConeAngle beta, const BackgroundData& bg) {
  const int n = bg.dimension();
  if (p.size() != n) throw DomainError("point dimension does not match the background");
  std::vector<Cx<double>> z(p.data(), p.data() + n);
  const auto c = reference_conic_coefficients<double>(z, beta.value(), bg);
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(c[i * n + j].re, c[i * n + j].im);
  Eigen::LLT<CMatrix> llt(g);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("reference conic metric is not positive definite; normalize the background");
  }
  return {p, g, llt.solve(CMatrix::Identity(n, n))};
}

double reference_conic_potential(const CVector& p, ConeAngle beta, const BackgroundData& bg) {
  const double quad = (p.transpose() * bg.omega_tilde() * p.conjugate())(0, 0).real();
  return quad + disk_model_potential(bg.log_section_norm(p), beta.value());
}

double model_distance_to_divisor(Complex z1, ConeAngle beta) {
  const double r = std::abs(z1);
  if (!(r > 0.0 && r < 1.0)) throw DomainError("distance to divisor: |z1| must lie in (0, 1)");
  const double lr = std::log(r);
  const double u = std::exp(beta.value() * lr);
  return 0.5 * (std::log1p(u) - std::log(-std::expm1(beta.value() * lr)));
}

double model_distance_to_divisor(const CVector& z, ConeAngle beta) {
  if (z.size() < 1) throw DomainError("empty point");
  return model_distance_to_divisor(z(0), beta);
}

double neighbourhood_threshold_distance() { return std::atanh(std::exp(-0.5)); }

PolydiskRadii ball_polydisk_bounds(double radius, ConeAngle beta) {
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  return {std::exp(std::log(std::tanh(radius)) / beta.value()), radius};
}

AdaptedChart make_adapted_chart(const BackgroundData& bg, const CVector& p) {
  const int n = bg.dimension();
  const CVector grad = bg.weight_gradient(p);
  const double e = std::exp(-0.5 * bg.weight(p));
  CMatrix j = CMatrix::Identity(n, n);
  j(0, 0) = e * (1.0 - p(0) * grad(0));
  for (int k = 1; k < n; ++k) j(0, k) = -p(0) * e * grad(k);
  return {p, j};
}

CMatrix to_adapted(const CMatrix& g, const AdaptedChart& chart) {
  const CMatrix jinv = chart.jacobian.inverse();
  return jinv.transpose() * g * jinv.conjugate();
}

}  // namespace kelab
