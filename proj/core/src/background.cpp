#include "kelab/background.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kelab/errors.hpp"

namespace kelab {

WeightKind parse_weight_kind(std::string_view name) {
  if (name == "flat") return WeightKind::Flat;
  if (name == "quadratic") return WeightKind::Quadratic;
  if (name == "cross-term" || name == "cross_term") return WeightKind::CrossTerm;
  throw DomainError("unknown background weight '" + std::string(name) + "'");
}

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::Flat:
      return "flat";
    case WeightKind::Quadratic:
      return "quadratic";
    case WeightKind::CrossTerm:
      return "cross-term";
  }
  return "flat";
}

BackgroundData::BackgroundData(CMatrix omega_tilde, CMatrix weight_hessian, double shift, std::string name)
    : omega_(std::move(omega_tilde)), hessian_(std::move(weight_hessian)), shift_(shift), name_(std::move(name)) {
  if (omega_.rows() < 1 || omega_.rows() != omega_.cols() || hessian_.rows() != omega_.rows() ||
      hessian_.cols() != omega_.cols()) {
    throw DomainError("background matrices must be square of equal size n >= 1");
  }
  if ((omega_ - omega_.adjoint()).norm() > 1e-14 * (1.0 + omega_.norm()) ||
      (hessian_ - hessian_.adjoint()).norm() > 1e-14 * (1.0 + hessian_.norm())) {
    throw DomainError("background matrices must be hermitian");
  }
  cholesky_lower(omega_);
}

BackgroundData BackgroundData::flat(int n) {
  return BackgroundData(CMatrix::Identity(n, n), CMatrix::Zero(n, n), 0.0, "flat");
}

BackgroundData BackgroundData::quadratic(int n, double eps) {
  CMatrix h = CMatrix::Zero(n, n);
  for (int k = 1; k < n; ++k) h(k, k) = eps;
  return BackgroundData(CMatrix::Identity(n, n), h, 0.0, "quadratic");
}

BackgroundData BackgroundData::cross_term(double eps) {
  // eps Re(z1 conj z2) + eps |z2|^2
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 1) = 0.5 * eps;
  h(1, 0) = 0.5 * eps;
  h(1, 1) = eps;
  return BackgroundData(CMatrix::Identity(2, 2), h, 0.0, "cross-term");
}

BackgroundData BackgroundData::builtin(WeightKind kind, int n, double eps) {
  BackgroundData bg = flat(n);
  switch (kind) {
    case WeightKind::Flat:
      break;
    case WeightKind::Quadratic:
      bg = quadratic(n, eps);
      break;
    case WeightKind::CrossTerm:
      if (n != 2) throw DomainError("cross-term background is defined for n = 2");
      bg = cross_term(eps);
      break;
  }
  return rescale_background(bg, normalization_delta(bg));
}

double BackgroundData::weight(const CVector& z) const {
  return (z.transpose() * hessian_ * z.conjugate())(0, 0).real() + shift_;
}

CVector BackgroundData::weight_gradient(const CVector& z) const { return hessian_ * z.conjugate(); }

double BackgroundData::log_section_norm(const CVector& z) const {
  return std::log(std::norm(z(0))) - weight(z);
}

double BackgroundData::section_norm_bound() const {
  // On the polydisk ||z||^2 < n, so z^T H conj(z) >= n min(0, lambda_min(H)).
  const double floor = dimension() * std::min(0.0, min_eigenvalue(hessian_));
  return std::exp(-(shift_ + floor));
}

double BackgroundData::theta_norm() const { return relative_spectral_norm(hessian_, omega_); }

BackgroundData rescale_background(const BackgroundData& bg, double delta) {
  if (!(delta > 0.0 && delta < std::exp(-1.0) * (1.0 + 1e-12))) {
    throw DomainError("rescaling target delta must lie in (0, exp(-1))");
  }
  const double floor = bg.dimension() * std::min(0.0, min_eigenvalue(bg.theta()));
  const double shift = -std::log(delta) - floor;
  return BackgroundData(bg.omega_tilde(), bg.theta(), shift, bg.name());
}

double normalization_delta(const BackgroundData& bg) {
  return std::min(std::exp(-1.0), std::exp(-2.0 * bg.theta_norm()));
}

}  // namespace kelab
