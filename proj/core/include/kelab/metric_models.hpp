#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "kelab/background.hpp"
#include "kelab/cone_angle.hpp"
#include "kelab/errors.hpp"
#include "kelab/linalg.hpp"
#include "kelab/special_functions.hpp"

namespace kelab {

// Convention: dd^c = i d dbar, and a metric is recorded through its coefficients
// g_{ij} in omega = sum g_{ij} i dz_i ^ dz_j-bar. A rotation-invariant metric on
// the punctured disk is lambda(|z|) i dz ^ dz-bar.

// Conic model on the punctured unit disk, lambda = A(|z|^2).
double eval_disk_model(Complex z, ConeAngle beta);
// Cusp (Poincare) model, lambda = 1 / (|z|^2 log^2 |z|^2). Returns +inf on
// |z| = 1, where the chart ends.
double eval_poincare(Complex z);

// log lambda in the log-radial variable x = log r.
double log_disk_model_x(double x, double beta);
double log_poincare_x(double x);

// Kahler potentials (i d dbar Phi = lambda) as functions of log t, t = |z|^2.
double disk_model_potential(double log_t, double beta);  // -log((1 - t^beta)/beta)
double poincare_potential(double log_t);                 // -log(-log t)

struct MetricAtPoint {
  CVector z;
  CMatrix g;
  CMatrix g_inv;
};

// Reference conic metric g = omega_tilde + A(t) <D's, D's> - B(t) Theta with
// t = |z1|^2 exp(-phi). Throws NotPositiveDefinite if the background was not
// normalized enough for the assembled form to be positive.
MetricAtPoint eval_reference_conic(const CVector& p, ConeAngle beta, const BackgroundData& bg);

// Global potential of the reference conic metric (omega_tilde part plus the
// conic correction), so that its complex Hessian reproduces eval_reference_conic.
double reference_conic_potential(const CVector& p, ConeAngle beta, const BackgroundData& bg);

// Coefficients of the reference conic metric over an arbitrary scalar type,
// row-major n x n. Used by the automatic-differentiation curvature path.
template <class S>
std::vector<Cx<S>> reference_conic_coefficients(std::span<const Cx<S>> z, double beta, const BackgroundData& bg) {
  using std::exp;
  using std::log;
  const int n = bg.dimension();
  if (!(value_of(norm2(z[0])) > 0.0)) throw DomainError("point lies on the divisor z1 = 0");
  const S phi = bg.weight_generic(z);
  const S log_t = log(norm2(z[0])) - phi;
  if (!(value_of(log_t) < 0.0)) throw DomainError("point outside the normalized patch (|s| >= 1)");
  const S a = sf::A(log_t, beta);
  const S b = sf::B(log_t, beta);
  const S e = exp(-phi);
  std::vector<Cx<S>> v(n);
  for (int i = 0; i < n; ++i) {
    const Cx<S> zg = z[0] * bg.weight_gradient_generic(z, i);
    v[i] = Cx<S>(S(i == 0 ? 1.0 : 0.0) - zg.re, S(0.0) - zg.im);
  }
  std::vector<Cx<S>> g(static_cast<std::size_t>(n) * n);
  const S ae = a * e;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Cx<S> c = ae * (v[i] * conj(v[j]));
      c += Cx<S>(bg.omega_tilde()(i, j));
      c -= b * Cx<S>(bg.theta()(i, j));
      g[static_cast<std::size_t>(i) * n + j] = c;
    }
  }
  return g;
}

// Radial length from the cone point to |z1| in the disk model:
// atanh(r^beta) = 1/2 log((1 + r^beta)/(1 - r^beta)).
double model_distance_to_divisor(Complex z1, ConeAngle beta);
double model_distance_to_divisor(const CVector& z, ConeAngle beta);

// Distance corresponding to |z1|^(2 beta) = exp(-1), the boundary of the
// neighbourhood used for the rescaling limit.
double neighbourhood_threshold_distance();

struct PolydiskRadii {
  double z1_radius;
  double transverse_radius;
};

// Polydisk in which the model ball of the given radius around the divisor
// sits: z1 radius tanh(radius)^(1/beta), transverse radius = radius.
PolydiskRadii ball_polydisk_bounds(double radius, ConeAngle beta);

// Holomorphic chart adapted at p: z1' = z1 exp(-f(z)) with
// f(z) = phi(p)/2 + sum_i d_i phi(p) (z_i - p_i), other coordinates unchanged.
// In it the weight vanishes to first order at p.
struct AdaptedChart {
  CVector p;
  CMatrix jacobian;  // dz'_i / dz_k at p
};

AdaptedChart make_adapted_chart(const BackgroundData& bg, const CVector& p);

// Coefficients in the adapted chart: g' = J^-T g conj(J)^-1.
CMatrix to_adapted(const CMatrix& g, const AdaptedChart& chart);

}  // namespace kelab
