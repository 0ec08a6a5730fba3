#include "kelab/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>

#include "kelab/errors.hpp"

namespace kelab {

namespace {

void require_hermitian(const CMatrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) throw DomainError("coefficient matrix must be square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw DomainError("coefficient matrix must be hermitian");
}

// Unitary U with U y = |y| e1; the identity when y = 0.
CMatrix aligning_reflector(const CVector& y) {
  const Eigen::Index m = y.size();
  const double norm = y.norm();
  if (norm == 0.0) return CMatrix::Identity(m, m);
  const Complex phase = std::abs(y(0)) > 0.0 ? y(0) / std::abs(y(0)) : Complex(1.0, 0.0);
  const Complex alpha = -phase * norm;
  CVector v = y;
  v(0) -= alpha;
  const double vv = v.squaredNorm();
  CMatrix h = CMatrix::Identity(m, m);
  if (vv > 0.0) h -= (2.0 / vv) * v * v.adjoint();
  // h y = alpha e1; rotate the first row so the entry becomes |alpha|.
  h.row(0) *= std::conj(alpha) / std::abs(alpha);
  return h;
}

}  // namespace

CylindricalMetric::CylindricalMetric(CMatrix coefficients) : a_(std::move(coefficients)) {
  require_hermitian(a_);
  cholesky_lower(a_);
}

CMatrix CylindricalMetric::push_forward(const CVector& z) const {
  if (z.size() != a_.rows()) throw DomainError("point dimension does not match the metric");
  if (!(std::abs(z(0)) > 0.0)) throw DomainError("z1 = 0 is not in C* x C^{n-1}");
  CVector d = CVector::Ones(a_.rows());
  d(0) = 1.0 / z(0);
  return d.asDiagonal() * a_ * d.conjugate().asDiagonal();
}

CMatrix CylinderNormalForm::reduced_matrix(int n) const {
  if (n < 2) throw DomainError("normal form needs n >= 2");
  CMatrix r = CMatrix::Identity(n, n);
  r(0, 0) = a;
  r(0, 1) = b;
  r(1, 0) = b;
  return r;
}

NormalFormResult cylinder_normal_form(const CMatrix& a) {
  require_hermitian(a);
  const Eigen::Index n = a.rows();
  if (n < 2) throw DomainError("normal form needs n >= 2");
  cholesky_lower(a);
  const CMatrix m = a.bottomRightCorner(n - 1, n - 1);
  const CMatrix l = cholesky_lower(m);
  // P = L^{-*}, so P^* M P = L^{-1} L L^* L^{-*} = Id.
  const CMatrix p = l.adjoint().triangularView<Eigen::Upper>().solve(CMatrix::Identity(n - 1, n - 1));
  const CVector y = p.adjoint() * a.bottomLeftCorner(n - 1, 1);
  NormalFormResult out;
  out.p = p;
  out.u = aligning_reflector(y);
  out.form = {a(0, 0).real(), y.norm()};
  out.witness = CMatrix::Identity(n, n);
  out.witness.bottomRightCorner(n - 1, n - 1) = p * out.u.adjoint();
  return out;
}

IsometryInvariants isometry_invariants(const CMatrix& a) {
  const NormalFormResult nf = cylinder_normal_form(a);
  const Eigen::Index n = a.rows();
  const double det_m = a.bottomRightCorner(n - 1, n - 1).determinant().real();
  return {nf.form.a + static_cast<double>(n - 1), nf.form.a - nf.form.b * nf.form.b, a.determinant().real() / det_m};
}

CylinderNormalForm invariants_to_normal_form(double trace, double determinant, int n) {
  if (n < 2) throw DomainError("normal form needs n >= 2");
  const double a = trace - (n - 1);
  const double b2 = a - determinant;
  if (!(a > 0.0) || !(determinant > 0.0) || b2 < -1e-14 * std::max(1.0, a)) {
    throw DomainError("invariants do not come from a positive definite cylindrical metric");
  }
  return {a, std::sqrt(std::max(0.0, b2))};
}

IsometryWitness isometry_witness(const CMatrix& a, const CMatrix& b, double tolerance) {
  if (a.rows() != b.rows()) throw DomainError("matrices of different dimension");
  const NormalFormResult na = cylinder_normal_form(a);
  const NormalFormResult nb = cylinder_normal_form(b);
  IsometryWitness w;
  w.same_form = std::fabs(na.form.a - nb.form.a) <= tolerance * std::max(1.0, na.form.a) &&
                std::fabs(na.form.b - nb.form.b) <= tolerance * std::max(1.0, na.form.b);
  w.s = na.witness * nb.witness.inverse();
  w.residual = (w.s.adjoint() * a * w.s - b).cwiseAbs().maxCoeff();
  return w;
}

CMatrix allowed_isometry(int sign, const CMatrix& q) {
  if (sign != 1 && sign != -1) throw DomainError("first-slot sign must be +1 or -1");
  if (q.rows() != q.cols()) throw DomainError("transverse block must be square");
  const Eigen::Index n = q.rows() + 1;
  CMatrix t = CMatrix::Zero(n, n);
  t(0, 0) = static_cast<double>(sign);
  t.bottomRightCorner(n - 1, n - 1) = q;
  return t;
}

PushForwardField radially_deformed_field(const CylindricalMetric& c, double strength) {
  return [c, strength](const CVector& z) {
    CMatrix g = c.push_forward(z);
    g(0, 0) *= 1.0 + strength * std::norm(z(0));
    return g;
  };
}

RicciFlatReport ricci_flat_check(const PushForwardField& field, int n, int samples, std::uint64_t seed,
                                 double tolerance) {
  if (n < 1 || samples < 1) throw DomainError("ricci check needs n >= 1 and at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto pulled_back = [&](const CVector& zeta) {
    CVector z = zeta;
    z(0) = std::exp(zeta(0));
    CVector jac = CVector::Ones(n);
    jac(0) = z(0);
    // (pi^* g)_{jk} = J_j g_{jk} conj(J_k) for the diagonal Jacobian J.
    return CMatrix(jac.asDiagonal() * field(z) * jac.conjugate().asDiagonal());
  };
  auto log_det = [&](const CVector& zeta) { return std::log(pulled_back(zeta).determinant().real()); };

  RicciFlatReport rep{samples, 0.0, 0.0, false};
  CMatrix first;
  const double h = 1e-3;
  for (int s = 0; s < samples; ++s) {
    CVector zeta(n);
    zeta(0) = Complex(unit(rng), std::numbers::pi * unit(rng));
    for (int k = 1; k < n; ++k) zeta(k) = Complex(unit(rng), unit(rng));
    const CMatrix g = pulled_back(zeta);
    if (s == 0) first = g;
    rep.max_coefficient_variation = std::max(rep.max_coefficient_variation, (g - first).cwiseAbs().maxCoeff());
    for (int k = 0; k < n; ++k) {
      for (const Complex dir : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
        CVector e = CVector::Zero(n);
        e(k) = dir;
        const double d = (-log_det(zeta + 2.0 * h * e) + 8.0 * log_det(zeta + h * e) - 8.0 * log_det(zeta - h * e) +
                          log_det(zeta - 2.0 * h * e)) /
                         (12.0 * h);
        rep.max_log_det_derivative = std::max(rep.max_log_det_derivative, std::fabs(d));
      }
    }
  }
  rep.flat = rep.max_log_det_derivative <= tolerance;
  return rep;
}

RicciFlatReport ricci_flat_check(const CylindricalMetric& c, int samples, std::uint64_t seed, double tolerance) {
  return ricci_flat_check([c](const CVector& z) { return c.push_forward(z); }, c.dimension(), samples, seed, tolerance);
}

}  // namespace kelab
