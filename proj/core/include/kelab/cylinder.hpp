#pragma once

#include <cstdint>
#include <functional>

#include "kelab/linalg.hpp"

namespace kelab {

// Constant hermitian positive definite coefficients (a_{jk}) on the universal
// cover C^n of C* x C^{n-1}; on C* x C^{n-1} the metric carries dz1/z1 in the
// first slot.
class CylindricalMetric {
 public:
  explicit CylindricalMetric(CMatrix coefficients);  // throws NotPositiveDefinite

  const CMatrix& coefficients() const noexcept { return a_; }
  int dimension() const noexcept { return static_cast<int>(a_.rows()); }

  // Coefficients of the push-forward at z in C* x C^{n-1}.
  CMatrix push_forward(const CVector& z) const;

 private:
  CMatrix a_;
};

// a i dz1^dz1-bar/|z1|^2 + b (i dz1/z1 ^ dz2-bar + i dz2 ^ dz1-bar/z1-bar) + sum i dzk^dzk-bar.
struct CylinderNormalForm {
  double a;
  double b;  // >= 0

  CMatrix reduced_matrix(int n) const;
};

struct NormalFormResult {
  CylinderNormalForm form;
  CMatrix p;        // P^* M P = Id
  CMatrix u;        // unitary, U P^* X = (b, 0, ..., 0)
  CMatrix witness;  // T = diag(1, P U^*), T^* A T = reduced matrix
};

// Requires n >= 2 and A positive definite.
NormalFormResult cylinder_normal_form(const CMatrix& a);

struct IsometryInvariants {
  double trace;        // a + n - 1
  double determinant;  // a - b^2
  double determinant_check;  // det A / det M, same quantity by a Schur complement
};

IsometryInvariants isometry_invariants(const CMatrix& a);
CylinderNormalForm invariants_to_normal_form(double trace, double determinant, int n);

// S = diag(1, Q) with S^* A S = B when A and B share a normal form.
struct IsometryWitness {
  bool same_form;
  CMatrix s;
  double residual;  // max |S^* A S - B|
};

IsometryWitness isometry_witness(const CMatrix& a, const CMatrix& b, double tolerance = 1e-10);

// Coordinate change (z1, w) -> (z1^sign, Q w) on the cover as a linear map
// diag(sign, Q); sign = -1 is z1 -> 1/z1.
CMatrix allowed_isometry(int sign, const CMatrix& q);

using PushForwardField = std::function<CMatrix(const CVector& z)>;

// The metric with a11 replaced by a11 (1 + strength |z1|^2); not cylindrical
// for strength != 0.
PushForwardField radially_deformed_field(const CylindricalMetric& c, double strength);

struct RicciFlatReport {
  int samples;
  double max_coefficient_variation;  // max |pulled-back coefficients - value at the first sample|
  double max_log_det_derivative;
  bool flat;  // max_log_det_derivative <= tolerance
};

// Pulls the field back by (zeta1, w) -> (e^zeta1, w) and differentiates log det
// of the pulled-back coefficients numerically at random sample points.
RicciFlatReport ricci_flat_check(const PushForwardField& field, int n, int samples = 50, std::uint64_t seed = 42,
                                 double tolerance = 1e-10);
RicciFlatReport ricci_flat_check(const CylindricalMetric& c, int samples = 50, std::uint64_t seed = 42,
                                 double tolerance = 1e-10);

}  // namespace kelab
