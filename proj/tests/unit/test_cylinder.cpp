#include <gtest/gtest.h>

#include <cmath>

#include "kelab/cylinder.hpp"
#include "kelab/errors.hpp"

using namespace kelab;

namespace {

CMatrix sample_matrix() {
  CMatrix a(3, 3);
  a << Complex(3, 0), Complex(0.5, 0.2), Complex(-0.3, 0.1), Complex(0.5, -0.2), Complex(2, 0), Complex(0.1, 0.3),
      Complex(-0.3, -0.1), Complex(0.1, -0.3), Complex(1.5, 0);
  return a;
}

}  // namespace

TEST(Cylinder, TwoByTwoClosedForm) {
  // [[a11, x], [conj x, m]] -> a = a11, b = |x| / sqrt(m).
  CMatrix a(2, 2);
  a << Complex(2.0, 0), Complex(0.6, -0.8), Complex(0.6, 0.8), Complex(4.0, 0);
  const NormalFormResult nf = cylinder_normal_form(a);
  EXPECT_NEAR(nf.form.a, 2.0, 1e-15);
  EXPECT_NEAR(nf.form.b, 0.5, 1e-15);
}

TEST(Cylinder, WitnessReducesTheMatrix) {
  const CMatrix a = sample_matrix();
  const NormalFormResult nf = cylinder_normal_form(a);
  const CMatrix reduced = nf.witness.adjoint() * a * nf.witness;
  EXPECT_LT((reduced - nf.form.reduced_matrix(3)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((nf.u * nf.u.adjoint() - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
  const CMatrix m = a.bottomRightCorner(2, 2);
  EXPECT_LT((nf.p.adjoint() * m * nf.p - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_GT(nf.form.a, nf.form.b * nf.form.b);
  EXPECT_GE(nf.form.b, 0.0);
}

TEST(Cylinder, InvariantsAndSchurComplement) {
  const CMatrix a = sample_matrix();
  const IsometryInvariants inv = isometry_invariants(a);
  EXPECT_NEAR(inv.determinant, inv.determinant_check, 1e-14);
  const NormalFormResult nf = cylinder_normal_form(a);
  EXPECT_NEAR(inv.trace, nf.form.a + 2.0, 1e-14);
  const CylinderNormalForm back = invariants_to_normal_form(inv.trace, inv.determinant, 3);
  EXPECT_NEAR(back.a, nf.form.a, 1e-14);
  EXPECT_NEAR(back.b, nf.form.b, 1e-14);
  EXPECT_THROW(invariants_to_normal_form(1.0, 2.0, 2), DomainError);
}

TEST(Cylinder, DecoupledMetricHasZeroOffDiagonal) {
  CMatrix a = CMatrix::Identity(3, 3);
  a(0, 0) = 5.0;
  a(2, 2) = 9.0;
  const NormalFormResult nf = cylinder_normal_form(a);
  EXPECT_EQ(nf.form.b, 0.0);
  EXPECT_LT((nf.u - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Cylinder, IsometryWitnessBetweenEquivalentMatrices) {
  const CMatrix a = sample_matrix();
  CMatrix q(2, 2);
  q << Complex(0, 1) / std::sqrt(2.0), Complex(1, 0) / std::sqrt(2.0), Complex(1, 0) / std::sqrt(2.0),
      Complex(0, 1) / std::sqrt(2.0);
  const CMatrix t = allowed_isometry(-1, q);
  const CMatrix b = t.adjoint() * a * t;
  const IsometryWitness w = isometry_witness(a, b);
  EXPECT_TRUE(w.same_form);
  EXPECT_LT(w.residual, 1e-13);
  EXPECT_EQ(w.s(0, 0), Complex(1.0, 0.0));
  CMatrix c = a;
  c(0, 0) += 1.0;
  EXPECT_FALSE(isometry_witness(a, c).same_form);
  EXPECT_THROW(allowed_isometry(2, q), DomainError);
}

TEST(Cylinder, RejectsBadInput) {
  EXPECT_THROW(cylinder_normal_form(CMatrix::Identity(1, 1)), DomainError);
  CMatrix h = CMatrix::Identity(2, 2);
  h(0, 1) = 1.0;
  EXPECT_THROW(cylinder_normal_form(h), DomainError);
  EXPECT_THROW(CylindricalMetric(-CMatrix::Identity(2, 2)), NotPositiveDefinite);
}

TEST(Cylinder, PushForwardAndRicciFlatness) {
  const CylindricalMetric metric(sample_matrix());
  CVector z(3);
  z << Complex(0.0, 2.0), Complex(1.0, 0.0), Complex(0.0, 0.0);
  const CMatrix g = metric.push_forward(z);
  EXPECT_NEAR(g(0, 0).real(), 3.0 / 4.0, 1e-15);
  EXPECT_NEAR(std::abs(g(0, 1) - sample_matrix()(0, 1) / Complex(0.0, 2.0)), 0.0, 1e-15);
  z(0) = 0.0;
  EXPECT_THROW(metric.push_forward(z), DomainError);

  const RicciFlatReport flat = ricci_flat_check(metric);
  EXPECT_TRUE(flat.flat);
  EXPECT_LT(flat.max_coefficient_variation, 1e-13);
  const RicciFlatReport control = ricci_flat_check(radially_deformed_field(metric, 0.5), 3);
  EXPECT_FALSE(control.flat);
  EXPECT_GT(control.max_log_det_derivative, 0.1);
}
