#include <gtest/gtest.h>

#include <cmath>

#include "kelab/errors.hpp"
#include "kelab/rescaling.hpp"
#include "oracles.hpp"

using namespace kelab;

namespace {

const double kEm2 = std::exp(-2.0);

CVector point(Complex w1, Complex w2) {
  CVector w(2);
  w << w1, w2;
  return w;
}

}  // namespace

TEST(Rescaling, MapRoundTrip) {
  const RescalingMap map(ConeAngle(0.1));
  EXPECT_NEAR(map.source_w1_radius(), std::exp(5.0), 1e-9);
  EXPECT_NEAR(map.target_z1_radius() * map.source_w1_radius(), std::exp(-5.0) * std::exp(5.0), 1e-15);
  const CVector w = point(Complex(3.0, -7.0), Complex(2.0, 1.0));
  const CVector z = map.apply(w);
  EXPECT_NEAR(std::abs(z(0) - w(0) * std::exp(-10.0)), 0.0, 1e-20);
  EXPECT_NEAR(std::abs(z(1) - 0.1 * w(1)), 0.0, 1e-16);
  EXPECT_LT((map.inverse(z) - w).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_TRUE(map.in_target(z));
  EXPECT_THROW(map.apply(point(Complex(200.0, 0.0), 0.0)), DomainError);
  EXPECT_THROW(map.inverse(point(0.0, Complex(1.5, 0.0))), DomainError);
}

TEST(Rescaling, PullbackAgainstDirectModel) {
  // beta^-2 A(|z1|^2) |dz1/dw1|^2 at z1 = e^{-1/beta} w1, in long double.
  for (double beta : {0.2, 0.05, 0.025})
    for (double r : {0.5, 1.0, 1.9}) {
      const long double z1 = std::exp(-1.0L / beta) * r;
      const long double expected = oracle::A(z1 * z1, beta) * std::exp(-2.0L / beta) / (beta * beta);
      const CMatrix g = pullback_rescaled_model(point(std::polar(r, 0.6), Complex(0.1, 0.2)), ConeAngle(beta));
      EXPECT_NEAR(g(0, 0).real() / static_cast<double>(expected), 1.0, 1e-12) << beta << " " << r;
      EXPECT_EQ(g(1, 1), Complex(1.0, 0.0));
      EXPECT_EQ(g(0, 1), Complex(0.0, 0.0));
    }
}

TEST(Rescaling, ChainRuleMatchesModel) {
  for (double beta : {0.5, 0.1, 0.025}) {
    const CVector w = point(std::polar(0.8, 1.0), Complex(0.3, -0.4));
    const CMatrix a = pullback_rescaled_model(w, ConeAngle(beta));
    const CMatrix b = pullback_chain_rule(w, ConeAngle(beta));
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-7) << beta;
  }
  EXPECT_THROW(pullback_chain_rule(point(Complex(1e-3, 0.0), 0.0), ConeAngle(0.1)), StencilError);
  EXPECT_THROW(pullback_rescaled_model(point(0.0, 0.0), ConeAngle(0.1)), DomainError);
}

TEST(Rescaling, LimitCoefficientOnUnitCircle) {
  const double lim = kEm2 / ((1 - kEm2) * (1 - kEm2));
  EXPECT_NEAR(limit_coefficient(), lim, 1e-16);
  for (double beta : {0.2, 0.1, 0.05, 0.025})
    EXPECT_NEAR(pullback_rescaled_model(point(Complex(0.0, 1.0), 0.0), ConeAngle(beta))(0, 0).real(), lim, 1e-14);
}

TEST(Rescaling, CenteredPotentialDiffersByConstant) {
  const ConeAngle beta(0.1);
  const CVector a = point(std::polar(0.7, 0.2), Complex(0.1, 0.0));
  const CVector b = point(std::polar(1.6, -1.0), Complex(0.0, 0.5));
  const double d_raw = rescaled_potential(a, beta) - rescaled_potential(b, beta);
  const double d_centered = rescaled_potential_centered(a, beta) - rescaled_potential_centered(b, beta);
  EXPECT_NEAR(d_raw, d_centered, 1e-9);
  EXPECT_NEAR(rescaled_potential_centered(point(Complex(1.0, 0.0), 0.0), beta), 0.0, 1e-15);
}

TEST(Rescaling, DeviationIsFirstOrderInBeta) {
  const CompactConvergence cc = convergence_on_compact({0.2, 0.1, 0.05, 0.025});
  ASSERT_EQ(cc.rows.size(), 4u);
  EXPECT_GE(cc.slope, 0.8);
  EXPECT_LE(cc.slope, 1.2);
  for (std::size_t i = 1; i < cc.rows.size(); ++i) EXPECT_LT(cc.rows[i].deviation, cc.rows[i - 1].deviation);
  EXPECT_THROW(convergence_on_compact({0.1}), FitError);
}

TEST(Rescaling, ExpansionCoefficients) {
  // beta^2 P - log beta = -log(1 - e^-2 e^{beta ell}) at w' = 0; Taylor in beta:
  // f0 = -log(1 - e^-2), f1 = a ell, f2 = a (1 + a) ell^2 / 2 with a = e^-2/(1 - e^-2).
  std::vector<double> ladder;
  for (int i = 0; i < 12; ++i) ladder.push_back(0.2 * std::pow(0.025, i / 11.0));
  const ExpansionReport r = expansion_check(ladder, {-1.2, -0.6, 0.6, 1.2});
  const double a = kEm2 / (1 - kEm2);
  EXPECT_NEAR(r.constant_fit, -std::log1p(-kEm2), 1e-12);
  EXPECT_NEAR(r.linear_fit, a, 1e-9);
  EXPECT_NEAR(r.quadratic_fit, 0.5 * a * (1 + a), 1e-7);
  EXPECT_NEAR(r.ddc_coefficient, limit_coefficient(), 1e-7);
  EXPECT_NEAR(r.linear_printed, std::exp(2.0) / (1 - kEm2), 1e-12);
  EXPECT_NEAR(r.constant_fit_squared_log, 2 * r.constant_fit, 1e-15);
  EXPECT_THROW(expansion_check(ladder, {0.0}), FitError);
  EXPECT_THROW(expansion_check({0.1, 0.05}, {0.5}), FitError);
}
