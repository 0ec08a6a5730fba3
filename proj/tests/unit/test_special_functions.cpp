#include <gtest/gtest.h>

#include <cmath>

#include "kelab/errors.hpp"
#include "kelab/special_functions.hpp"
#include "oracles.hpp"

using namespace kelab;

namespace {

const double kBetas[] = {0.05, 0.1, 0.25, 0.5, 0.75};
const double kLogT[] = {-27.0, -12.0, -5.0, -2.0, -1.3862943611198906, -0.5, -1e-3};

double rel(double a, long double b) { return static_cast<double>(std::fabs((a - b) / b)); }

}  // namespace

TEST(ConeAngle, RejectsOutsideUnitInterval) {
  EXPECT_THROW(ConeAngle(0.0), DomainError);
  EXPECT_THROW(ConeAngle(-0.1), DomainError);
  EXPECT_THROW(ConeAngle(1.5), DomainError);
  EXPECT_THROW(ConeAngle(std::nan("")), DomainError);
  EXPECT_NO_THROW(ConeAngle(1.0));
  EXPECT_TRUE(ConeAngle(0.5).in_uniform_range());
  EXPECT_FALSE(ConeAngle(0.6).in_uniform_range());
}

TEST(RadialParam, KeepsLogAuthoritative) {
  EXPECT_THROW(RadialParam::from_t(0.0), DomainError);
  EXPECT_THROW(RadialParam::from_t(1.0), DomainError);
  EXPECT_THROW(RadialParam::from_log(0.0), DomainError);
  const RadialParam deep = RadialParam::from_log(-2000.0);
  EXPECT_EQ(deep.t(), 0.0);
  EXPECT_EQ(deep.log_t(), -2000.0);
}

TEST(SpecialFunctions, CoefficientsMatchDirectFormulas) {
  for (double beta : kBetas) {
    for (double lt : kLogT) {
      const long double t = std::exp(static_cast<long double>(lt));
      const RadialParam p = RadialParam::from_log(lt);
      const ConeAngle b(beta);
      EXPECT_LT(rel(eval_A(p, b), oracle::A(t, beta)), 1e-12) << beta << " " << lt;
      EXPECT_LT(rel(eval_B(p, b), oracle::B(t, beta)), 1e-12) << beta << " " << lt;
      const ADerivatives d = eval_A_derivs(p, b);
      EXPECT_LT(rel(d.first, oracle::A_prime(t, beta)), 1e-11) << beta << " " << lt;
      EXPECT_LT(rel(d.second, oracle::A_second(t, beta)), 1e-10) << beta << " " << lt;
    }
  }
}

TEST(SpecialFunctions, StaysFiniteBelowUnderflow) {
  // t = e^-1000 underflows, A itself stays representable for beta near 1.
  const RadialParam p = RadialParam::from_log(-1000.0);
  EXPECT_NEAR(std::log(eval_A(p, ConeAngle(0.9))), 2 * std::log(0.9) + 100.0, 1e-12);
  // log A = 2 log beta + (beta - 1) log t - 2 log(1 - t^beta), no overflow in log space.
  const double log_a = sf::log_A(-1000.0, 0.25);
  EXPECT_NEAR(log_a, 2 * std::log(0.25) + 750.0 - 2 * std::log1p(-std::exp(-250.0)), 1e-12);
}

TEST(SpecialFunctions, OneMinusTBetaOverBetaSmallBeta) {
  // (1 - t^beta)/beta -> -log t as beta -> 0; series -log t - beta log^2 t / 2.
  const double lt = -3.0;
  const double beta = 1e-9;
  const double expected = -lt - beta * lt * lt / 2.0;
  EXPECT_NEAR(one_minus_tbeta_over_beta_log(lt, ConeAngle(beta)), expected, 1e-14);
  EXPECT_DOUBLE_EQ(one_minus_tbeta_over_beta_log(0.0, ConeAngle(0.3)), 0.0);
}

TEST(SpecialFunctions, CancellationIdentityHolds) {
  for (double beta : {0.05, 0.1, 0.25, 0.5})
    for (int i = 0; i <= 200; ++i) {
      const double lt = -27.0 + (std::log(0.25) + 27.0) * i / 200.0;
      EXPECT_LE(cancellation_relative_residual(lt, ConeAngle(beta)), 1e-10) << beta << " " << lt;
    }
}

TEST(SpecialFunctions, CancellationIdentityFromOracle) {
  // Same identity assembled from the independent long double formulas.
  for (double beta : {0.1, 0.3, 0.5})
    for (double lt : {-8.0, -4.0, -2.0}) {
      const long double t = std::exp(static_cast<long double>(lt));
      const long double a = oracle::A(t, beta), a1 = oracle::A_prime(t, beta), a2 = oracle::A_second(t, beta);
      const long double r = -(t * a2 + a1) + t * a1 * a1 / a + 2 * a * a;
      EXPECT_LT(std::fabs(static_cast<double>(r / (2 * a * a))), 1e-9) << beta << " " << lt;
    }
}

TEST(SpecialFunctions, InequalitiesOnStandardGrid) {
  const InequalityReport rep = check_cone_inequalities(InequalityGrid::standard());
  EXPECT_TRUE(rep.ok(1e-14, 1e-9));
  EXPECT_LE(rep.part_i_max_violation, 1e-14);
  EXPECT_LE(rep.part_ii_max_violation, 1e-14);
  ASSERT_EQ(rep.part_i_equality.size(), 10u);
  for (const auto& p : rep.part_i_equality) EXPECT_NEAR(p.exact, std::pow(1.0 - p.beta, 1.0 / p.beta), 1e-15);
  for (const auto& p : rep.part_ii_equality) EXPECT_DOUBLE_EQ(p.exact, 1.0);
  EXPECT_LE(rep.part_iii_A_sup, 1.0 + 1e-14);
  EXPECT_LE(rep.part_iii_B_sup, 1.0);
}
