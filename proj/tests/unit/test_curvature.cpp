#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kelab/curvature.hpp"
#include "kelab/errors.hpp"

using namespace kelab;

namespace {

CVector point1(Complex z) {
  CVector p(1);
  p(0) = z;
  return p;
}

// Gaussian curvature of g i dz ^ dz-bar from the Chern tensor: K = 2 R / g^2.
double gauss(const CurvatureTensor& r) {
  const double g = r.metric()(0, 0).real();
  return 2.0 * r(0, 0, 0, 0).real() / (g * g);
}

}  // namespace

TEST(Curvature, DiskModelsHaveCurvatureMinusFour) {
  for (double beta : {0.0, 0.01, 0.1, 0.5, 1.0}) {
    const DiskModelField f(beta);
    for (double r : {1e-8, 1e-3, 0.2, 0.7})
      EXPECT_NEAR(gauss(curvature_tensor(f, point1(std::polar(r, 1.1)))), -4.0, 1e-7) << beta << " " << r;
  }
}

TEST(Curvature, SubstitutionChartGivesTheParameterOneModel) {
  // w = z^beta carries the conic model to |dw|^2/(1 - |w|^2)^2.
  const DiskModelField unit_model(1.0);
  for (double beta : {0.05, 0.3}) {
    const DiskModelField model(beta);
    const Complex z = std::polar(0.3, 0.4);
    const Complex w = std::pow(z, beta);
    CMatrix jac(1, 1);
    jac(0, 0) = beta * std::pow(z, beta - 1.0);
    const CurvatureTensor moved = curvature_tensor(model, point1(z)).in_chart(jac);
    const CurvatureTensor direct = curvature_tensor(unit_model, point1(w));
    EXPECT_NEAR(std::abs(moved.metric()(0, 0) - direct.metric()(0, 0)) / direct.metric()(0, 0).real(), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(moved(0, 0, 0, 0) - direct(0, 0, 0, 0)) / std::abs(direct(0, 0, 0, 0)), 0.0, 1e-10);
  }
}

TEST(Curvature, RadialFormulaOnKnownSurfaces) {
  // Round sphere 1/(1 + |z|^2)^2 has K = 4, the flat plane K = 0.
  const LogConformalFactor sphere = [](double x) { return -2.0 * std::log1p(std::exp(2.0 * x)); };
  const LogConformalFactor plane = [](double) { return 0.0; };
  for (double r : {0.1, 0.5, 3.0}) {
    EXPECT_NEAR(gauss_curvature_radial(sphere, std::polar(r, 0.2), {0.0, 100.0}), 4.0, 1e-7);
    EXPECT_NEAR(gauss_curvature_radial(plane, std::polar(r, 0.2), {0.0, 100.0}), 0.0, 1e-12);
  }
  // r = 1 needs an explicit step: the automatic one scales with |log r|.
  EXPECT_THROW(gauss_curvature_radial(sphere, Complex(1.0, 0.0), {0.0, 100.0}), StencilError);
  EXPECT_NEAR(gauss_curvature_radial(sphere, Complex(1.0, 0.0), {0.0, 100.0}, 1e-3), 4.0, 1e-7);
  EXPECT_THROW(gauss_curvature_radial(plane, Complex(2.0, 0.0), {0.0, 1.0}), DomainError);
}

TEST(Curvature, HyperDualAgreesWithFiniteDifferences) {
  const BackgroundData bg = BackgroundData::builtin(WeightKind::CrossTerm, 2, 0.5);
  const ReferenceConicField field(ConeAngle(0.3), bg);
  CVector p(2);
  p << std::polar(0.1, 0.5), Complex(0.3, -0.2);
  CurvatureOptions fd;
  fd.method = Differentiation::FiniteDifference;
  const CurvatureTensor a = curvature_tensor(field, p);
  const CurvatureTensor b = curvature_tensor(field, p, fd);
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) worst = std::max(worst, std::abs(a(i, j, k, l) - b(i, j, k, l)));
  EXPECT_LT(worst / a.max_abs(), 1e-6);
}

TEST(Curvature, FiniteDifferencesConvergeAtFourthOrder) {
  const BackgroundData bg = BackgroundData::builtin(WeightKind::CrossTerm, 2, 0.5);
  const ReferenceConicField field(ConeAngle(0.3), bg);
  CVector p(2);
  p << std::polar(0.3, 0.5), Complex(0.3, -0.2);
  const CurvatureTensor exact = curvature_tensor(field, p);
  auto fd_error = [&](double step) {
    const CurvatureTensor b = curvature_tensor(field, p, {Differentiation::FiniteDifference, step});
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) worst = std::max(worst, std::abs(exact(i, j, k, l) - b(i, j, k, l)));
    return worst;
  };
  // Larger steps are pre-asymptotic (|z1| = 0.3), smaller ones hit rounding.
  for (double h : {0.01, 0.005}) {
    const double ratio = fd_error(h) / fd_error(h / 2);
    EXPECT_GE(ratio, 12.0) << h;
    EXPECT_LE(ratio, 20.0) << h;
  }
}

TEST(Curvature, KahlerSymmetries) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const BackgroundData bg = BackgroundData::builtin(WeightKind::Quadratic, 3, 0.5);
  for (int i = 0; i < 20; ++i) {
    const ReferenceConicField field(ConeAngle(0.05 + 0.45 * unit(rng)), bg);
    CVector p(3);
    p << std::polar(std::exp(-8.0 * unit(rng)) * 0.9, 6.28 * unit(rng)), std::polar(0.8 * unit(rng), 6.28 * unit(rng)),
        std::polar(0.8 * unit(rng), 6.28 * unit(rng));
    EXPECT_LT(curvature_tensor(field, p).symmetry_residual(), 1e-10);
  }
}

TEST(Curvature, EuclideanIsFlat) {
  const EuclideanField f(3);
  CVector p = CVector::Constant(3, Complex(0.1, 0.2));
  const CurvatureTensor r = curvature_tensor(f, p);
  EXPECT_EQ(r.max_abs(), 0.0);
  const BisectionalExtremes e = bisectional_extremes(r);
  EXPECT_EQ(e.sup_abs, 0.0);
}

TEST(Curvature, BisectionalExtremesOfAProductWithFlatFactor) {
  // Flat background: g = Id + e^-1 A(|z1|^2 / e) dz1 dz1-bar, a surface times C.
  // Bisectional values run over [K/2, 0] with K the surface curvature.
  const BackgroundData bg = BackgroundData::builtin(WeightKind::Flat, 2, 0.5);
  const double beta = 0.25;
  const ReferenceConicField field(ConeAngle(beta), bg);
  const double shift = bg.shift();
  const LogConformalFactor log_lambda = [&](double x) {
    return std::log1p(std::exp(-shift) * sf::A(2.0 * x - shift, beta));
  };
  for (double r : {1e-3, 1e-2, 0.1}) {
    CVector p(2);
    p << std::polar(r, 0.3), Complex(0.4, 0.1);
    const BisectionalExtremes e = bisectional_extremes(curvature_tensor(field, p));
    const double k = gauss_curvature_radial(log_lambda, Complex(r, 0.0), {0.0, 1.0});
    EXPECT_NEAR(e.min_value, k / 2.0, 1e-6 * std::fabs(k));
    EXPECT_NEAR(e.max_value, 0.0, 1e-9);
  }
}

TEST(Curvature, HalfAngleFlatProductLimit) {
  // For g11 = 1 + e^-1 A the surface curvature tends to -4 - 8e at beta = 1/2:
  // with c = e, K ~ -4 - 2c(1-beta)^2 t^(1-2 beta) / beta^4.
  const BackgroundData bg = BackgroundData::builtin(WeightKind::Flat, 2, 0.5);
  const ReferenceConicField field(ConeAngle(0.5), bg);
  CVector p(2);
  p << std::exp(0.5 * (-20.0 + bg.shift())), Complex(0.3, 0.0);
  const CurvatureTensor r = curvature_tensor(field, p);
  const double g = r.metric()(0, 0).real();
  EXPECT_NEAR(2.0 * r(0, 0, 0, 0).real() / (g * g), -4.0 - 8.0 * std::exp(1.0), 0.05);
}

TEST(Curvature, BisectionalSupBoundedAndNotGrowing) {
  const std::vector<CVector> samples = standard_sample_schedule(2, 42);
  ASSERT_EQ(samples.size(), 20u);
  for (WeightKind kind : {WeightKind::Quadratic, WeightKind::CrossTerm}) {
    const BackgroundData bg = BackgroundData::builtin(kind, 2, 0.5);
    std::vector<double> sups;
    for (double beta : {0.25, 0.1, 0.05}) {
      const CurvatureReport rep = bisectional_sup(ConeAngle(beta), bg, samples);
      ASSERT_EQ(rep.points.size(), samples.size());
      EXPECT_TRUE(std::isfinite(rep.sup));
      sups.push_back(rep.sup);
    }
    const auto [lo, hi] = std::minmax_element(sups.begin(), sups.end());
    EXPECT_LE(*hi / *lo, 1.25) << to_string(kind);
    EXPECT_LE(sups.back(), 1.05 * sups.front()) << to_string(kind);
  }
}

TEST(Curvature, InverseMetricAsymptotics) {
  const BackgroundData bg = BackgroundData::builtin(WeightKind::Quadratic, 2, 0.5);
  const std::vector<double> grid{-5.0, -20.0, -40.0};
  for (double beta : {0.25, 0.05}) {
    const InverseMetricReport rep = inverse_metric_asymptotics(ConeAngle(beta), bg, grid);
    ASSERT_EQ(rep.rows.size(), grid.size());
    EXPECT_NEAR(rep.rows.back().g11_times_A, 1.0, 1e-6);
    EXPECT_TRUE(std::isfinite(rep.offdiag_sup));
  }
}

TEST(Curvature, SampleScheduleIsDeterministic) {
  const auto a = standard_sample_schedule(3, 7);
  const auto b = standard_sample_schedule(3, 7);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  EXPECT_NEAR(std::norm(a.front()(0)), 1e-2, 1e-15);
  EXPECT_NEAR(std::norm(a.back()(0)), 1e-8, 1e-20);
}
