#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kelab/background.hpp"
#include "kelab/cone_angle.hpp"
#include "kelab/cx.hpp"
#include "kelab/hyperdual.hpp"
#include "kelab/linalg.hpp"
#include "kelab/metric_models.hpp"

namespace kelab {

using HD = HyperDual<double>;

// A hermitian metric field g_{ij}(z) on an open set of C^n, evaluable in
// double precision and over hyper-dual scalars.
class MetricField {
 public:
  virtual ~MetricField() = default;
  virtual int dimension() const = 0;
  virtual bool contains(const CVector& z) const = 0;
  virtual CMatrix coefficients(const CVector& z) const = 0;
  // Row-major n x n.
  virtual std::vector<Cx<HD>> coefficients_hd(std::span<const Cx<HD>> z) const = 0;
};

// Routes both virtual entry points to Derived::eval<S>.
template <class Derived>
class GenericMetricField : public MetricField {
 public:
  CMatrix coefficients(const CVector& z) const override {
    const int n = dimension();
    std::vector<Cx<double>> w(z.data(), z.data() + n);
    const auto c = static_cast<const Derived&>(*this).template eval<double>(std::span<const Cx<double>>(w));
    CMatrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = Complex(c[i * n + j].re, c[i * n + j].im);
    return g;
  }
  std::vector<Cx<HD>> coefficients_hd(std::span<const Cx<HD>> z) const override {
    return static_cast<const Derived&>(*this).template eval<HD>(z);
  }
};

class EuclideanField final : public GenericMetricField<EuclideanField> {
 public:
  explicit EuclideanField(int n) : n_(n) {}
  int dimension() const override { return n_; }
  bool contains(const CVector&) const override { return true; }
  template <class S>
  std::vector<Cx<S>> eval(std::span<const Cx<S>>) const {
    std::vector<Cx<S>> g(static_cast<std::size_t>(n_) * n_, Cx<S>(S(0.0), S(0.0)));
    for (int i = 0; i < n_; ++i) g[static_cast<std::size_t>(i) * n_ + i] = Cx<S>(S(1.0), S(0.0));
    return g;
  }

 private:
  int n_;
};

// n = 1 disk models: conic for beta > 0, cusp (Poincare) for beta = 0.
class DiskModelField final : public GenericMetricField<DiskModelField> {
 public:
  explicit DiskModelField(double beta);
  int dimension() const override { return 1; }
  bool contains(const CVector& z) const override;
  template <class S>
  std::vector<Cx<S>> eval(std::span<const Cx<S>> z) const;

 private:
  double beta_;
};

class ReferenceConicField final : public GenericMetricField<ReferenceConicField> {
 public:
  ReferenceConicField(ConeAngle beta, BackgroundData bg);
  int dimension() const override { return bg_.dimension(); }
  bool contains(const CVector& z) const override;
  template <class S>
  std::vector<Cx<S>> eval(std::span<const Cx<S>> z) const;
  const BackgroundData& background() const noexcept { return bg_; }

 private:
  ConeAngle beta_;
  BackgroundData bg_;
};

enum class Differentiation { HyperDual, FiniteDifference };

struct CurvatureOptions {
  Differentiation method = Differentiation::HyperDual;
  // Finite-difference step; 0 selects min(1e-3, |z1|/10).
  double step = 0.0;
};

// Chern curvature R_{i jbar k lbar} of a Kahler metric at a point,
//   R = -d_k dbar_l g_{i jbar} + sum g^{p qbar} d_k g_{i qbar} dbar_l g_{p jbar}.
class CurvatureTensor {
 public:
  CurvatureTensor(CVector p, CMatrix g, std::vector<Complex> components);

  int dimension() const noexcept { return static_cast<int>(g_.rows()); }
  const CVector& point() const noexcept { return p_; }
  const CMatrix& metric() const noexcept { return g_; }
  CMatrix metric_inverse() const;
  Complex operator()(int i, int j, int k, int l) const;

  // Largest relative deviation over R_{ijkl} = R_{kjil} = R_{ilkj} and
  // conj(R_{ijkl}) = R_{jilk}.
  double symmetry_residual() const;
  double max_abs() const;
  // Condition number of g above 1e12.
  bool ill_conditioned() const;

  // sum R_{ijkl} u_i conj(u_j) v_k conj(v_l)
  Complex evaluate(const CVector& u, const CVector& v) const;

  // Components in coordinates z' with dz' = J dz at the point.
  CurvatureTensor in_chart(const CMatrix& jacobian) const;

 private:
  std::size_t index(int i, int j, int k, int l) const;
  CVector p_;
  CMatrix g_;
  std::vector<Complex> r_;
};

CurvatureTensor curvature_tensor(const MetricField& field, const CVector& p, const CurvatureOptions& opts = {});

// Same tensor expressed in the chart adapted to the weight at p.
CurvatureTensor curvature_tensor_adapted(const MetricField& field, const CVector& p, const BackgroundData& bg,
                                         const CurvatureOptions& opts = {});

// log lambda as a function of x = log r.
using LogConformalFactor = std::function<double(double)>;

struct Annulus {
  double r_min = 0.0;
  double r_max = 1.0;
};

// Gaussian curvature of lambda |dz|^2, K = -(2/lambda) d dbar log lambda, from
// 4th-order central differences in x = log r. step = 0 picks
// 0.01 min(1, |x|, distance to the annulus ends in x).
double gauss_curvature_radial(const LogConformalFactor& log_lambda, Complex z, Annulus domain = {},
                              double step = 0.0);

struct BisectionalOptions {
  int restarts = 16;
  int max_iterations = 500;
  double gradient_tolerance = 1e-8;
  std::uint64_t seed = 42;
};

struct BisectionalExtremes {
  double max_value;
  double min_value;
  double sup_abs;
  int iterations;
};

// Extremes of the bisectional form over pairs of g-unit vectors, by projected
// gradient ascent on the product of unit spheres in an orthonormal frame.
BisectionalExtremes bisectional_extremes(const CurvatureTensor& r, const BisectionalOptions& opts = {});

// |z1|^2 in {1e-2, 1e-4, 1e-6, 1e-8} crossed with five random transverse
// positions (|z_k| < 0.9) and random phases.
std::vector<CVector> standard_sample_schedule(int n, std::uint64_t seed = 42);

struct CurvaturePointRecord {
  int point_id;
  double log_t;
  double sup_bisec;
  double g11_ratio;      // g^{1 1bar} A(t) in the adapted chart
  double offdiag_ratio;  // max_k |g^{k 1bar}| / (t^(1-beta) log^2 t)
};

struct CurvatureReport {
  double beta;
  std::vector<CurvaturePointRecord> points;
  double sup;
};

CurvatureReport bisectional_sup(ConeAngle beta, const BackgroundData& bg, std::span<const CVector> samples,
                                const BisectionalOptions& opts = {});

struct InverseMetricRow {
  double log_t;
  double g11_times_A;
  double g11_times_one_plus_A;
  double offdiag_ratio;
};

struct InverseMetricReport {
  double beta;
  std::vector<InverseMetricRow> rows;
  double offdiag_sup;
};

// Inverse metric in the adapted chart along points with prescribed t and fixed
// transverse coordinates (all 0.5 by default).
InverseMetricReport inverse_metric_asymptotics(ConeAngle beta, const BackgroundData& bg,
                                               std::span<const double> log_t_grid,
                                               std::span<const Complex> transverse = {});

// Point with |s|^2 = exp(log_t), z1 real positive, given transverse coordinates.
CVector point_with_log_t(const BackgroundData& bg, double log_t, std::span<const Complex> transverse);

template <class S>
std::vector<Cx<S>> DiskModelField::eval(std::span<const Cx<S>> z) const {
  using std::exp;
  using std::log;
  const S l = log(norm2(z[0]));
  const S log_lambda = beta_ > 0.0 ? sf::log_A(l, beta_) : -l - S(2.0) * log(-l);
  return {Cx<S>(exp(log_lambda), S(0.0))};
}

template <class S>
std::vector<Cx<S>> ReferenceConicField::eval(std::span<const Cx<S>> z) const {
  return reference_conic_coefficients(z, beta_.value(), bg_);
}

}  // namespace kelab
