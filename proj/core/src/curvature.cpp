#include "kelab/curvature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "kelab/errors.hpp"
#include "kelab/special_functions.hpp"

namespace kelab {

DiskModelField::DiskModelField(double beta) : beta_(beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("disk model parameter must lie in [0, 1]");
}

bool DiskModelField::contains(const CVector& z) const {
  const double r = std::abs(z(0));
  return r > 0.0 && r < 1.0;
}

ReferenceConicField::ReferenceConicField(ConeAngle beta, BackgroundData bg) : beta_(beta), bg_(std::move(bg)) {}

bool ReferenceConicField::contains(const CVector& z) const {
  if (z.size() != bg_.dimension() || std::abs(z(0)) == 0.0) return false;
  for (int i = 0; i < z.size(); ++i)
    if (std::abs(z(i)) >= 1.0) return false;
  return bg_.log_section_norm(z) < 0.0;
}

CurvatureTensor::CurvatureTensor(CVector p, CMatrix g, std::vector<Complex> components)
    : p_(std::move(p)), g_(std::move(g)), r_(std::move(components)) {}

std::size_t CurvatureTensor::index(int i, int j, int k, int l) const {
  const std::size_t n = static_cast<std::size_t>(dimension());
  return ((i * n + j) * n + k) * n + l;
}

Complex CurvatureTensor::operator()(int i, int j, int k, int l) const { return r_[index(i, j, k, l)]; }

CMatrix CurvatureTensor::metric_inverse() const { return g_.inverse(); }

double CurvatureTensor::max_abs() const {
  double m = 0.0;
  for (const auto& c : r_) m = std::max(m, std::abs(c));
  return m;
}

double CurvatureTensor::symmetry_residual() const {
  const int n = dimension();
  const double scale = std::max(max_abs(), 1e-300);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Complex r = (*this)(i, j, k, l);
          worst = std::max(worst, std::abs(r - (*this)(k, j, i, l)));
          worst = std::max(worst, std::abs(r - (*this)(i, l, k, j)));
          worst = std::max(worst, std::abs(std::conj(r) - (*this)(j, i, l, k)));
        }
  return worst / scale;
}

bool CurvatureTensor::ill_conditioned() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g_, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return ev.minCoeff() <= 0.0 || ev.maxCoeff() / ev.minCoeff() > 1e12;
}

Complex CurvatureTensor::evaluate(const CVector& u, const CVector& v) const {
  const int n = dimension();
  Complex acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex uu = u(i) * std::conj(u(j));
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += (*this)(i, j, k, l) * uu * v(k) * std::conj(v(l));
    }
  return acc;
}

CurvatureTensor CurvatureTensor::in_chart(const CMatrix& jacobian) const {
  const int n = dimension();
  const CMatrix k = jacobian.inverse();  // dz_a / dz'_i
  const CMatrix kc = k.conjugate();
  std::vector<Complex> out(r_.size(), 0.0);
  // Contract one index at a time.
  std::vector<Complex> tmp(r_.size(), 0.0);
  auto idx = [n](int a, int b, int c, int d) {
    return ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
  };
  std::vector<Complex> cur = r_;
  for (int slot = 0; slot < 4; ++slot) {
    const CMatrix& m = (slot % 2 == 0) ? k : kc;
    std::fill(tmp.begin(), tmp.end(), Complex(0.0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            std::array<int, 4> o{a, b, c, d};
            const int target = o[slot];
            for (int s = 0; s < n; ++s) {
              o[slot] = s;
              tmp[idx(a, b, c, d)] += cur[idx(o[0], o[1], o[2], o[3])] * m(s, target);
            }
          }
    cur.swap(tmp);
  }
  out = cur;
  const CMatrix g2 = k.transpose() * g_ * kc;
  return CurvatureTensor(p_, g2, std::move(out));
}

namespace {

struct Derivatives {
  std::vector<CMatrix> first;                // d/d(real coordinate a)
  std::vector<std::vector<CMatrix>> second;  // d^2/d a d b
  CMatrix g;
};

Derivatives derivatives_hyperdual(const MetricField& field, const CVector& p) {
  const int n = field.dimension();
  const int m = 2 * n;
  Derivatives d;
  d.first.assign(m, CMatrix::Zero(n, n));
  d.second.assign(m, std::vector<CMatrix>(m, CMatrix::Zero(n, n)));
  d.g = field.coefficients(p);
  std::vector<Cx<HD>> z(n);
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      for (int k = 0; k < n; ++k) {
        const double re = p(k).real();
        const double im = p(k).imag();
        z[k] = Cx<HD>(HD(re, a == 2 * k ? 1.0 : 0.0, b == 2 * k ? 1.0 : 0.0, 0.0),
                      HD(im, a == 2 * k + 1 ? 1.0 : 0.0, b == 2 * k + 1 ? 1.0 : 0.0, 0.0));
      }
      const auto c = field.coefficients_hd(z);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const auto& e = c[static_cast<std::size_t>(i) * n + j];
          d.second[a][b](i, j) = Complex(e.re.d12, e.im.d12);
          if (a == b) d.first[a](i, j) = Complex(e.re.d1, e.im.d1);
        }
      d.second[b][a] = d.second[a][b];
    }
  }
  return d;
}

Derivatives derivatives_fd(const MetricField& field, const CVector& p, double h) {
  const int n = field.dimension();
  const int m = 2 * n;
  auto shifted = [&](int a, double da, int b, double db) {
    CVector q = p;
    const Complex unit_a = (a % 2 == 0) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
    const Complex unit_b = (b % 2 == 0) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
    q(a / 2) += da * unit_a;
    q(b / 2) += db * unit_b;
    if (!field.contains(q)) throw StencilError("finite-difference stencil leaves the domain of the metric field");
    return field.coefficients(q);
  };
  static constexpr std::array<int, 4> off{-2, -1, 1, 2};
  static constexpr std::array<double, 4> w1{1.0, -8.0, 8.0, -1.0};  // / 12h
  Derivatives d;
  d.g = field.coefficients(p);
  d.first.assign(m, CMatrix::Zero(n, n));
  d.second.assign(m, std::vector<CMatrix>(m, CMatrix::Zero(n, n)));
  for (int a = 0; a < m; ++a) {
    CMatrix f1 = CMatrix::Zero(n, n);
    CMatrix f2 = -30.0 * d.g;
    static constexpr std::array<double, 4> w2{-1.0, 16.0, 16.0, -1.0};  // / 12h^2
    for (int s = 0; s < 4; ++s) {
      const CMatrix gs = shifted(a, off[s] * h, a, 0.0);
      f1 += w1[s] * gs;
      f2 += w2[s] * gs;
    }
    d.first[a] = f1 / (12.0 * h);
    d.second[a][a] = f2 / (12.0 * h * h);
  }
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      CMatrix acc = CMatrix::Zero(n, n);
      for (int s = 0; s < 4; ++s)
        for (int u = 0; u < 4; ++u) acc += (w1[s] * w1[u]) * shifted(a, off[s] * h, b, off[u] * h);
      d.second[a][b] = acc / (144.0 * h * h);
      d.second[b][a] = d.second[a][b];
    }
  return d;
}

}  // namespace

CurvatureTensor curvature_tensor(const MetricField& field, const CVector& p, const CurvatureOptions& opts) {
  const int n = field.dimension();
  if (p.size() != n) throw DomainError("point dimension does not match the metric field");
  if (!field.contains(p)) throw StencilError("evaluation point outside the domain of the metric field");
  Derivatives d;
  if (opts.method == Differentiation::HyperDual) {
    d = derivatives_hyperdual(field, p);
  } else {
    const double h = opts.step > 0.0 ? opts.step : std::min(1e-3, std::abs(p(0)) / 10.0);
    d = derivatives_fd(field, p, h);
  }
  const Complex I(0.0, 1.0);
  std::vector<CMatrix> dz(n), dzb(n);
  for (int k = 0; k < n; ++k) {
    dz[k] = 0.5 * (d.first[2 * k] - I * d.first[2 * k + 1]);
    dzb[k] = 0.5 * (d.first[2 * k] + I * d.first[2 * k + 1]);
  }
  const CMatrix ginv = d.g.inverse();
  std::vector<Complex> r(static_cast<std::size_t>(n) * n * n * n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const CMatrix ddb = 0.25 * (d.second[2 * k][2 * l] + d.second[2 * k + 1][2 * l + 1] +
                                  I * (d.second[2 * k][2 * l + 1] - d.second[2 * k + 1][2 * l]));
      const CMatrix rkl = -ddb + dz[k] * ginv * dzb[l];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l] = rkl(i, j);
    }
  return CurvatureTensor(p, d.g, std::move(r));
}

CurvatureTensor curvature_tensor_adapted(const MetricField& field, const CVector& p, const BackgroundData& bg,
                                         const CurvatureOptions& opts) {
  return curvature_tensor(field, p, opts).in_chart(make_adapted_chart(bg, p).jacobian);
}

double gauss_curvature_radial(const LogConformalFactor& log_lambda, Complex z, Annulus domain, double step) {
  const double r = std::abs(z);
  if (!(r > domain.r_min && r < domain.r_max && r > 0.0)) throw DomainError("point outside the annulus");
  const double x = std::log(r);
  const double x_lo = domain.r_min > 0.0 ? std::log(domain.r_min) : -INFINITY;
  const double x_hi = std::log(domain.r_max);
  double h = step;
  if (h <= 0.0) h = 0.01 * std::min({1.0, std::fabs(x), x_hi - x, x - x_lo});
  if (!(x - 2.0 * h > x_lo && x + 2.0 * h < x_hi) || !(h > 0.0)) {
    throw StencilError("curvature stencil leaves the annulus");
  }
  const double u0 = log_lambda(x);
  const double uxx = (-log_lambda(x + 2 * h) + 16.0 * log_lambda(x + h) - 30.0 * u0 + 16.0 * log_lambda(x - h) -
                      log_lambda(x - 2 * h)) /
                     (12.0 * h * h);
  // d dbar = Laplacian / 4 and Laplacian = exp(-2x) d^2/dx^2 on radial functions.
  return -0.5 * uxx * std::exp(-2.0 * x - u0);
}

namespace {

CVector random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(nd(rng), nd(rng));
  return v / v.norm();
}

// T_{abcd} x_a conj(x_b) y_c conj(y_d) for an orthonormal-frame tensor.
struct FrameForm {
  int n;
  std::vector<Complex> t;
  double sign;

  Complex at(int a, int b, int c, int d) const {
    return t[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d];
  }
  double value(const CVector& x, const CVector& y) const {
    Complex acc = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) acc += at(a, b, c, d) * x(a) * std::conj(x(b)) * y(c) * std::conj(y(d));
    return sign * acc.real();
  }
  // Wirtinger gradients d/d conj(x) and d/d conj(y).
  CVector grad_x(const CVector& x, const CVector& y) const {
    CVector g = CVector::Zero(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) g(b) += at(a, b, c, d) * x(a) * y(c) * std::conj(y(d));
    return sign * g;
  }
  CVector grad_y(const CVector& x, const CVector& y) const {
    CVector g = CVector::Zero(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) g(d) += at(a, b, c, d) * x(a) * std::conj(x(b)) * y(c);
    return sign * g;
  }
};

struct AscentResult {
  double value;
  int iterations;
};

AscentResult ascend(const FrameForm& f, CVector x, CVector y, const BisectionalOptions& opts, double scale) {
  double fx = f.value(x, y);
  double eta = 0.5 / std::max(scale, 1e-300);
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    CVector gx = f.grad_x(x, y);
    CVector gy = f.grad_y(x, y);
    gx -= x.dot(gx) * x;  // x.dot(g) = x^* g
    gy -= y.dot(gy) * y;
    const double gnorm = 2.0 * std::sqrt(gx.squaredNorm() + gy.squaredNorm());
    if (gnorm <= opts.gradient_tolerance * std::max(1.0, scale)) break;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      CVector xn = x + eta * gx;
      CVector yn = y + eta * gy;
      xn /= xn.norm();
      yn /= yn.norm();
      const double fn = f.value(xn, yn);
      if (fn >= fx + 1e-4 * eta * 0.25 * gnorm * gnorm) {
        x = xn;
        y = yn;
        fx = fn;
        eta *= 2.0;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
  }
  return {fx, it};
}

}  // namespace

BisectionalExtremes bisectional_extremes(const CurvatureTensor& r, const BisectionalOptions& opts) {
  const int n = r.dimension();
  // Orthonormal frame: g = L L^*, unit vectors u = L^-T x with |x| = 1.
  const CMatrix l = cholesky_lower(r.metric());
  const CurvatureTensor frame = r.in_chart(l.transpose());
  FrameForm f{n, {}, 1.0};
  f.t.resize(static_cast<std::size_t>(n) * n * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) f.t[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d] = frame(a, b, c, d);
  const double scale = std::max(frame.max_abs() * n * n, 1e-300);
  std::mt19937_64 rng(opts.seed);
  BisectionalExtremes out{-INFINITY, INFINITY, 0.0, 0};
  for (int s = 0; s < opts.restarts; ++s) {
    const CVector x0 = random_unit(n, rng);
    const CVector y0 = random_unit(n, rng);
    f.sign = 1.0;
    const auto up = ascend(f, x0, y0, opts, scale);
    f.sign = -1.0;
    const auto down = ascend(f, x0, y0, opts, scale);
    out.max_value = std::max(out.max_value, up.value);
    out.min_value = std::min(out.min_value, -down.value);
    out.iterations = std::max({out.iterations, up.iterations, down.iterations});
  }
  out.sup_abs = std::max(std::fabs(out.max_value), std::fabs(out.min_value));
  return out;
}

std::vector<CVector> standard_sample_schedule(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::array<double, 4> ladder{1e-2, 1e-4, 1e-6, 1e-8};
  std::vector<CVector> out;
  for (double q : ladder) {
    for (int j = 0; j < 5; ++j) {
      CVector z(n);
      z(0) = std::polar(std::sqrt(q), 2.0 * std::numbers::pi * unit(rng));
      for (int k = 1; k < n; ++k) z(k) = std::polar(0.9 * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
      out.push_back(z);
    }
  }
  return out;
}

namespace {

struct InverseDiagnostics {
  double g11_times_A;
  double g11_times_one_plus_A;
  double offdiag_ratio;
};

InverseDiagnostics inverse_diagnostics(const CVector& p, ConeAngle beta, const BackgroundData& bg) {
  const auto m = eval_reference_conic(p, beta, bg);
  const AdaptedChart chart = make_adapted_chart(bg, p);
  const CMatrix ginv = to_adapted(m.g, chart).inverse();
  const double lt = bg.log_section_norm(p);
  const double a = sf::A(lt, beta.value());
  const double g11 = ginv(0, 0).real();
  double off = 0.0;
  for (int k = 1; k < bg.dimension(); ++k) off = std::max(off, std::abs(ginv(k, 0)));
  return {g11 * a, g11 * (1.0 + a), off / (std::exp((1.0 - beta.value()) * lt) * lt * lt)};
}

}  // namespace

CurvatureReport bisectional_sup(ConeAngle beta, const BackgroundData& bg, std::span<const CVector> samples,
                                const BisectionalOptions& opts) {
  const ReferenceConicField field(beta, bg);
  CurvatureReport rep{beta.value(), {}, 0.0};
  int id = 0;
  for (const auto& p : samples) {
    const CurvatureTensor r = curvature_tensor(field, p);
    const auto ext = bisectional_extremes(r, opts);
    const auto diag = inverse_diagnostics(p, beta, bg);
    rep.points.push_back({id++, bg.log_section_norm(p), ext.sup_abs, diag.g11_times_A, diag.offdiag_ratio});
    rep.sup = std::max(rep.sup, ext.sup_abs);
  }
  return rep;
}

CVector point_with_log_t(const BackgroundData& bg, double log_t, std::span<const Complex> transverse) {
  const int n = bg.dimension();
  CVector z = CVector::Zero(n);
  for (int k = 1; k < n; ++k) z(k) = k - 1 < static_cast<int>(transverse.size()) ? transverse[k - 1] : Complex(0.5, 0.0);
  // |z1|^2 = t exp(phi(z)); phi depends on z1 only weakly, fixed-point iteration.
  z(0) = std::sqrt(std::exp(log_t + bg.weight(z)));
  for (int it = 0; it < 100; ++it) {
    const double next = std::sqrt(std::exp(log_t + bg.weight(z)));
    const bool done = std::fabs(next - z(0).real()) <= 1e-16 * next;
    z(0) = next;
    if (done) break;
  }
  return z;
}

InverseMetricReport inverse_metric_asymptotics(ConeAngle beta, const BackgroundData& bg,
                                               std::span<const double> log_t_grid,
                                               std::span<const Complex> transverse) {
  InverseMetricReport rep{beta.value(), {}, 0.0};
  for (double lt : log_t_grid) {
    const CVector p = point_with_log_t(bg, lt, transverse);
    const auto d = inverse_diagnostics(p, beta, bg);
    rep.rows.push_back({bg.log_section_norm(p), d.g11_times_A, d.g11_times_one_plus_A, d.offdiag_ratio});
    rep.offdiag_sup = std::max(rep.offdiag_sup, d.offdiag_ratio);
  }
  return rep;
}

}  // namespace kelab
