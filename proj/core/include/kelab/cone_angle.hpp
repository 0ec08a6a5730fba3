#pragma once

namespace kelab {

// Cone angle 2*pi*beta along the divisor. Accepted range is (0, 1]; beta = 1 is
// the smooth (no cone) endpoint. Uniform-in-beta statements use (0, 1/2].
class ConeAngle {
 public:
  explicit ConeAngle(double beta);

  double value() const noexcept { return beta_; }
  bool in_uniform_range() const noexcept { return beta_ <= 0.5; }

 private:
  double beta_;
};

// t = |s|^2 together with log t. The logarithm is the authoritative value;
// t itself underflows to 0 for log t below about -745.
class RadialParam {
 public:
  static RadialParam from_t(double t);
  static RadialParam from_log(double log_t);

  double t() const noexcept { return t_; }
  double log_t() const noexcept { return log_t_; }

 private:
  RadialParam(double t, double log_t) : t_(t), log_t_(log_t) {}
  double t_;
  double log_t_;
};

}  // namespace kelab
