#pragma once

#include <span>
#include <string>
#include <string_view>

#include "kelab/cx.hpp"
#include "kelab/hyperdual.hpp"
#include "kelab/linalg.hpp"

namespace kelab {

enum class WeightKind { Flat, Quadratic, CrossTerm };

WeightKind parse_weight_kind(std::string_view name);
std::string to_string(WeightKind kind);

// Local background on the unit polydisk with the divisor {z1 = 0} and section
// s = z1. The Kahler form has constant coefficients omega_tilde; the hermitian
// metric on the line bundle is h = exp(-phi) with
//   phi(z) = sum_{ij} H_ij z_i conj(z_j) + shift,
// so that its curvature form (complex Hessian, dd^c = i d dbar) is Theta = H.
class BackgroundData {
 public:
  BackgroundData(CMatrix omega_tilde, CMatrix weight_hessian, double shift, std::string name = "custom");

  static BackgroundData flat(int n);
  static BackgroundData quadratic(int n, double eps);
  static BackgroundData cross_term(double eps);
  // Built-in weight, normalized with normalization_delta().
  static BackgroundData builtin(WeightKind kind, int n, double eps);

  int dimension() const noexcept { return static_cast<int>(omega_.rows()); }
  const CMatrix& omega_tilde() const noexcept { return omega_; }
  const CMatrix& theta() const noexcept { return hessian_; }
  double shift() const noexcept { return shift_; }
  const std::string& name() const noexcept { return name_; }

  double weight(const CVector& z) const;
  // d phi / d z_i
  CVector weight_gradient(const CVector& z) const;
  // log |s|^2 = log |z1|^2 - phi(z)
  double log_section_norm(const CVector& z) const;
  // Upper bound for sup |s|^2 over the open unit polydisk.
  double section_norm_bound() const;
  // ||Theta|| relative to omega_tilde.
  double theta_norm() const;

  template <class S>
  S weight_generic(std::span<const Cx<S>> z) const {
    const int n = dimension();
    S acc(shift_);
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        const Cx<S> hkl(hessian_(k, l));
        const Cx<S> term = hkl * (z[k] * conj(z[l]));
        acc += term.re;
      }
    }
    return acc;
  }

  template <class S>
  Cx<S> weight_gradient_generic(std::span<const Cx<S>> z, int i) const {
    const int n = dimension();
    Cx<S> acc(S(0), S(0));
    for (int l = 0; l < n; ++l) acc += Cx<S>(hessian_(i, l)) * conj(z[l]);
    return acc;
  }

 private:
  CMatrix omega_;
  CMatrix hessian_;
  double shift_;
  std::string name_;
};

// Shift phi by a constant so that sup |s|^2 <= delta on the polydisk. The new
// shift is set absolutely, so the operation is idempotent.
BackgroundData rescale_background(const BackgroundData& bg, double delta);

// delta for which B(t) ||Theta|| <= 1/2 and |s|^2 < exp(-1) hold for every
// beta: B(t) <= 1/(-log t), so t <= exp(-2 ||Theta||) is enough.
double normalization_delta(const BackgroundData& bg);

}  // namespace kelab
