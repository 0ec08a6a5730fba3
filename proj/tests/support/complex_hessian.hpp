#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace oracle {

// d_j dbar_k f by fourth-order central differences in real coordinates,
// d_j dbar_k = 1/4 [(dx_j dx_k + dy_j dy_k) + i (dx_j dy_k - dy_j dx_k)].
inline Eigen::MatrixXcd complex_hessian(const std::function<double(const Eigen::VectorXcd&)>& f,
                                        const Eigen::VectorXcd& p, double h) {
  const Eigen::Index n = p.size();
  auto shifted = [&](Eigen::Index a, double sa, Eigen::Index b, double sb) {
    Eigen::VectorXcd q = p;
    q(a / 2) += (a % 2 == 0) ? std::complex<double>(sa, 0) : std::complex<double>(0, sa);
    q(b / 2) += (b % 2 == 0) ? std::complex<double>(sb, 0) : std::complex<double>(0, sb);
    return f(q);
  };
  // Mixed second derivative from the 4th-order product stencil.
  auto d2 = [&](Eigen::Index a, Eigen::Index b) {
    const double w[] = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
    const double s[] = {-2, -1, 1, 2};
    double acc = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) acc += w[i] * w[j] * shifted(a, s[i] * h, b, s[j] * h);
    return acc / (h * h);
  };
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const double re = d2(2 * j, 2 * k) + d2(2 * j + 1, 2 * k + 1);
      const double im = d2(2 * j, 2 * k + 1) - d2(2 * j + 1, 2 * k);
      g(j, k) = 0.25 * std::complex<double>(re, im);
    }
  return g;
}

}  // namespace oracle
