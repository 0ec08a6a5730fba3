#pragma once

#include <Eigen/Dense>
#include <complex>

namespace kelab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Smallest eigenvalue of a hermitian matrix.
double min_eigenvalue(const CMatrix& h);

// Operator norm of theta measured against the positive definite form g,
// i.e. the largest |eigenvalue| of g^(-1/2) theta g^(-1/2).
double relative_spectral_norm(const CMatrix& theta, const CMatrix& g);

// Lower Cholesky factor; throws NotPositiveDefinite on pivot failure.
CMatrix cholesky_lower(const CMatrix& h);

}  // namespace kelab
