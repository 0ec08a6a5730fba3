#include "kelab/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "kelab/errors.hpp"

namespace kelab {

double min_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

CMatrix cholesky_lower(const CMatrix& h) {
  Eigen::LLT<CMatrix> llt(h);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("Cholesky pivot failure");
  return llt.matrixL();
}

double relative_spectral_norm(const CMatrix& theta, const CMatrix& g) {
  const CMatrix l = cholesky_lower(g);
  const CMatrix linv = l.triangularView<Eigen::Lower>().solve(CMatrix::Identity(g.rows(), g.cols()));
  const CMatrix w = linv * theta * linv.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (w + w.adjoint()), Eigen::EigenvaluesOnly);
  return std::max(std::fabs(es.eigenvalues().minCoeff()), std::fabs(es.eigenvalues().maxCoeff()));
}

}  // namespace kelab
