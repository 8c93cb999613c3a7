#include "uio/linalg.hpp"

#include <algorithm>
#include <limits>

namespace uio {

Matrix he(const Matrix& a) { return a + a.transpose(); }

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

double max_abs(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double sym_eig_max(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double sym_eig_min(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

template <typename Mat>
int rank_impl(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  const double thresh = std::max(m.rows(), m.cols()) *
                        std::numeric_limits<double>::epsilon() * sv(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++r;
  return r;
}

}  // namespace

int numerical_rank(const Matrix& m) { return rank_impl(m); }
int numerical_rank(const Eigen::MatrixXcd& m) { return rank_impl(m); }

bool is_positive_definite(const Matrix& s, double shift) {
  Matrix shifted = s;
  shifted.diagonal().array() -= shift;
  Eigen::LLT<Matrix> llt(shifted);
  return llt.info() == Eigen::Success;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
  Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> out(es.eigenvalues().data(),
                                        es.eigenvalues().data() + a.rows());
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return out;
}

}  // namespace uio
