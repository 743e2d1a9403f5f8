#include "twist/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace tw {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat kron_all(const std::vector<Mat>& factors) {
  Mat out = Mat::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Mat identity(long n) { return Mat::Identity(n, n); }

double max_abs(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_unitary(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const Mat id = Mat::Identity(m.rows(), m.cols());
  return max_abs(m.adjoint() * m - id) <= tol && max_abs(m * m.adjoint() - id) <= tol;
}

Mat mat_pow(const Mat& m, long e) {
  Mat base;
  if (e < 0) {
    base = is_unitary(m, 1e-13) ? Mat(m.adjoint()) : Mat(m.inverse());
    e = -e;
  } else {
    base = m;
  }
  Mat result = Mat::Identity(m.rows(), m.cols());
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

Mat range_basis(const Mat& herm, double tol) {
  if (herm.rows() == 0) return Mat(0, 0);
  const Mat h = 0.5 * (herm + herm.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < h.rows(); ++c)
    if (es.eigenvalues()(c) > tol) keep.push_back(c);
  Mat out(h.rows(), static_cast<Eigen::Index>(keep.size()));
  // Largest eigenvalues first keeps the basis order stable across runs.
  for (std::size_t c = 0; c < keep.size(); ++c)
    out.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[keep.size() - 1 - c]);
  return out;
}

Mat column_span(const Mat& m, double tol) {
  if (m.cols() == 0 || m.rows() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  Eigen::Index r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > tol) ++r;
  return svd.matrixU().leftCols(r);
}

Mat null_basis(const Mat& m, double tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  Eigen::Index r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > tol) ++r;
  return svd.matrixV().rightCols(n - r);
}

}  // namespace tw
