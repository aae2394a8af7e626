#include "jd/linalg.hpp"

#include <algorithm>

namespace jd {

namespace {

int count_above(const VecX& sv, double rel_tol) {
  if (sv.size() == 0) return 0;
  const double cut = rel_tol * std::max(1.0, sv(0));
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

}  // namespace

int rank_of(const Mat& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  return count_above(svd.singularValues(), rel_tol);
}

Mat column_basis(const Mat& a, double rel_tol) {
  if (a.size() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU);
  const int r = count_above(svd.singularValues(), rel_tol);
  return svd.matrixU().leftCols(r);
}

Mat kernel_basis(const Mat& a, double rel_tol) {
  if (a.rows() == 0) return Mat::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const int r = count_above(svd.singularValues(), rel_tol);
  return svd.matrixV().rightCols(a.cols() - r);
}

LeastSquares least_squares(const Mat& a, const VecX& b) {
  LeastSquares out;
  if (a.cols() == 0) {
    out.x = VecX(0);
    out.residual = b.norm();
  } else {
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(a);
    out.x = cod.solve(b);
    out.residual = (a * out.x - b).norm();
  }
  out.normalized = out.residual / (1.0 + b.norm());
  return out;
}

double span_residual(const Mat& a, const VecX& b) {
  const Mat q = column_basis(a);
  const VecX r = b - q * (q.transpose() * b);
  return r.norm() / (1.0 + b.norm());
}

SubspaceComparison compare_spans(const Mat& a, const Mat& b, double rel_tol) {
  SubspaceComparison c;
  const Mat qa = column_basis(a, rel_tol);
  const Mat qb = column_basis(b, rel_tol);
  c.rank_a = static_cast<int>(qa.cols());
  c.rank_b = static_cast<int>(qb.cols());
  double worst = 0.0;
  for (Eigen::Index j = 0; j < qa.cols(); ++j)
    worst = std::max(worst, (qa.col(j) - qb * (qb.transpose() * qa.col(j))).norm());
  for (Eigen::Index j = 0; j < qb.cols(); ++j)
    worst = std::max(worst, (qb.col(j) - qa * (qa.transpose() * qb.col(j))).norm());
  c.residual = worst;
  return c;
}

int intersection_dim(const Mat& a, const Mat& b, double rel_tol) {
  Mat ab(a.rows(), a.cols() + b.cols());
  ab << a, b;
  return rank_of(a, rel_tol) + rank_of(b, rel_tol) - rank_of(ab, rel_tol);
}

}  // namespace jd
