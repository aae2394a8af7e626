#pragma once

#include <Eigen/Dense>

namespace jd {

using Mat = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

// Relative cutoff for singular values when deciding rank.
inline constexpr double kRankTol = 1e-9;

int rank_of(const Mat& a, double rel_tol = kRankTol);

// Orthonormal basis of the column space.
Mat column_basis(const Mat& a, double rel_tol = kRankTol);

// Orthonormal basis of the kernel (columns).
Mat kernel_basis(const Mat& a, double rel_tol = kRankTol);

struct LeastSquares {
  VecX x;
  double residual = 0.0;    // |A x - b|
  double normalized = 0.0;  // residual / (1 + |b|)
};

// Minimum-norm least-squares solution.
LeastSquares least_squares(const Mat& a, const VecX& b);

// Distance of b from the column space of a, scaled by 1/(1+|b|).
double span_residual(const Mat& a, const VecX& b);

struct SubspaceComparison {
  int rank_a = 0;
  int rank_b = 0;
  double residual = 0.0;  // largest distance of a unit basis vector of one from the other
  bool same_rank() const { return rank_a == rank_b; }
};

SubspaceComparison compare_spans(const Mat& a, const Mat& b, double rel_tol = kRankTol);

// dim(span a  ∩  span b)
int intersection_dim(const Mat& a, const Mat& b, double rel_tol = kRankTol);

}  // namespace jd
