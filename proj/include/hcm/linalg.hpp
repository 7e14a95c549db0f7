#pragma once

#include <Eigen/Dense>

#include "hcm/algebra.hpp"
#include "hcm/tolerances.hpp"

namespace hcm {

double spectral_norm(const Mat& m);

/// Thin SVD of a complex matrix with the rank decided against the ambiguity band.
struct RankedSvd {
  Mat U;                    // left singular vectors (thin, or full when requested)
  Mat V;                    // right singular vectors (full)
  Eigen::VectorXd sigma;    // descending
  int rank = 0;
  double scale = 0.0;

  /// Smallest singular value counted as nonzero; 0 when rank is 0.
  double smallest_nonzero() const { return rank > 0 ? sigma(rank - 1) : 0.0; }
  Mat range() const { return U.leftCols(rank); }
  Mat null_space() const { return V.rightCols(V.cols() - rank); }
};

/// Decide the numerical rank of a descending singular-value list.
/// `scale` is the reference magnitude; a zero scale means rank 0.
int decided_rank(const Eigen::VectorXd& sigma, double scale, const Tolerances& tol);

/// SVD with full V (for null spaces) and full U when `full_u` is set.
/// If `scale` is negative, the largest singular value is used.
RankedSvd ranked_svd(const Mat& m, const Tolerances& tol, double scale = -1.0, bool full_u = false);

/// Orthonormal basis of the column space.
Mat range_basis(const Mat& m, const Tolerances& tol, double scale = -1.0);
/// Orthonormal basis of the null space.
Mat null_basis(const Mat& m, const Tolerances& tol, double scale = -1.0);
/// Orthonormal basis of the orthogonal complement of span(Q), Q orthonormal with `rows` rows.
Mat complement_basis(const Mat& q, Eigen::Index rows);
/// ||P_1 - P_2|| for orthonormal bases of subspaces of the same space.
double subspace_distance(const Mat& q1, const Mat& q2);

}  // namespace hcm
