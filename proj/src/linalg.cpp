#include "hcm/linalg.hpp"

#include <sstream>

#include "hcm/errors.hpp"

namespace hcm {

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

int decided_rank(const Eigen::VectorXd& sigma, double scale, const Tolerances& tol) {
  if (scale <= 0.0) return 0;
  const double lo = tol.band_lo() * scale;
  const double hi = tol.band_hi() * scale;
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double s = sigma(i);
    if (s > hi) {
      ++rank;
    } else if (s > lo) {
      std::ostringstream os;
      os << "singular value " << s << " lies in the band [" << lo << ", " << hi << "]";
      fail(ErrorKind::RankAmbiguous, os.str());
    }
  }
  return rank;
}

RankedSvd ranked_svd(const Mat& m, const Tolerances& tol, double scale, bool full_u) {
  RankedSvd out;
  if (m.cols() == 0 || m.rows() == 0) {
    out.U = Mat::Identity(m.rows(), m.rows());
    out.V = Mat::Identity(m.cols(), m.cols());
    out.sigma = Eigen::VectorXd();
    out.scale = scale < 0 ? 0.0 : scale;
    return out;
  }
  const unsigned opts = (full_u ? Eigen::ComputeFullU : Eigen::ComputeThinU) | Eigen::ComputeFullV;
  Eigen::BDCSVD<Mat> svd(m, opts);
  out.U = svd.matrixU();
  out.V = svd.matrixV();
  out.sigma = svd.singularValues();
  out.scale = scale < 0 ? out.sigma(0) : scale;
  out.rank = decided_rank(out.sigma, out.scale, tol);
  return out;
}

Mat range_basis(const Mat& m, const Tolerances& tol, double scale) {
  return ranked_svd(m, tol, scale).range();
}

Mat null_basis(const Mat& m, const Tolerances& tol, double scale) {
  return ranked_svd(m, tol, scale).null_space();
}

Mat complement_basis(const Mat& q, Eigen::Index rows) {
  if (q.cols() == 0) return Mat::Identity(rows, rows);
  Eigen::BDCSVD<Mat> svd(q, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(rows - q.cols());
}

double subspace_distance(const Mat& q1, const Mat& q2) {
  const Eigen::Index n = q1.cols() ? q1.rows() : q2.rows();
  Mat p = Mat::Zero(n, n);
  if (q1.cols()) p += q1 * q1.adjoint();
  if (q2.cols()) p -= q2 * q2.adjoint();
  return spectral_norm(p);
}

}  // namespace hcm
