#include "hmclab/matrix_functions.hpp"

#include <cmath>
#include <sstream>

namespace hmclab {

TangentBlocks TangentBlocks::identity(int d) {
  return {Mat::Identity(d, d), Mat::Zero(d, d), Mat::Zero(d, d), Mat::Identity(d, d)};
}

Mat TangentBlocks::full() const {
  const int d = dim();
  Mat out(2 * d, 2 * d);
  out << dQdq, dQdp, dPdq, dPdp;
  return out;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

namespace {

struct SpdDecomposition {
  Mat vectors;
  Vec values;
};

SpdDecomposition decompose_spd(const Mat& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw NotSpdError(std::string(who) + ": matrix must be square and non-empty", 0.0);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw NotSpdError(std::string(who) + ": matrix is not symmetric", 0.0);
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (m + m.transpose()));
  const double smallest = eig.eigenvalues().minCoeff();
  if (!(smallest > 0.0)) {
    std::ostringstream os;
    os << who << ": matrix is not positive definite, eigenvalue " << smallest;
    throw NotSpdError(os.str(), smallest);
  }
  return {eig.eigenvectors(), eig.eigenvalues()};
}

}  // namespace

Mat spd_sqrt(const Mat& m) {
  const auto dec = decompose_spd(m, "spd_sqrt");
  return dec.vectors * dec.values.cwiseSqrt().asDiagonal() * dec.vectors.transpose();
}

Mat sqrt_product(const Mat& v, const Mat& u) {
  const auto du = decompose_spd(u, "sqrt_product(U)");
  decompose_spd(v, "sqrt_product(V)");
  const Mat s = du.vectors * du.values.cwiseSqrt().asDiagonal() * du.vectors.transpose();
  const Mat s_inv = du.vectors * du.values.cwiseSqrt().cwiseInverse().asDiagonal() * du.vectors.transpose();
  return s_inv * spd_sqrt(s * v * s) * s;
}

TangentBlocks block_exponential(const RunningAverages& averages) {
  const Mat& u = averages.Ubar;
  const Mat& v = averages.Vbar;
  const double t = averages.time;
  const auto du = decompose_spd(u, "block_exponential(Ubar)");
  decompose_spd(v, "block_exponential(Vbar)");

  // With S = sqrt(U) and S V S = R diag(w^2) R^T, any even power series phi
  // satisfies phi(tA) = S^{-1} R diag(phi(t w)) R^T S.
  const Mat s = du.vectors * du.values.cwiseSqrt().asDiagonal() * du.vectors.transpose();
  const Mat s_inv = du.vectors * du.values.cwiseSqrt().cwiseInverse().asDiagonal() * du.vectors.transpose();
  const Mat w = s * v * s;
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (w + w.transpose()));
  const Vec omega = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Mat& r = eig.eigenvectors();

  Vec cos_diag(omega.size());
  Vec sinc_diag(omega.size());
  for (Eigen::Index i = 0; i < omega.size(); ++i) {
    cos_diag[i] = std::cos(t * omega[i]);
    sinc_diag[i] = sinc(t * omega[i]);
  }
  const Mat left = s_inv * r;
  const Mat right = r.transpose() * s;
  const Mat cos_a = left * cos_diag.asDiagonal() * right;
  const Mat sinc_a = left * sinc_diag.asDiagonal() * right;

  // B = sqrt(U V) = A^T, hence phi(tB) = phi(tA)^T.
  TangentBlocks out;
  out.dQdq = cos_a;
  out.dQdp = t * v * sinc_a.transpose();
  out.dPdq = -t * u * sinc_a;
  out.dPdp = cos_a.transpose();
  return out;
}

}  // namespace hmclab
