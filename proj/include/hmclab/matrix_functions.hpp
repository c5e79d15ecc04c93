#pragma once

#include "hmclab/types.hpp"

namespace hmclab {

/// The four d x d blocks of the derivative d(Q,P)/d(q,p) of a phase-space map.
struct TangentBlocks {
  Mat dQdq;
  Mat dQdp;
  Mat dPdq;
  Mat dPdp;

  static TangentBlocks identity(int d);
  int dim() const { return static_cast<int>(dQdq.rows()); }
  /// The assembled 2d x 2d matrix [dQdq dQdp; dPdq dPdp].
  Mat full() const;
};

/// Time averages (1/t) int_0^t U''(Q(s)) ds and (1/t) int_0^t V''(P(s)) ds.
struct RunningAverages {
  Mat Ubar;
  Mat Vbar;
  double time = 0.0;
};

/// sin(x)/x, with a truncated power series for |x| < 1e-4.
double sinc(double x);

/// Unique symmetric positive definite square root, by spectral decomposition.
/// Throws NotSpdError carrying the offending eigenvalue.
Mat spd_sqrt(const Mat& m);

/// sqrt(V U) = sqrt(U)^{-1} sqrt(sqrt(U) V sqrt(U)) sqrt(U) for spd U, V.
Mat sqrt_product(const Mat& v, const Mat& u);

/// exp of t [0 V; -U 0] evaluated blockwise as
///   [cos(tA)          t V sinc(tB)]
///   [-t U sinc(tA)    cos(tB)     ],  A = sqrt(V U), B = sqrt(U V).
TangentBlocks block_exponential(const RunningAverages& averages);

}  // namespace hmclab
