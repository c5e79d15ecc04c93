#pragma once

#include <string>

#include "hmclab/transfer.hpp"

namespace hmclab {

/// Tabulated transition kernel K(q_i, Q_j) = f(Q_j) g(P) / |det dQ/dp|,
/// summed over every momentum p with Q(q_i, p) = Q_j. With this
/// normalization (T h)(q_i) = sum_j w_j K_ij h_j / f_j.
struct KernelField {
  Mat values;
  /// ||K||_2^2 = sum_ij w_i w_j K_ij^2 / (f_i f_j) over retained nodes.
  double hs_norm_sq = 0.0;
  /// int dq int dp g(p) g(P) D_q(q, p) over the box, by momentum quadrature.
  double hs_norm_sq_momentum = 0.0;
  FlowSpec spec;
  std::string model_id;
  std::string grid_fingerprint;
};

/// Requires 0 < t Lambda < pi/2 (RegimeError otherwise). `momentum_nodes`
/// sizes both the preimage bracketing sample and the momentum rule of the
/// second Hilbert-Schmidt route. A vanishing dQ/dp is reported as a
/// SingularityError naming the offending q_i.
KernelField assemble_kernel(const DensityGrid& grid, const ModelPair& model, const FlowSpec& spec,
                            int momentum_nodes);

struct HsNormReport {
  double position = 0.0;
  double momentum = 0.0;
  double relative_gap = 0.0;
};

/// Both Hilbert-Schmidt routes; throws ConsistencyError when they disagree by
/// more than 1e-3 (relative).
HsNormReport hs_norm_report(const KernelField& field);
/// The position-space value, after the consistency check.
double hs_norm(const KernelField& field, const DensityGrid& grid);

/// <h, K(q_i, .)> = sum over retained j of w_j K_ij h_j / f_j.
DensityVector kernel_apply(const KernelField& field, const DensityGrid& grid, const DensityVector& h);

/// max_ij |K_ij - K_ji| / max |K| over retained nodes.
double kernel_symmetry_residual(const KernelField& field, const DensityGrid& grid);

}  // namespace hmclab
