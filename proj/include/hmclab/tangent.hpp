#pragma once

#include "hmclab/dynamics.hpp"
#include "hmclab/matrix_functions.hpp"

namespace hmclab {

struct TangentResult {
  PhaseState state;
  TangentBlocks blocks;
  RunningAverages averages;
};

/// Co-integrates the flow with its variational equation.
///
/// For leapfrog the blocks are the exact derivatives of the discrete map
/// (chain rule through each substep) and the running averages use the
/// trapezoid rule over the substep Hessians. For exact_gaussian the blocks come
/// from block_exponential with the constant Hessians.
TangentResult integrate_tangent(const PhaseState& state, const ModelPair& model, const FlowSpec& spec);
/// Same for a signed time; negative time differentiates the inverse flow.
TangentResult integrate_tangent_signed(const PhaseState& state, const ModelPair& model, const FlowSpec& spec,
                                       double signed_time);

struct JacobianDeterminants {
  double Dq;  ///< 1 / |det dQ/dp|
  double Dp;  ///< 1 / |det dP/dq|
};

/// Throws SingularityError naming the block when |det| < 1e-14.
JacobianDeterminants jacobian_determinants(const TangentBlocks& blocks);

struct DeterminantBounds {
  double lower;  ///< (t Lambda)^{-2d}
  double upper;  ///< (t sinc(t lambda))^{-2d}
};

/// Bounds on Dq * Dp valid for 0 < t Lambda < pi/2. Throws RegimeError outside.
DeterminantBounds determinant_bounds(const ModelPair& model, double t);

/// Throws RegimeError unless 0 < t * Lambda < pi/2.
void require_small_time(const ModelPair& model, double t, const char* who);

}  // namespace hmclab
