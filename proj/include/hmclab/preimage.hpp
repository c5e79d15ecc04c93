#pragma once

#include <vector>

#include "hmclab/dynamics.hpp"
#include "hmclab/grid.hpp"

namespace hmclab {

/// One solution p of Q(q, p) = q_j for a fixed start q and grid node j.
struct Preimage {
  Eigen::Index node = 0;
  Vec p;
  /// Momentum at the end of the flow.
  Vec P;
  /// 1 / |det dQ/dp| at the solution.
  double jacobian = 0.0;
};

/// Momentum-space change of variables onto the grid.
///
/// For every grid node Q_j, finds all momenta p with Q(q, p) = Q_j under the
/// flow of `signed_time`, restricted to the momenta where the auxiliary
/// potential lies within `potential_window` of its minimum. For a Gaussian
/// pair under the exact flow the map p -> Q is affine and is inverted
/// directly in any dimension. Otherwise d must be 1: the momentum window is
/// sampled at `samples` points, the sign changes of Q(q, p) - Q_j are
/// bracketed, and each root is polished by safeguarded Newton on the tangent
/// flow to |dQ| < 1e-13 (1 + |Q_j|).
std::vector<Preimage> grid_preimages(const DensityGrid& grid, const ModelPair& model, const FlowSpec& spec,
                                     const Vec& q, double signed_time, int samples,
                                     double potential_window = 50.0);

}  // namespace hmclab
