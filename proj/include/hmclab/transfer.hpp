#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hmclab/dynamics.hpp"
#include "hmclab/grid.hpp"
#include "hmclab/quadrature.hpp"

namespace hmclab {

struct LeakageReport {
  /// (node, momentum) pairs with f_i v_k >= 1e-14 max f max v.
  std::size_t significant_pairs = 0;
  /// Significant pairs whose image position left [-L, L]^d.
  std::size_t leaving_pairs = 0;
  /// Fraction of the phase-space mass f(q) g(p) on the grid whose image leaves the box.
  double leaked_mass_fraction = 0.0;
  std::string warning;
};

/// How the momentum integral of a row is turned into matrix entries.
///
/// preimage: change of variables p -> Q onto the grid nodes themselves,
///   T(i, j) = w_j g(P_ij) / |det dQ/dp|_ij summed over the momenta p_ij with
///   Q(q_i, p_ij) = q_j. This is the Nystrom form of the kernel; for an even
///   auxiliary and an energy-conserving flow w_i T_ij / f_i is symmetric to
///   the root-finding tolerance.
/// interpolated: m-node momentum quadrature, each image Q(q_i, p_k) deposited
///   through the cubic cardinal functions of GridInterpolator.
enum class DepositScheme { preimage, interpolated };

std::string to_string(DepositScheme scheme);
/// Accepts "preimage" and "interpolated". Throws ConfigError otherwise.
DepositScheme parse_deposit_scheme(const std::string& name);

/// Discretized transfer operator: (T h)(q_i) ~ sum_j entries(i, j) h_j.
struct TransferMatrix {
  Mat entries;
  FlowSpec spec;
  std::string model_id;
  std::string momentum_description;
  DepositScheme scheme = DepositScheme::preimage;
  std::string grid_fingerprint;
  /// "forward", "adjoint", or "symmetrized".
  std::string kind = "forward";
  LeakageReport leakage;
  std::vector<std::string> warnings;

  Eigen::Index size() const { return entries.rows(); }
};

/// Momentum quadrature of (T h)(q) = int (h g)(H(q, p)) dp, one row per node,
/// rows assembled in parallel. `momentum_nodes` is the rule size m for the
/// interpolated scheme and the bracketing sample count for the preimage scheme
/// (unused when the flow is affine). Leakage statistics always come from the
/// m-node momentum quadrature.
TransferMatrix assemble_transfer(const DensityGrid& grid, const ModelPair& model, const FlowSpec& spec,
                                 int momentum_nodes, DepositScheme scheme = DepositScheme::preimage);

/// Same construction with the inverse flow H^{-1}.
TransferMatrix assemble_adjoint(const DensityGrid& grid, const ModelPair& model, const FlowSpec& spec,
                                int momentum_nodes, DepositScheme scheme = DepositScheme::preimage);

/// The composition T^dagger T. Throws ConfigError on grid mismatch.
TransferMatrix symmetrize(const TransferMatrix& forward, const TransferMatrix& adjoint);

DensityVector apply(const TransferMatrix& op, const DensityVector& h);

/// Likelihood-space evaluation (T h)(q_i) = f_i * sum_k v_k g(p_k) (h/f)(Q(q_i, p_k)),
/// which relies on (f g) o H = f g and never divides at deposit time.
DensityVector apply_likelihood_form(const DensityGrid& grid, const ModelPair& model, const FlowSpec& spec,
                                    int momentum_nodes, const DensityVector& h);

/// Symmetric similarity form M = D T D^{-1}, D = diag(sqrt(w_i / f_i)),
/// restricted to the retained nodes (in grid order).
Mat weighted_similarity(const TransferMatrix& op, const DensityGrid& grid);

/// max |M_ij - M_ji| / max |M_ij| for the similarity form M. Zero exactly when
/// w_i T_ij / f_i is symmetric, i.e. when T is self-adjoint in <.,.>.
double weighted_symmetry_residual(const TransferMatrix& op, const DensityGrid& grid);

/// max over `pairs` seeded random (h, k) of |<T h, k> - <h, T^dagger k>| / (||h|| ||k||).
double adjoint_duality_residual(const TransferMatrix& forward, const TransferMatrix& adjoint,
                                const DensityGrid& grid, int pairs, std::uint64_t seed);

}  // namespace hmclab
