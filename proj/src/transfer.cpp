#include "hmclab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hmclab/interpolation.hpp"
#include "hmclab/preimage.hpp"
#include "hmclab/probes.hpp"

namespace hmclab {

std::string to_string(DepositScheme scheme) {
  return scheme == DepositScheme::preimage ? "preimage" : "interpolated";
}

DepositScheme parse_deposit_scheme(const std::string& name) {
  if (name == "preimage") return DepositScheme::preimage;
  if (name == "interpolated") return DepositScheme::interpolated;
  throw ConfigError("operator.scheme: unknown deposit scheme '" + name + "'");
}

namespace {

TransferMatrix assemble(const DensityGrid& grid, const ModelPair& model, const FlowSpec& spec,
                        int momentum_nodes, DepositScheme scheme, bool inverse) {
  validate(spec, model);
  if (grid.dim != model.dim()) throw ConfigError("assemble_transfer: grid and model dimensions differ");
  const MomentumQuadrature quad = build_momentum_quadrature(model.auxiliary, momentum_nodes);
  const GridInterpolator interp(grid);
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto m = quad.size();
  const double signed_time = inverse ? -spec.time : spec.time;
  const double log_z = log_auxiliary_normalizer(model.auxiliary);

  const double max_prob = *std::max_element(quad.probabilities.begin(), quad.probabilities.end());
  const double max_f = grid.target_values.maxCoeff();

  TransferMatrix out;
  out.spec = spec;
  out.model_id = model.describe();
  out.momentum_description = quad.description;
  out.scheme = scheme;
  out.grid_fingerprint = grid.fingerprint();
  out.kind = inverse ? "adjoint" : "forward";

  // Column i of rows_t holds row i of the operator.
  Mat rows_t = Mat::Zero(n, n);
  std::size_t sig_pairs = 0;
  std::size_t leaving = 0;
  double leaked = 0.0;
  double total_mass = 0.0;

#pragma omp parallel for schedule(dynamic, 8) reduction(+ : sig_pairs, leaving, leaked, total_mass)
  for (Eigen::Index i = 0; i < n; ++i) {
    GridInterpolator::Stencil st;
    const Vec q = grid.nodes.col(i);
    const double fw = grid.weights[i] * grid.target_values[i];
    total_mass += fw;
    for (std::size_t k = 0; k < m; ++k) {
      const PhaseState image = flow_signed(PhaseState{q, quad.nodes[k]}, model, spec, signed_time);
      const double weight = quad.deposit_weight(k, model.auxiliary.eval(image.p));
      const bool counted = grid.target_values[i] * quad.probabilities[k] >= 1e-14 * max_f * max_prob;
      if (counted) ++sig_pairs;
      if (!interp.stencil(image.q, st)) {
        if (counted) ++leaving;
        // Phase-space mass f(q) g(p) dq dp carried out of the box.
        leaked += fw * quad.probabilities[k];
        continue;
      }
      if (scheme != DepositScheme::interpolated || weight == 0.0) continue;
      for (const auto& [j, wj] : st) rows_t(j, i) += weight * wj;
    }
    if (scheme == DepositScheme::preimage) {
      for (const Preimage& pre : grid_preimages(grid, model, spec, q, signed_time, momentum_nodes))
        rows_t(pre.node, i) +=
            grid.weights[pre.node] * std::exp(-model.auxiliary.eval(pre.P) - log_z) * pre.jacobian;
    }
  }
  out.entries = rows_t.transpose();

  out.leakage.significant_pairs = sig_pairs;
  out.leakage.leaving_pairs = leaving;
  out.leakage.leaked_mass_fraction = total_mass > 0.0 ? leaked / total_mass : 0.0;
  const double leaving_fraction = sig_pairs ? static_cast<double>(leaving) / sig_pairs : 0.0;
  if (leaving_fraction > 1e-3) {
    std::ostringstream os;
    os << "domain truncation: " << leaving << " of " << sig_pairs
       << " significant (node, momentum) pairs left the box; leaked f-mass fraction "
       << out.leakage.leaked_mass_fraction;
    out.leakage.warning = os.str();
    out.warnings.push_back(out.leakage.warning);
  }
  if (!(spec.time * model.Lambda() < std::numbers::pi / 2)) {
    std::ostringstream os;
    os << "t*Lambda = " << spec.time * model.Lambda()
       << " is outside the small-time regime (pi/2); kernel and determinant bounds do not apply";
    out.warnings.push_back(os.str());
  }
  return out;
}

}  // namespace

TransferMatrix assemble_transfer(const DensityGrid& grid, const ModelPair& model, const FlowSpec& spec,
                                 int momentum_nodes, DepositScheme scheme) {
  return assemble(grid, model, spec, momentum_nodes, scheme, false);
}

TransferMatrix assemble_adjoint(const DensityGrid& grid, const ModelPair& model, const FlowSpec& spec,
                                int momentum_nodes, DepositScheme scheme) {
  return assemble(grid, model, spec, momentum_nodes, scheme, true);
}

TransferMatrix symmetrize(const TransferMatrix& forward, const TransferMatrix& adjoint) {
  if (forward.grid_fingerprint != adjoint.grid_fingerprint || forward.size() != adjoint.size())
    throw ConfigError("symmetrize: operators live on different grids (" + forward.grid_fingerprint +
                      " vs " + adjoint.grid_fingerprint + ")");
  TransferMatrix out = forward;
  out.entries = adjoint.entries * forward.entries;
  out.kind = "symmetrized";
  for (const auto& w : adjoint.warnings) out.warnings.push_back(w);
  return out;
}

DensityVector apply(const TransferMatrix& op, const DensityVector& h) {
  if (h.size() != op.size()) throw ConfigError("apply: vector size does not match operator");
  return op.entries * h;
}

DensityVector apply_likelihood_form(const DensityGrid& grid, const ModelPair& model, const FlowSpec& spec,
                                    int momentum_nodes, const DensityVector& h) {
  validate(spec, model);
  const MomentumQuadrature quad = build_momentum_quadrature(model.auxiliary, momentum_nodes);
  const GridInterpolator interp(grid);
  DensityVector likelihood = DensityVector::Zero(h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i)
    if (grid.retained[i]) likelihood[i] = h[i] / grid.target_values[i];

  DensityVector out(h.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    const Vec q = grid.nodes.col(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < quad.size(); ++k) {
      const PhaseState image = flow(PhaseState{q, quad.nodes[k]}, model, spec);
      acc += quad.probabilities[k] * interp.evaluate(likelihood, image.q);
    }
    out[i] = grid.target_values[i] * acc;
  }
  return out;
}

Mat weighted_similarity(const TransferMatrix& op, const DensityGrid& grid) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < op.size(); ++i)
    if (grid.retained[i]) keep.push_back(i);
  const auto r = static_cast<Eigen::Index>(keep.size());
  Vec scale(r);
  for (Eigen::Index a = 0; a < r; ++a)
    scale[a] = std::sqrt(grid.weights[keep[a]] / grid.target_values[keep[a]]);
  Mat out(r, r);
  for (Eigen::Index b = 0; b < r; ++b)
    for (Eigen::Index a = 0; a < r; ++a) out(a, b) = scale[a] * op.entries(keep[a], keep[b]) / scale[b];
  return out;
}

double weighted_symmetry_residual(const TransferMatrix& op, const DensityGrid& grid) {
  const Mat sim = weighted_similarity(op, grid);
  const double scale = sim.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (sim - sim.transpose()).cwiseAbs().maxCoeff() / scale;
}

double adjoint_duality_residual(const TransferMatrix& forward, const TransferMatrix& adjoint,
                                const DensityGrid& grid, int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int c = 0; c < pairs; ++c) {
    const DensityVector h = random_signed(grid, rng);
    const DensityVector k = random_signed(grid, rng);
    const double lhs = weighted_inner(apply(forward, h), k, grid);
    const double rhs = weighted_inner(h, apply(adjoint, k), grid);
    const double scale = weighted_norm(h, grid) * weighted_norm(k, grid);
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

}  // namespace hmclab
