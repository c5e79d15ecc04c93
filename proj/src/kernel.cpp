#include "hmclab/kernel.hpp"

#include <cmath>
#include <sstream>

#include "hmclab/interpolation.hpp"
#include "hmclab/preimage.hpp"
#include "hmclab/tangent.hpp"

namespace hmclab {

KernelField assemble_kernel(const DensityGrid& grid, const ModelPair& model, const FlowSpec& spec,
                            int momentum_nodes) {
  validate(spec, model);
  require_small_time(model, spec.time, "assemble_kernel");
  if (grid.dim != model.dim()) throw ConfigError("assemble_kernel: grid and model dimensions differ");
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double log_z = log_auxiliary_normalizer(model.auxiliary);
  const MomentumQuadrature quad = build_momentum_quadrature(model.auxiliary, momentum_nodes);
  const GridInterpolator interp(grid);

  KernelField out;
  out.spec = spec;
  out.model_id = model.describe();
  out.grid_fingerprint = grid.fingerprint();
  out.values = Mat::Zero(n, n);
  double momentum_route = 0.0;
  std::string failure;

#pragma omp parallel for schedule(dynamic, 8) reduction(+ : momentum_route)
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec q = grid.nodes.col(i);
    try {
      for (const Preimage& pre : grid_preimages(grid, model, spec, q, spec.time, momentum_nodes))
        out.values(i, pre.node) +=
            grid.target_values[pre.node] * std::exp(-model.auxiliary.eval(pre.P) - log_z) * pre.jacobian;
      if (!grid.retained[i]) continue;
      GridInterpolator::Stencil st;
      double row = 0.0;
      for (std::size_t k = 0; k < quad.size(); ++k) {
        const TangentResult r = integrate_tangent(PhaseState{q, quad.nodes[k]}, model, spec);
        // Same region as the position route: both ends on retained nodes.
        if (!interp.stencil(r.state.q, st) || density_value(model.target, r.state.q) < grid.floor) continue;
        const double dq = jacobian_determinants(r.blocks).Dq;
        row += quad.probabilities[k] * std::exp(-model.auxiliary.eval(r.state.p) - log_z) * dq;
      }
      momentum_route += grid.weights[i] * row;
    } catch (const SingularityError& e) {
      std::ostringstream os;
      os << e.what() << " (start position q =";
      for (Eigen::Index k = 0; k < q.size(); ++k) os << ' ' << q[k];
      os << ")";
#pragma omp critical
      failure = os.str();
    }
  }
  if (!failure.empty()) throw SingularityError(failure);

  double position_route = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!grid.retained[i]) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!grid.retained[j]) continue;
      const double k = out.values(i, j);
      position_route += grid.weights[i] * grid.weights[j] * k * k / (grid.target_values[i] * grid.target_values[j]);
    }
  }
  out.hs_norm_sq = position_route;
  out.hs_norm_sq_momentum = momentum_route;
  return out;
}

HsNormReport hs_norm_report(const KernelField& field) {
  HsNormReport r{field.hs_norm_sq, field.hs_norm_sq_momentum, 0.0};
  r.relative_gap = std::abs(r.position - r.momentum) / std::max(std::abs(r.position), 1e-300);
  if (r.relative_gap > 1e-3) {
    std::ostringstream os;
    os.precision(17);
    os << "hs_norm: position-space value " << r.position << " and momentum-space value " << r.momentum
       << " disagree (relative gap " << r.relative_gap << ")";
    throw ConsistencyError(os.str());
  }
  return r;
}

double hs_norm(const KernelField& field, const DensityGrid& grid) {
  if (field.grid_fingerprint != grid.fingerprint()) throw ConfigError("hs_norm: kernel was built on another grid");
  return hs_norm_report(field).position;
}

DensityVector kernel_apply(const KernelField& field, const DensityGrid& grid, const DensityVector& h) {
  if (h.size() != field.values.cols()) throw ConfigError("kernel_apply: vector size does not match kernel");
  Vec likelihood = Vec::Zero(h.size());
  for (Eigen::Index j = 0; j < h.size(); ++j)
    if (grid.retained[j]) likelihood[j] = grid.weights[j] * h[j] / grid.target_values[j];
  return field.values * likelihood;
}

double kernel_symmetry_residual(const KernelField& field, const DensityGrid& grid) {
  double worst = 0.0;
  double scale = 0.0;
  const auto n = field.values.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!grid.retained[i]) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!grid.retained[j]) continue;
      scale = std::max(scale, std::abs(field.values(i, j)));
      worst = std::max(worst, std::abs(field.values(i, j) - field.values(j, i)));
    }
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

}  // namespace hmclab
