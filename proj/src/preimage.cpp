#include "hmclab/preimage.hpp"

#include <algorithm>
#include <cmath>

#include "hmclab/quadrature.hpp"
#include "hmclab/tangent.hpp"

namespace hmclab {

namespace {

std::vector<Preimage> affine_preimages(const DensityGrid& grid, const ModelPair& model, const FlowSpec& spec,
                                       const Vec& q, double signed_time, double window) {
  const int d = model.dim();
  const TangentResult base = integrate_tangent_signed(PhaseState{q, Vec::Zero(d)}, model, spec, signed_time);
  const Eigen::PartialPivLU<Mat> lu(base.blocks.dQdp);
  const JacobianDeterminants det = jacobian_determinants(base.blocks);
  const double v_min = model.auxiliary.eval(model.auxiliary.gaussian()->mean);

  std::vector<Preimage> out;
  const Vec q0 = base.state.q;
  const Vec p0 = base.state.p;
  for (Eigen::Index j = 0; j < grid.nodes.cols(); ++j) {
    Vec p = lu.solve(grid.nodes.col(j) - q0);
    if (model.auxiliary.eval(p) - v_min > window) continue;
    Vec P = p0 + base.blocks.dPdp * p;
    out.push_back(Preimage{j, std::move(p), std::move(P), det.Dq});
  }
  return out;
}

struct Sample {
  double Q;
  double dQ;
  double P;
};

Sample shoot(const ModelPair& model, const FlowSpec& spec, double q, double p, double signed_time) {
  const TangentResult r =
      integrate_tangent_signed(PhaseState{Vec::Constant(1, q), Vec::Constant(1, p)}, model, spec, signed_time);
  return {r.state.q[0], r.blocks.dQdp(0, 0), r.state.p[0]};
}

}  // namespace

std::vector<Preimage> grid_preimages(const DensityGrid& grid, const ModelPair& model, const FlowSpec& spec,
                                     const Vec& q, double signed_time, int samples, double potential_window) {
  if (spec.method == FlowMethod::exact_gaussian && model.both_gaussian())
    return affine_preimages(grid, model, spec, q, signed_time, potential_window);
  if (model.dim() != 1)
    throw ConfigError("grid_preimages: non-affine flows are only supported in one dimension");
  if (samples < 3) throw ConfigError("grid_preimages: need at least 3 momentum samples");

  const double reach = momentum_window(model.auxiliary, potential_window);
  const double dp = 2.0 * reach / (samples - 1);
  const double x = q[0];
  std::vector<double> ps(samples), Qs(samples);
  for (int k = 0; k < samples; ++k) {
    ps[k] = -reach + k * dp;
    Qs[k] = flow_signed(PhaseState{q, Vec::Constant(1, ps[k])}, model, spec, signed_time).q[0];
  }

  const double lo = grid.axis.front();
  const double h = grid.spacing;
  const auto n = static_cast<long>(grid.axis.size());
  std::vector<Preimage> out;
  for (int k = 0; k + 1 < samples; ++k) {
    const bool up = Qs[k + 1] >= Qs[k];
    const double a = std::min(Qs[k], Qs[k + 1]);
    const double b = std::max(Qs[k], Qs[k + 1]);
    long j0 = std::max(0L, static_cast<long>(std::floor((a - lo) / h)) - 1);
    long j1 = std::min(n - 1, static_cast<long>(std::ceil((b - lo) / h)) + 1);
    for (long j = j0; j <= j1; ++j) {
      const double target = grid.axis[j];
      // Half-open in p: the root may sit at p_k but not at p_{k+1}.
      const bool inside = up ? (target >= Qs[k] && target < Qs[k + 1]) : (target <= Qs[k] && target > Qs[k + 1]);
      if (!inside) continue;

      double pa = ps[k], pb = ps[k + 1];
      double fa = Qs[k] - target;
      const double span = Qs[k + 1] - Qs[k];
      double p = span != 0.0 ? pa + (pb - pa) * (target - Qs[k]) / span : pa;
      Sample s = shoot(model, spec, x, p, signed_time);
      const double tol = 1e-13 * (1.0 + std::abs(target));
      for (int it = 0; it < 100 && std::abs(s.Q - target) > tol; ++it) {
        const double f = s.Q - target;
        if ((f < 0.0) == (fa < 0.0)) {
          pa = p;
          fa = f;
        } else {
          pb = p;
        }
        double next = s.dQ != 0.0 ? p - f / s.dQ : 0.5 * (pa + pb);
        if (!(next > std::min(pa, pb) && next < std::max(pa, pb))) next = 0.5 * (pa + pb);
        if (std::abs(pb - pa) < 1e-15 * (1.0 + std::abs(p))) break;
        p = next;
        s = shoot(model, spec, x, p, signed_time);
      }
      if (s.dQ == 0.0) throw SingularityError("grid_preimages: dQ/dp vanishes at a preimage (conjugate point)");
      out.push_back(Preimage{j, Vec::Constant(1, p), Vec::Constant(1, s.P), 1.0 / std::abs(s.dQ)});
    }
  }
  return out;
}

}  // namespace hmclab
