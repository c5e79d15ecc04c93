#include "hmclab/tangent.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hmclab {

namespace {

// Same recursion as the general path, in scalars.
TangentResult leapfrog_tangent_1d(const PhaseState& state, const ModelPair& model, int n, double t) {
  const double eps = t / n;
  const double half = 0.5 * eps;
  double q = state.q[0];
  double p = state.p[0];
  double qq = 1.0, qp = 0.0, pq = 0.0, pp = 1.0;
  double u_hess = model.target.hess1(q);
  double v_hess = model.auxiliary.hess1(p);
  double u_sum = 0.0, v_sum = 0.0;
  double force = model.target.grad1(q);
  for (int k = 0; k < n; ++k) {
    const double u_prev = u_hess;
    const double v_prev = v_hess;
    p -= half * force;
    pq -= half * u_hess * qq;
    pp -= half * u_hess * qp;
    const double vh = model.auxiliary.hess1(p);
    qq += eps * vh * pq;
    qp += eps * vh * pp;
    q += eps * model.auxiliary.grad1(p);
    force = model.target.grad1(q);
    u_hess = model.target.hess1(q);
    p -= half * force;
    pq -= half * u_hess * qq;
    pp -= half * u_hess * qp;
    v_hess = model.auxiliary.hess1(p);
    u_sum += std::abs(half) * (u_prev + u_hess);
    v_sum += std::abs(half) * (v_prev + v_hess);
  }
  TangentResult out;
  out.state = PhaseState{Vec::Constant(1, q), Vec::Constant(1, p)};
  out.blocks.dQdq = Mat::Constant(1, 1, qq);
  out.blocks.dQdp = Mat::Constant(1, 1, qp);
  out.blocks.dPdq = Mat::Constant(1, 1, pq);
  out.blocks.dPdp = Mat::Constant(1, 1, pp);
  out.averages = RunningAverages{Mat::Constant(1, 1, u_sum / std::abs(t)), Mat::Constant(1, 1, v_sum / std::abs(t)), t};
  return out;
}

}  // namespace

TangentResult integrate_tangent(const PhaseState& state, const ModelPair& model, const FlowSpec& spec) {
  return integrate_tangent_signed(state, model, spec, spec.time);
}

TangentResult integrate_tangent_signed(const PhaseState& state, const ModelPair& model, const FlowSpec& spec,
                                       double signed_time) {
  validate(FlowSpec{std::abs(signed_time), spec.n_steps, spec.method}, model);
  const int d = model.dim();
  const double t = signed_time;

  if (spec.method == FlowMethod::exact_gaussian) {
    RunningAverages avg{model.target.gaussian()->precision, model.auxiliary.gaussian()->precision, t};
    TangentBlocks blocks = block_exponential(avg);
    return {flow_signed(state, model, spec, t), std::move(blocks), std::move(avg)};
  }

  const int n = spec.n_steps;
  const double eps = t / n;
  const double half = 0.5 * eps;
  if (d == 1) return leapfrog_tangent_1d(state, model, n, t);

  PhaseState s = state;
  // Rows of the tangent map: jq = d q_k / d(q0, p0), jp = d p_k / d(q0, p0).
  Mat jq(d, 2 * d);
  Mat jp(d, 2 * d);
  jq << Mat::Identity(d, d), Mat::Zero(d, d);
  jp << Mat::Zero(d, d), Mat::Identity(d, d);

  Mat u_hess = model.target.hess(s.q);
  Mat v_hess = model.auxiliary.hess(s.p);
  Mat u_sum = Mat::Zero(d, d);
  Mat v_sum = Mat::Zero(d, d);
  Vec force = model.target.grad(s.q);

  for (int k = 0; k < n; ++k) {
    const Mat u_prev = u_hess;
    const Mat v_prev = v_hess;

    s.p -= half * force;
    jp -= half * u_hess * jq;

    jq += eps * model.auxiliary.hess(s.p) * jp;
    s.q += eps * model.auxiliary.grad(s.p);

    force = model.target.grad(s.q);
    u_hess = model.target.hess(s.q);
    s.p -= half * force;
    jp -= half * u_hess * jq;

    v_hess = model.auxiliary.hess(s.p);
    u_sum += std::abs(half) * (u_prev + u_hess);
    v_sum += std::abs(half) * (v_prev + v_hess);
  }

  TangentResult out;
  out.state = std::move(s);
  out.blocks.dQdq = jq.leftCols(d);
  out.blocks.dQdp = jq.rightCols(d);
  out.blocks.dPdq = jp.leftCols(d);
  out.blocks.dPdp = jp.rightCols(d);
  out.averages = RunningAverages{u_sum / std::abs(t), v_sum / std::abs(t), t};
  return out;
}

JacobianDeterminants jacobian_determinants(const TangentBlocks& blocks) {
  const double det_qp = blocks.dQdp.determinant();
  const double det_pq = blocks.dPdq.determinant();
  if (!(std::abs(det_qp) >= 1e-14)) {
    std::ostringstream os;
    os << "jacobian_determinants: dQ/dp is singular (det " << det_qp
       << "); the flow time is at or beyond a conjugate point";
    throw SingularityError(os.str());
  }
  if (!(std::abs(det_pq) >= 1e-14)) {
    std::ostringstream os;
    os << "jacobian_determinants: dP/dq is singular (det " << det_pq
       << "); the flow time is at or beyond a conjugate point";
    throw SingularityError(os.str());
  }
  return {1.0 / std::abs(det_qp), 1.0 / std::abs(det_pq)};
}

void require_small_time(const ModelPair& model, double t, const char* who) {
  const double x = t * model.Lambda();
  if (!(t > 0.0) || !(x < std::numbers::pi / 2)) {
    std::ostringstream os;
    os << who << ": requires 0 < t*Lambda < pi/2, got t=" << t << ", Lambda=" << model.Lambda()
       << " (t*Lambda=" << x << ")";
    throw RegimeError(os.str());
  }
}

DeterminantBounds determinant_bounds(const ModelPair& model, double t) {
  require_small_time(model, t, "determinant_bounds");
  const double two_d = 2.0 * model.dim();
  return {std::pow(t * model.Lambda(), -two_d), std::pow(t * sinc(t * model.lambda()), -two_d)};
}

}  // namespace hmclab
