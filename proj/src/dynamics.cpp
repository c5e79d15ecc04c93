#include "hmclab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "hmclab/matrix_functions.hpp"

namespace hmclab {

std::string to_string(FlowMethod method) {
  switch (method) {
    case FlowMethod::exact_gaussian:
      return "exact_gaussian";
    case FlowMethod::leapfrog:
      return "leapfrog";
  }
  return "unknown";
}

FlowMethod parse_flow_method(const std::string& name) {
  if (name == "exact_gaussian" || name == "exact") return FlowMethod::exact_gaussian;
  if (name == "leapfrog") return FlowMethod::leapfrog;
  throw ConfigError("flow.method: unknown method '" + name + "'");
}

int default_steps(const ModelPair& model, double time) {
  const double max_step = 0.01 * std::min(1.0, 1.0 / std::sqrt(model.Lambda()));
  return std::max(1, static_cast<int>(std::ceil(std::abs(time) / max_step - 1e-9)));
}

FlowSpec default_flow_spec(const ModelPair& model, double time, FlowMethod method) {
  return FlowSpec{time, default_steps(model, time), method};
}

void validate(const FlowSpec& spec, const ModelPair& model) {
  if (!(spec.time > 0.0) || !std::isfinite(spec.time))
    throw ConfigError("flow.time must be a positive finite number");
  if (spec.n_steps < 1) throw ConfigError("flow.steps must be >= 1");
  if (spec.method == FlowMethod::exact_gaussian && !model.both_gaussian())
    throw ConfigError("flow.method: exact_gaussian requires Gaussian target and auxiliary");
}

double total_energy(const PhaseState& state, const ModelPair& model) {
  return model.target.eval(state.q) + model.auxiliary.eval(state.p);
}

namespace {

PhaseState exact_gaussian_flow(const PhaseState& s, const ModelPair& model, double t) {
  const GaussianFamily& u = *model.target.gaussian();
  const GaussianFamily& v = *model.auxiliary.gaussian();
  // Linear system d/dt (Q-mu, P-nu) = [0 B; -A 0] (Q-mu, P-nu).
  const TangentBlocks e = block_exponential(RunningAverages{u.precision, v.precision, t});
  const Vec dq = s.q - u.mean;
  const Vec dp = s.p - v.mean;
  return {u.mean + e.dQdq * dq + e.dQdp * dp, v.mean + e.dPdq * dq + e.dPdp * dp};
}

PhaseState leapfrog_flow(PhaseState s, const ModelPair& model, double t, int n_steps) {
  const double eps = t / n_steps;
  const double half = 0.5 * eps;
  if (model.dim() == 1) {
    double q = s.q[0];
    double p = s.p[0];
    double force = model.target.grad1(q);
    for (int k = 0; k < n_steps; ++k) {
      p -= half * force;
      q += eps * model.auxiliary.grad1(p);
      force = model.target.grad1(q);
      p -= half * force;
    }
    s.q[0] = q;
    s.p[0] = p;
    return s;
  }
  Vec force = model.target.grad(s.q);
  for (int k = 0; k < n_steps; ++k) {
    s.p -= half * force;
    s.q += eps * model.auxiliary.grad(s.p);
    force = model.target.grad(s.q);
    s.p -= half * force;
  }
  return s;
}

}  // namespace

PhaseState flow_signed(const PhaseState& state, const ModelPair& model, const FlowSpec& spec,
                       double signed_time) {
  validate(FlowSpec{std::abs(signed_time), spec.n_steps, spec.method}, model);
  if (state.q.size() != model.dim() || state.p.size() != model.dim())
    throw ConfigError("flow: state dimension does not match the model");
  if (spec.method == FlowMethod::exact_gaussian) return exact_gaussian_flow(state, model, signed_time);
  return leapfrog_flow(state, model, signed_time, spec.n_steps);
}

PhaseState flow(const PhaseState& state, const ModelPair& model, const FlowSpec& spec) {
  return flow_signed(state, model, spec, spec.time);
}

PhaseState inverse_flow(const PhaseState& state, const ModelPair& model, const FlowSpec& spec) {
  return flow_signed(state, model, spec, -spec.time);
}

double momentum_flip_conjugacy_residual(const ModelPair& model, const FlowSpec& spec,
                                        std::span<const PhaseState> states) {
  if (!model.auxiliary_even)
    throw ConfigError("momentum_flip_conjugacy_residual: auxiliary density is not even");
  double worst = 0.0;
  for (const auto& s : states) {
    const PhaseState forward = flow(s, model, spec);
    PhaseState back = inverse_flow(PhaseState{s.q, -s.p}, model, spec);
    back.p = -back.p;
    worst = std::max({worst, (back.q - forward.q).cwiseAbs().maxCoeff(),
                      (back.p - forward.p).cwiseAbs().maxCoeff()});
  }
  return worst;
}

}  // namespace hmclab
