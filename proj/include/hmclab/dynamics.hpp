#pragma once

#include <span>
#include <string>

#include "hmclab/distributions.hpp"

namespace hmclab {

/// A point (q, p) of phase space.
struct PhaseState {
  Vec q;
  Vec p;
};

enum class FlowMethod { exact_gaussian, leapfrog };

std::string to_string(FlowMethod method);
/// Accepts "exact_gaussian"/"exact" and "leapfrog". Throws ConfigError otherwise.
FlowMethod parse_flow_method(const std::string& name);

/// Hamiltonian flow for a fixed time. For leapfrog, n_steps velocity-Verlet
/// substeps of size time / n_steps are taken; exact_gaussian ignores n_steps.
struct FlowSpec {
  double time = 1.0;
  int n_steps = 1;
  FlowMethod method = FlowMethod::leapfrog;
};

/// Smallest n_steps with time / n_steps <= 0.01 * min(1, 1/sqrt(Lambda)).
int default_steps(const ModelPair& model, double time);
FlowSpec default_flow_spec(const ModelPair& model, double time, FlowMethod method);

/// Throws ConfigError for t <= 0, n_steps < 1, or exact_gaussian on a
/// non-Gaussian model.
void validate(const FlowSpec& spec, const ModelPair& model);

/// H(q, p) = U(q) + V(p).
double total_energy(const PhaseState& state, const ModelPair& model);

/// (Q, P) = H_t(q, p).
PhaseState flow(const PhaseState& state, const ModelPair& model, const FlowSpec& spec);

/// H_t^{-1}, realized by running the same method backwards in time.
PhaseState inverse_flow(const PhaseState& state, const ModelPair& model, const FlowSpec& spec);

/// Flow for a signed time; negative time runs backwards.
PhaseState flow_signed(const PhaseState& state, const ModelPair& model, const FlowSpec& spec,
                       double signed_time);

/// max over states of || tau(H^{-1}(tau(s))) - H(s) ||_inf with tau(q,p) = (q,-p).
/// Throws ConfigError when the auxiliary potential is not even.
double momentum_flip_conjugacy_residual(const ModelPair& model, const FlowSpec& spec,
                                        std::span<const PhaseState> states);

}  // namespace hmclab
