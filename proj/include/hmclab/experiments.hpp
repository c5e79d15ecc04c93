#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hmclab/config.hpp"

namespace hmclab {

/// What one CLI subcommand produced. `certificate` is written as
/// certificate.json; `passed` decides the exit code.
struct ExperimentOutcome {
  std::string name;
  bool passed = false;
  nlohmann::ordered_json certificate;
  std::vector<std::string> files;
  std::vector<std::string> warnings;
};

/// Trajectory CSV (s, Q, P, H, det J) from (q0, p0) over [0, time].
ExperimentOutcome run_flow(const RunConfig& cfg, const std::string& out_dir);
/// Assembles T and T^dagger, writes them in the binary matrix layout and
/// checks fixed point, mass, contraction, positivity, symmetry and duality.
ExperimentOutcome run_operator(const RunConfig& cfg, const std::string& out_dir);
/// Top-k eigenvalues, gap and leading vector.
ExperimentOutcome run_spectrum(const RunConfig& cfg, const std::string& out_dir);
/// Kernel tabulation and the Hilbert-Schmidt norm by both routes.
ExperimentOutcome run_kernel_norm(const RunConfig& cfg, const std::string& out_dir);
/// Iteration trace and rate certificate.
ExperimentOutcome run_convergence(const RunConfig& cfg, const std::string& out_dir);
/// HMC histogram against the operator fixed point.
ExperimentOutcome run_sampler_check(const RunConfig& cfg, const std::string& out_dir);

/// Closed-form second eigenvalue cos(t sqrt(u v)) for a one-dimensional
/// Gaussian pair with precisions u, v under the exact flow; NaN otherwise.
double gaussian_rate_oracle(const ModelPair& model, const FlowSpec& spec);

}  // namespace hmclab
