#pragma once

#include <cstdint>
#include <string>

#include "hmclab/dynamics.hpp"
#include "hmclab/transfer.hpp"

namespace hmclab {

/// Resolved experiment configuration. Files are INI-style:
///
///   [model]      target = gaussian|anharmonic, dim, target_mean, target_precision,
///                anharmonic_a, anharmonic_b, auxiliary_mean, auxiliary_precision,
///                halfwidth
///   [flow]       time, method = exact|leapfrog, steps (0 = default step rule)
///   [grid]       n
///   [operator]   momentum_nodes, scheme = preimage|interpolated
///   [experiment] see the field list below
///
/// Vectors and matrices are comma-separated (row-major); a single number for
/// a precision means that multiple of the identity. Unknown sections or keys
/// are errors.
struct RunConfig {
  // [model]
  std::string target = "gaussian";
  int dim = 1;
  std::string target_mean = "0";
  std::string target_precision = "1";
  double anharmonic_a = 1.0;
  double anharmonic_b = 0.5;
  std::string auxiliary_mean = "0";
  std::string auxiliary_precision = "1";
  double halfwidth = 8.0;
  // [flow]
  double time = 0.7;
  std::string method = "exact";
  int steps = 0;
  // [grid]
  int n = 401;
  // [operator]
  int momentum_nodes = 257;
  std::string scheme = "preimage";
  // [experiment]
  int eigen_k = 6;
  int max_iterations = 400;
  double tolerance = 1e-12;
  /// shifted (f translated by `shift` via tilting), target, or random.
  std::string initial = "shifted";
  double shift = 1.0;
  long samples = 1000000;
  long burn_in = 1000;
  int bins = 100;
  double q0 = 1.0;
  double p0 = 0.0;
  int trajectory_points = 100;

  std::uint64_t seed = 1;
  int threads = 0;
};

/// Throws ConfigError naming the offending section.key.
RunConfig load_config(const std::string& path);
RunConfig default_config();

/// Builds and validates the model pair described by the config.
ModelPair build_model(const RunConfig& cfg);
/// Flow spec with the default step rule when steps == 0.
FlowSpec build_flow_spec(const RunConfig& cfg, const ModelPair& model);
DepositScheme build_scheme(const RunConfig& cfg);

/// The full resolved configuration as INI text (used in manifests).
std::string echo(const RunConfig& cfg);

}  // namespace hmclab
