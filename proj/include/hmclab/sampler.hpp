#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hmclab/dynamics.hpp"
#include "hmclab/grid.hpp"

namespace hmclab {

struct SamplerOptions {
  long samples = 0;
  long burn_in = 1000;
  int bins = 100;
  std::uint64_t seed = 1;
};

/// Histogram of an HMC chain against a reference density on the grid.
struct SamplerReport {
  long samples = 0;
  long accepted = 0;
  double acceptance_rate = 0.0;
  std::vector<double> bin_edges;
  /// Fraction of samples per bin (mass normalization, sums to <= 1).
  std::vector<double> empirical_mass;
  /// Reference mass per bin, from the cubic interpolant of the reference density.
  std::vector<double> reference_mass;
  /// max_b |empirical_mass - reference_mass|.
  double sup_distance = 0.0;
  /// Same with both sides divided by the bin width (density normalization).
  double sup_distance_density = 0.0;
  /// Samples that fell outside [-L, L].
  long outside = 0;
  std::vector<std::string> warnings;
};

/// One-dimensional HMC: momentum refresh from the (Gaussian) auxiliary, one
/// flow of `spec`, Metropolis accept/reject on the total energy. The chain
/// starts at the target mode, discards `burn_in` steps and histograms the
/// next `samples` positions into `bins` equal bins on [-L, L]. `reference`
/// is a density vector on `grid` (typically the operator's fixed point).
SamplerReport run_sampler(const ModelPair& model, const FlowSpec& spec, const DensityGrid& grid,
                          const DensityVector& reference, const SamplerOptions& options);

}  // namespace hmclab
