#include "hmclab/probes.hpp"

#include <cmath>
#include <numbers>

namespace hmclab {

namespace {

DensityVector cosine_likelihood(const DensityGrid& grid, std::mt19937_64& rng, double constant,
                                double amplitude_budget) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int kModes = 3;
  const int d = grid.dim;
  std::vector<Vec> freq(kModes, Vec(d));
  std::vector<double> phase(kModes), amp(kModes);
  double amp_total = 0.0;
  for (int m = 0; m < kModes; ++m) {
    for (int k = 0; k < d; ++k) freq[m][k] = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.3 + 1.7 * unit(rng));
    phase[m] = 2.0 * std::numbers::pi * unit(rng);
    amp[m] = (unit(rng) < 0.5 ? -1.0 : 1.0) * unit(rng);
    amp_total += std::abs(amp[m]);
  }
  const double scale = amp_total > 0.0 ? amplitude_budget / amp_total : 0.0;
  DensityVector h(grid.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    const Vec q = grid.nodes.col(i);
    double ell = constant;
    for (int m = 0; m < kModes; ++m) ell += scale * amp[m] * std::cos(freq[m].dot(q) + phase[m]);
    h[i] = grid.target_values[i] * ell;
  }
  return h;
}

}  // namespace

DensityVector random_density(const DensityGrid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> budget(0.1, 0.9);
  const double b = budget(rng);
  return cosine_likelihood(grid, rng, 1.0, b);
}

DensityVector random_signed(const DensityGrid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  const double constant = c(rng);
  return cosine_likelihood(grid, rng, constant, 1.0);
}

DensityVector remove_mass(const DensityVector& h, const DensityGrid& grid) {
  const double alpha = mass(h, grid) / mass(grid.target_values, grid);
  return h - alpha * grid.target_values;
}

DensityVector tilted_target(const DensityGrid& grid, const Vec& shift) {
  DensityVector h(grid.size());
  const double s2 = shift.squaredNorm();
  for (Eigen::Index i = 0; i < h.size(); ++i)
    h[i] = grid.target_values[i] * std::exp(shift.dot(grid.nodes.col(i)) - 0.5 * s2);
  return h;
}

}  // namespace hmclab
