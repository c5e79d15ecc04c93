#include "hmclab/grid.hpp"

#include <cmath>
#include <sstream>

namespace hmclab {

namespace {

/// Trapezoid integral of exp(-U) over [-L, L]^d with n points per axis.
double trapezoid_target_integral(const ModelPair& model, int n) {
  const int d = model.dim();
  const double L = model.domain_halfwidth;
  const double h = 2.0 * L / (n - 1);
  std::size_t count = 1;
  for (int k = 0; k < d; ++k) count *= static_cast<std::size_t>(n);
  std::vector<int> idx(d, 0);
  double total = 0.0;
  Vec x(d);
  for (std::size_t c = 0; c < count; ++c) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      x[k] = -L + idx[k] * h;
      w *= (idx[k] == 0 || idx[k] == n - 1) ? 0.5 * h : h;
    }
    total += w * density_value(model.target, x);
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] < n) break;
      idx[k] = 0;
    }
  }
  return total;
}

}  // namespace

std::size_t DensityGrid::retained_count() const {
  std::size_t c = 0;
  for (char r : retained) c += r ? 1 : 0;
  return c;
}

std::string DensityGrid::fingerprint() const {
  std::ostringstream os;
  os.precision(17);
  os << "d=" << dim << ",n=" << n_per_axis << ",L=" << halfwidth;
  return os.str();
}

DensityGrid build_grid(const ModelPair& model, int n_per_axis) {
  if (n_per_axis < 16) throw ConfigError("grid.n_per_axis must be >= 16");
  const int d = model.dim();
  DensityGrid g;
  g.dim = d;
  g.n_per_axis = n_per_axis;
  g.halfwidth = model.domain_halfwidth;
  g.spacing = 2.0 * g.halfwidth / (n_per_axis - 1);
  g.axis.resize(n_per_axis);
  for (int i = 0; i < n_per_axis; ++i) g.axis[i] = -g.halfwidth + i * g.spacing;
  g.axis.back() = g.halfwidth;

  std::size_t count = 1;
  for (int k = 0; k < d; ++k) count *= static_cast<std::size_t>(n_per_axis);
  const auto n = static_cast<Eigen::Index>(count);
  g.nodes.resize(d, n);
  g.weights.resize(n);
  g.target_values.resize(n);
  std::vector<int> idx(d, 0);
  for (Eigen::Index c = 0; c < n; ++c) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      g.nodes(k, c) = g.axis[idx[k]];
      w *= (idx[k] == 0 || idx[k] == n_per_axis - 1) ? 0.5 * g.spacing : g.spacing;
    }
    g.weights[c] = w;
    g.target_values[c] = density_value(model.target, g.nodes.col(c));
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] < n_per_axis) break;
      idx[k] = 0;
    }
  }

  g.floor = 1e-12 * g.target_values.maxCoeff();
  g.retained.assign(count, 0);
  double total = 0.0;
  double dropped = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    const double wf = g.weights[c] * g.target_values[c];
    total += wf;
    if (g.target_values[c] >= g.floor && g.target_values[c] > 0.0) {
      g.retained[c] = 1;
    } else {
      dropped += wf;
    }
  }
  g.dropped_mass_fraction = total > 0.0 ? dropped / total : 0.0;

  const double reference = trapezoid_target_integral(model, 4 * (n_per_axis - 1) + 1);
  const double deviation = std::abs(total - reference) / reference;
  if (deviation > 1e-3) {
    std::ostringstream os;
    os << "grid too coarse: target integral deviates from refined reference by " << deviation;
    g.warning = os.str();
  }
  return g;
}

double weighted_inner(const DensityVector& a, const DensityVector& b, const DensityGrid& grid) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < grid.weights.size(); ++i)
    if (grid.retained[i]) s += grid.weights[i] * a[i] * b[i] / grid.target_values[i];
  return s;
}

double weighted_norm(const DensityVector& a, const DensityGrid& grid) {
  return std::sqrt(weighted_inner(a, a, grid));
}

double mass(const DensityVector& h, const DensityGrid& grid) { return grid.weights.dot(h); }

DensityVector target_density(const DensityGrid& grid) { return grid.target_values; }

}  // namespace hmclab
