#include "hmclab/sampler.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "hmclab/interpolation.hpp"

namespace hmclab {

namespace {

std::vector<double> reference_bin_mass(const DensityGrid& grid, const DensityVector& reference,
                                       const std::vector<double>& edges) {
  const GridInterpolator interp(grid);
  constexpr int kSub = 64;
  const int bins = static_cast<int>(edges.size()) - 1;
  std::vector<double> out(bins, 0.0);
  double total = 0.0;
  Vec x(1);
  for (int b = 0; b < bins; ++b) {
    const double h = (edges[b + 1] - edges[b]) / kSub;
    for (int s = 0; s < kSub; ++s) {
      x[0] = edges[b] + (s + 0.5) * h;
      out[b] += h * interp.evaluate(reference, x);
    }
    total += out[b];
  }
  for (double& v : out) v /= total;
  return out;
}

}  // namespace

SamplerReport run_sampler(const ModelPair& model, const FlowSpec& spec, const DensityGrid& grid,
                          const DensityVector& reference, const SamplerOptions& options) {
  validate(spec, model);
  if (model.dim() != 1) throw ConfigError("sampler: only one-dimensional models are supported");
  const GaussianFamily* aux = model.auxiliary.gaussian();
  if (!aux) throw ConfigError("sampler: momentum refresh needs a Gaussian auxiliary density");
  if (options.samples < 0 || options.burn_in < 0) throw ConfigError("sampler: negative sample count");
  if (options.bins < 1) throw ConfigError("sampler: bins must be >= 1");

  SamplerReport rep;
  rep.samples = options.samples;
  if (options.samples == 0) return rep;

  const double L = grid.halfwidth;
  rep.bin_edges.resize(options.bins + 1);
  for (int b = 0; b <= options.bins; ++b) rep.bin_edges[b] = -L + 2.0 * L * b / options.bins;
  std::vector<long> counts(options.bins, 0);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double p_scale = 1.0 / std::sqrt(aux->precision(0, 0));
  const Vec mode = model.target.gaussian() ? model.target.gaussian()->mean : Vec::Zero(1);

  PhaseState s{mode, Vec::Zero(1)};
  const long total = options.burn_in + options.samples;
  for (long it = 0; it < total; ++it) {
    s.p[0] = aux->mean[0] + p_scale * normal(rng);
    const double h0 = total_energy(s, model);
    const PhaseState prop = flow(s, model, spec);
    const double h1 = total_energy(prop, model);
    const double u = unit(rng);
    const bool accept = std::isfinite(h1) && (h1 <= h0 || u < std::exp(h0 - h1));
    if (accept) s.q = prop.q;
    if (it < options.burn_in) continue;
    if (accept) ++rep.accepted;
    const double q = s.q[0];
    if (q < -L || q >= L) {
      ++rep.outside;
      continue;
    }
    const int b = std::min(options.bins - 1, static_cast<int>((q + L) / (2.0 * L) * options.bins));
    ++counts[b];
  }

  rep.acceptance_rate = static_cast<double>(rep.accepted) / options.samples;
  rep.reference_mass = reference_bin_mass(grid, reference, rep.bin_edges);
  rep.empirical_mass.resize(options.bins);
  const double width = 2.0 * L / options.bins;
  for (int b = 0; b < options.bins; ++b) {
    rep.empirical_mass[b] = static_cast<double>(counts[b]) / options.samples;
    const double diff = std::abs(rep.empirical_mass[b] - rep.reference_mass[b]);
    rep.sup_distance = std::max(rep.sup_distance, diff);
    rep.sup_distance_density = std::max(rep.sup_distance_density, diff / width);
  }
  if (rep.acceptance_rate < 0.5) {
    std::ostringstream os;
    os << "acceptance rate " << rep.acceptance_rate << " < 0.5; reduce the leapfrog step size";
    rep.warnings.push_back(os.str());
  }
  return rep;
}

}  // namespace hmclab
