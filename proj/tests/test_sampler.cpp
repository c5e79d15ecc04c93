#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "hmclab/sampler.hpp"

using namespace hmclab;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("exact-flow HMC histogram matches the Gaussian bin masses") {
  const ModelPair m = standard_gaussian_model(1, 6.0);
  const DensityGrid g = build_grid(m, 301);
  SamplerOptions opt;
  opt.samples = 200000;
  opt.bins = 60;
  opt.seed = 9;
  const SamplerReport rep = run_sampler(m, FlowSpec{0.7, 1, FlowMethod::exact_gaussian}, g, g.target_values, opt);
  CHECK(rep.acceptance_rate == doctest::Approx(1.0));
  CHECK(rep.warnings.empty());
  REQUIRE(rep.reference_mass.size() == 60);
  const double z = normal_cdf(6.0) - normal_cdf(-6.0);
  double worst_ref = 0.0;
  for (int b = 0; b < 60; ++b) {
    const double exact = (normal_cdf(rep.bin_edges[b + 1]) - normal_cdf(rep.bin_edges[b])) / z;
    worst_ref = std::max(worst_ref, std::abs(rep.reference_mass[b] - exact));
  }
  // Cubic interpolation of the grid values, then 64-point midpoint sums per bin.
  CHECK(worst_ref < 1e-6 * 0.04);
  CHECK(rep.sup_distance < 5e-3);
  CHECK(rep.sup_distance_density == doctest::Approx(rep.sup_distance / 0.2).epsilon(1e-12));
  double total = 0.0;
  for (double v : rep.empirical_mass) total += v;
  CHECK(total + static_cast<double>(rep.outside) / opt.samples == doctest::Approx(1.0));
}

TEST_CASE("sampler is deterministic per seed and validates its input") {
  const ModelPair m = testing_util::anharmonic_model(4.0);
  const DensityGrid g = build_grid(m, 101);
  const FlowSpec spec{0.3, 30, FlowMethod::leapfrog};
  SamplerOptions opt;
  opt.samples = 5000;
  opt.seed = 4;
  const SamplerReport a = run_sampler(m, spec, g, g.target_values, opt);
  const SamplerReport b = run_sampler(m, spec, g, g.target_values, opt);
  CHECK(a.empirical_mass == b.empirical_mass);
  CHECK(a.accepted == b.accepted);
  CHECK(a.acceptance_rate > 0.9);
  opt.seed = 5;
  CHECK(run_sampler(m, spec, g, g.target_values, opt).empirical_mass != a.empirical_mass);

  opt.samples = 0;
  const SamplerReport empty = run_sampler(m, spec, g, g.target_values, opt);
  CHECK(empty.empirical_mass.empty());
  opt.bins = 0;
  opt.samples = 10;
  CHECK_THROWS_AS(run_sampler(m, spec, g, g.target_values, opt), ConfigError);

  const ModelPair odd = make_model(gaussian_potential(Vec::Zero(1), Mat::Identity(1, 1)),
                                   anharmonic_potential(1.0, 0.1, 3.0), 5.0);
  opt.bins = 10;
  CHECK_THROWS_AS(run_sampler(odd, spec, build_grid(odd, 41), build_grid(odd, 41).target_values, opt), ConfigError);
}

TEST_CASE("large leapfrog steps lower the acceptance rate and warn") {
  const ModelPair m = standard_gaussian_model(1, 6.0);
  const DensityGrid g = build_grid(m, 101);
  SamplerOptions opt;
  opt.samples = 5000;
  const SamplerReport rep = run_sampler(m, FlowSpec{1.999, 1, FlowMethod::leapfrog}, g, g.target_values, opt);
  CHECK(rep.acceptance_rate < 0.5);
  CHECK_FALSE(rep.warnings.empty());
}
