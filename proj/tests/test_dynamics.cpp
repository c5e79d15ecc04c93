#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "hmclab/dynamics.hpp"

using namespace hmclab;
using testing_util::random_spd;
using testing_util::vec1;

namespace {

ModelPair gaussian_pair(double u, double v) {
  return make_model(gaussian_potential(Vec::Zero(1), Mat::Constant(1, 1, u)),
                    gaussian_potential(Vec::Zero(1), Mat::Constant(1, 1, v)), 8.0);
}

ModelPair random_gaussian_pair(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 0.5);
  Vec mu(d);
  for (int k = 0; k < d; ++k) mu[k] = n(rng);
  return make_model(gaussian_potential(mu, random_spd(d, rng)),
                    gaussian_potential(Vec::Zero(d), random_spd(d, rng)), 6.0);
}

PhaseState random_state(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  PhaseState s{Vec(d), Vec(d)};
  for (int k = 0; k < d; ++k) {
    s.q[k] = u(rng);
    s.p[k] = u(rng);
  }
  return s;
}

double distance(const PhaseState& a, const PhaseState& b) {
  return std::max((a.q - b.q).cwiseAbs().maxCoeff(), (a.p - b.p).cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("exact flow of a scalar Gaussian pair matches the harmonic solution") {
  const double u = 2.5, v = 0.7, w = std::sqrt(u * v);
  const ModelPair m = gaussian_pair(u, v);
  for (double t : {0.1, 0.9, 3.0}) {
    const PhaseState s{vec1(0.8), vec1(-0.3)};
    const PhaseState r = flow(s, m, FlowSpec{t, 1, FlowMethod::exact_gaussian});
    const double Q = 0.8 * std::cos(w * t) + v * -0.3 * std::sin(w * t) / w;
    const double P = -0.3 * std::cos(w * t) - u * 0.8 * std::sin(w * t) / w;
    CHECK(r.q[0] == doctest::Approx(Q).epsilon(1e-14));
    CHECK(r.p[0] == doctest::Approx(P).epsilon(1e-14));
  }
}

TEST_CASE("leapfrog converges to the exact Gaussian flow") {
  std::mt19937_64 rng(21);
  for (int d : {1, 2, 3}) {
    const ModelPair m = random_gaussian_pair(d, rng);
    const PhaseState s = random_state(d, rng);
    const PhaseState ex = flow(s, m, FlowSpec{1.0, 1, FlowMethod::exact_gaussian});
    const PhaseState lf = flow(s, m, FlowSpec{1.0, 1000, FlowMethod::leapfrog});
    CHECK(distance(ex, lf) < 1e-5);

    // Global error is second order: halving the step quarters it.
    const double e1 = distance(ex, flow(s, m, FlowSpec{1.0, 100, FlowMethod::leapfrog}));
    const double e2 = distance(ex, flow(s, m, FlowSpec{1.0, 200, FlowMethod::leapfrog}));
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
  }
}

TEST_CASE("inverse flow undoes the flow") {
  std::mt19937_64 rng(22);
  const ModelPair g = random_gaussian_pair(2, rng);
  const ModelPair a = testing_util::anharmonic_model(3.0);
  for (int i = 0; i < 20; ++i) {
    const PhaseState s2 = random_state(2, rng);
    for (FlowMethod meth : {FlowMethod::exact_gaussian, FlowMethod::leapfrog}) {
      const FlowSpec spec{0.8, 137, meth};
      CHECK(distance(inverse_flow(flow(s2, g, spec), g, spec), s2) < 1e-10);
    }
    const PhaseState s1 = random_state(1, rng);
    const FlowSpec spec{0.5, 200, FlowMethod::leapfrog};
    CHECK(distance(inverse_flow(flow(s1, a, spec), a, spec), s1) < 1e-10);
    CHECK(distance(flow_signed(s1, a, spec, -0.5), inverse_flow(s1, a, spec)) == 0.0);
  }
}

TEST_CASE("momentum-flip conjugacy and energy") {
  std::mt19937_64 rng(23);
  const ModelPair a = testing_util::anharmonic_model(3.0);
  std::vector<PhaseState> states;
  for (int i = 0; i < 50; ++i) states.push_back(random_state(1, rng));
  const FlowSpec lf{0.4, 80, FlowMethod::leapfrog};
  CHECK(momentum_flip_conjugacy_residual(a, lf, states) < 1e-12);

  const ModelPair g = gaussian_pair(1.0, 1.0);
  const FlowSpec ex{0.4, 1, FlowMethod::exact_gaussian};
  CHECK(momentum_flip_conjugacy_residual(g, ex, states) < 1e-13);
  for (const PhaseState& s : states) {
    CHECK(total_energy(flow(s, g, ex), g) == doctest::Approx(total_energy(s, g)).epsilon(1e-13));
    const double h0 = total_energy(s, a);
    CHECK(std::abs(total_energy(flow(s, a, FlowSpec{0.4, 4000, FlowMethod::leapfrog}), a) - h0) < 1e-6);
  }

  const ModelPair shifted = make_model(gaussian_potential(Vec::Zero(1), Mat::Identity(1, 1)),
                                       gaussian_potential(vec1(0.5), Mat::Identity(1, 1)), 5.0);
  CHECK_THROWS_AS(momentum_flip_conjugacy_residual(shifted, ex, states), ConfigError);
}

TEST_CASE("tiny time and invalid specs") {
  const ModelPair g = gaussian_pair(1.0, 1.0);
  const PhaseState s{vec1(0.3), vec1(0.4)};
  for (FlowMethod meth : {FlowMethod::exact_gaussian, FlowMethod::leapfrog}) {
    const PhaseState r = flow(s, g, FlowSpec{1e-12, 1, meth});
    CHECK(distance(r, s) < 1e-11);
  }
  CHECK_THROWS_AS(validate(FlowSpec{0.0, 1, FlowMethod::leapfrog}, g), ConfigError);
  CHECK_THROWS_AS(validate(FlowSpec{1.0, 0, FlowMethod::leapfrog}, g), ConfigError);
  CHECK_THROWS_AS(validate(FlowSpec{1.0, 1, FlowMethod::exact_gaussian}, testing_util::anharmonic_model()),
                  ConfigError);
  CHECK_THROWS_AS(parse_flow_method("rk4"), ConfigError);
  CHECK(parse_flow_method("exact") == FlowMethod::exact_gaussian);

  // Step rule: t / n <= 0.01 min(1, Lambda^{-1/2}).
  const ModelPair a = testing_util::anharmonic_model(4.0);  // Lambda = 25
  CHECK(default_steps(a, 0.3) == 150);
  CHECK(default_steps(g, 0.7) == 70);
}
