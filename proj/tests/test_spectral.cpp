#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "hmclab/probes.hpp"
#include "hmclab/spectral.hpp"

using namespace hmclab;

namespace {

struct Setup {
  ModelPair model = standard_gaussian_model(1, 8.0);
  DensityGrid grid = build_grid(model, 201);
  TransferMatrix T = assemble_transfer(grid, model, FlowSpec{0.7, 1, FlowMethod::exact_gaussian}, 64);
};

const Setup& setup() {
  static const Setup s;
  return s;
}

}  // namespace

TEST_CASE("Gaussian spectrum is cos^k t with the target as leading vector") {
  const Setup& s = setup();
  const SpectralReport rep = eigen_spectrum(s.T, s.grid, 6);
  CHECK(rep.solver == "dense-symmetric");
  CHECK_FALSE(rep.symmetrized);
  REQUIRE(rep.eigenvalues.size() == 6);
  for (int k = 0; k < 6; ++k) CHECK(rep.eigenvalues[k] == doctest::Approx(std::pow(std::cos(0.7), k)).epsilon(1e-6));
  CHECK(rep.rate_bound == doctest::Approx(std::cos(0.7)).epsilon(1e-6));
  CHECK(rep.gap == doctest::Approx(1 - std::cos(0.7)).epsilon(1e-5));
  CHECK(rep.multiplicity_check);
  CHECK(rep.leading_deviation < 1e-8);
  CHECK(rep.second_vector_mass < 1e-8);
  CHECK(mass(rep.leading_vector, s.grid) == doctest::Approx(mass(s.grid.target_values, s.grid)));
  // Second eigenfunction is Hermite He_1 times f: odd.
  for (std::size_t i = 0; i < s.grid.size(); i += 10)
    CHECK(std::abs(rep.second_vector[i] + rep.second_vector[s.grid.size() - 1 - i]) < 1e-8);
  CHECK(rep.warnings.empty());
  CHECK_THROWS_AS(eigen_spectrum(s.T, s.grid, 1), ConfigError);
}

TEST_CASE("quarter-period flow forgets position") {
  const Setup& s = setup();
  const TransferMatrix T = assemble_transfer(s.grid, s.model, FlowSpec{std::numbers::pi / 2, 1, FlowMethod::exact_gaussian}, 64);
  const SpectralReport rep = eigen_spectrum(T, s.grid, 3);
  CHECK(rep.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(rep.eigenvalues[1]) < 1e-3);
}

TEST_CASE("non-self-adjoint operator falls back to T^dagger T") {
  const Setup& s = setup();
  const TransferMatrix Ti =
      assemble_transfer(s.grid, s.model, FlowSpec{0.7, 1, FlowMethod::exact_gaussian}, 128, DepositScheme::interpolated);
  const SpectralReport rep = eigen_spectrum(Ti, s.grid, 4);
  CHECK(rep.symmetrized);
  CHECK_FALSE(rep.warnings.empty());
  CHECK(rep.rate_bound == doctest::Approx(std::cos(0.7)).epsilon(1e-3));
}

TEST_CASE("subspace iteration agrees with the dense solver") {
  std::mt19937_64 rng(81);
  const int n = 120;
  const Mat q = Eigen::HouseholderQR<Mat>(Mat::Random(n, n)).householderQ();
  Vec spec(n);
  for (int i = 0; i < n; ++i) spec[i] = std::pow(0.8, i) * (i % 3 == 2 ? -1.0 : 1.0);
  const Mat a = q * spec.asDiagonal() * q.transpose();
  Vec values;
  Mat vectors;
  subspace_eigen(a, 5, values, vectors);
  for (int k = 0; k < 5; ++k) {
    CHECK(values[k] == doctest::Approx(spec[k]).epsilon(1e-10));
    CHECK((a * vectors.col(k) - values[k] * vectors.col(k)).norm() < 1e-8);
  }
}

TEST_CASE("rate certificate on the Gaussian iteration") {
  const Setup& s = setup();
  const SpectralReport rep = eigen_spectrum(s.T, s.grid, 3);
  const IterationTrace tr = iterate(s.T, s.grid, tilted_target(s.grid, testing_util::vec1(1.0)), 400, 1e-12);
  RateOptions opt;
  opt.defect = fixed_point_defect(s.T, s.grid);
  const RateCertificate cert = certify_rate(rep, tr, s.grid, opt);
  CHECK(cert.status == CertificateStatus::pass);
  CHECK(cert.rho_empirical == doctest::Approx(std::cos(0.7)).epsilon(0.02));
  CHECK(cert.r_squared >= 0.99);
  CHECK(cert.window_begin == 3);
  CHECK(cert.window_points >= 10);
  CHECK(cert.residuals.size() == static_cast<std::size_t>(cert.window_points));

  // Wrong spectral rate: mismatch detected.
  SpectralReport wrong = rep;
  wrong.rate_bound = 0.5;
  const RateCertificate bad = certify_rate(wrong, tr, s.grid, opt);
  CHECK(bad.status == CertificateStatus::fail);
  CHECK(bad.reason.find("differs") != std::string::npos);

  // Too short a trace.
  const IterationTrace short_tr = iterate(s.T, s.grid, tilted_target(s.grid, testing_util::vec1(1.0)), 8, 1e-12);
  CHECK(certify_rate(rep, short_tr, s.grid, opt).status == CertificateStatus::fail);

  const IterationTrace at = iterate(s.T, s.grid, s.grid.target_values, 50, 1e-300);
  CHECK(certify_rate(rep, at, s.grid, opt).status == CertificateStatus::trivially_converged);
  CHECK(to_string(CertificateStatus::trivially_converged) == "trivially-converged");
}
