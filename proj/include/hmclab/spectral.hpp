#pragma once

#include <array>
#include <string>
#include <vector>

#include "hmclab/iteration.hpp"

namespace hmclab {

struct SpectralReport {
  /// Sorted by absolute value, descending.
  std::vector<double> eigenvalues;
  /// Eigenvector of mu_1 in density coordinates, scaled to the mass of f.
  DensityVector leading_vector;
  /// Eigenvector of mu_2 in density coordinates (unit weighted norm).
  DensityVector second_vector;
  double gap = 0.0;         ///< 1 - rate_bound
  double rate_bound = 0.0;  ///< |mu_2|, or sqrt(mu_2(S)) after the fallback
  /// mu_1 within 1e-4 of 1 and the mu_2 eigenvector carries no mass (1e-6).
  bool multiplicity_check = false;
  /// ||leading / c - f||_2 / ||f||_2 for the best scalar c.
  double leading_deviation = 0.0;
  /// |mass(v_2)| / mass(|v_2|).
  double second_vector_mass = 0.0;
  double symmetry_residual = 0.0;
  /// True when T was not self-adjoint (residual >= 1e-6) and the spectrum is
  /// that of S = T^dagger T; eigenvalues are then the squared singular values.
  bool symmetrized = false;
  std::string solver;
  std::vector<std::string> warnings;
};

/// Top-k spectrum through the symmetric similarity form M = D T D^{-1}.
/// Dense symmetric eigensolver up to 2500 retained nodes, block subspace
/// iteration with Rayleigh-Ritz above.
SpectralReport eigen_spectrum(const TransferMatrix& T, const DensityGrid& grid, int k);

/// Largest-magnitude eigenpairs of a symmetric matrix by subspace iteration;
/// stops once every wanted Ritz residual is below tol |mu_1|.
void subspace_eigen(const Mat& a, int k, Vec& values, Mat& vectors, int max_iter = 2000, double tol = 1e-12);

struct RateOptions {
  /// Leading iterations excluded from the fit.
  int skip = 3;
  /// Absolute floor on e_n.
  double floor = 1e-12;
  /// ||T f - f||_2 / ||f||_2 of the operator; the iteration then settles at a
  /// distance ~ alpha * defect * ||f|| / (1 - rho) from alpha f, and the window
  /// keeps only errors 100 times above that plateau.
  double defect = 0.0;
  int min_points = 10;
};

enum class CertificateStatus { pass, fail, trivially_converged };
std::string to_string(CertificateStatus status);

struct RateCertificate {
  CertificateStatus status = CertificateStatus::fail;
  double rho_empirical = 0.0;
  double rho_spectral = 0.0;
  double relative_mismatch = 0.0;
  double r_squared = 0.0;
  int window_begin = 0;
  int window_end = 0;  ///< inclusive
  int window_points = 0;
  std::string reason;
  /// (n, log e_n, fitted log e_n) over the window, for failure diagnostics.
  std::vector<std::array<double, 3>> residuals;
};

/// Least-squares fit of log e_n against n over the geometric window; passes
/// when |rho_emp - rho_spec| / rho_spec < 0.02 and R^2 >= 0.99.
RateCertificate certify_rate(const SpectralReport& report, const IterationTrace& trace, const DensityGrid& grid,
                             const RateOptions& options = {});

}  // namespace hmclab
