#include "hmclab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hmclab {

void subspace_eigen(const Mat& a, int k, Vec& values, Mat& vectors, int max_iter, double tol) {
  const Eigen::Index n = a.rows();
  const Eigen::Index block = std::min<Eigen::Index>(n, k + std::max(8, k));
  Mat x = Mat::Zero(n, block);
  // Deterministic start: smooth cosines plus a unit spike per column.
  for (Eigen::Index c = 0; c < block; ++c)
    for (Eigen::Index i = 0; i < n; ++i) x(i, c) = std::cos((c + 1.0) * (i + 0.5) * 3.0 / n) + (i % block == c);
  Vec vals = Vec::Zero(block);
  Mat ax = a * x;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::HouseholderQR<Mat> qr(ax);
    x = qr.householderQ() * Mat::Identity(n, block);
    ax = a * x;
    const Mat h = x.transpose() * ax;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.transpose()));
    std::vector<Eigen::Index> order(block);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto l, auto r) {
      return std::abs(es.eigenvalues()[l]) > std::abs(es.eigenvalues()[r]);
    });
    Mat rot(block, block);
    for (Eigen::Index c = 0; c < block; ++c) {
      rot.col(c) = es.eigenvectors().col(order[c]);
      vals[c] = es.eigenvalues()[order[c]];
    }
    x = x * rot;
    ax = ax * rot;
    // Converged when every wanted Ritz pair has residual below tol |mu_1|.
    const Mat res = ax.leftCols(k) - x.leftCols(k) * vals.head(k).asDiagonal();
    if (res.colwise().norm().maxCoeff() <= tol * std::abs(vals[0])) break;
  }
  values = vals.head(k);
  vectors = x.leftCols(k);
}

SpectralReport eigen_spectrum(const TransferMatrix& T, const DensityGrid& grid, int k) {
  if (k < 2) throw ConfigError("eigen_spectrum: k must be >= 2");
  if (T.grid_fingerprint != grid.fingerprint()) throw ConfigError("eigen_spectrum: operator built on another grid");
  SpectralReport rep;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < T.size(); ++i)
    if (grid.retained[i]) keep.push_back(i);
  const auto r = static_cast<Eigen::Index>(keep.size());
  k = static_cast<int>(std::min<Eigen::Index>(k, r));

  Mat m = weighted_similarity(T, grid);
  rep.symmetry_residual = weighted_symmetry_residual(T, grid);
  if (rep.symmetry_residual >= 1e-6) {
    rep.symmetrized = true;
    m = m.transpose() * m;
    std::ostringstream os;
    os << "operator is not self-adjoint (weighted-symmetry residual " << rep.symmetry_residual
       << "); spectrum of S = T^dagger T reported";
    rep.warnings.push_back(os.str());
  }
  const Mat sym = 0.5 * (m + m.transpose());

  Vec values;
  Mat vectors;
  if (r <= 2500) {
    rep.solver = "dense-symmetric";
    Eigen::SelfAdjointEigenSolver<Mat> es(sym);
    std::vector<Eigen::Index> order(r);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
    });
    values.resize(k);
    vectors.resize(r, 2);
    for (int c = 0; c < k; ++c) values[c] = es.eigenvalues()[order[c]];
    for (int c = 0; c < 2; ++c) vectors.col(c) = es.eigenvectors().col(order[c]);
  } else {
    rep.solver = "subspace-iteration";
    subspace_eigen(sym, k, values, vectors);
  }
  rep.eigenvalues.assign(values.data(), values.data() + values.size());

  // Back to density coordinates: h = D^{-1} v, D = diag(sqrt(w / f)).
  auto to_density = [&](const Vec& v) {
    DensityVector h = DensityVector::Zero(T.size());
    for (Eigen::Index a = 0; a < r; ++a)
      h[keep[a]] = v[a] * std::sqrt(grid.target_values[keep[a]] / grid.weights[keep[a]]);
    return h;
  };
  const DensityVector& f = grid.target_values;
  DensityVector lead = to_density(vectors.col(0));
  lead *= mass(f, grid) / mass(lead, grid);
  rep.leading_vector = lead;
  const double c = weighted_inner(lead, f, grid) / weighted_inner(f, f, grid);
  rep.leading_deviation = weighted_norm(lead / c - f, grid) / weighted_norm(f, grid);

  DensityVector second = to_density(vectors.col(1));
  second /= weighted_norm(second, grid);
  rep.second_vector = second;
  rep.second_vector_mass = std::abs(mass(second, grid)) / mass(second.cwiseAbs(), grid);

  const double mu1 = rep.eigenvalues[0];
  const double mu2 = std::abs(rep.eigenvalues[1]);
  rep.rate_bound = rep.symmetrized ? std::sqrt(mu2) : mu2;
  rep.gap = 1.0 - rep.rate_bound;
  rep.multiplicity_check = std::abs(mu1 - 1.0) <= 1e-4 && rep.second_vector_mass <= 1e-6 && mu2 < mu1;
  if (!rep.multiplicity_check) {
    std::ostringstream os;
    os << "mu_1 simplicity check failed (mu_1 = " << mu1 << ", |mu_2| = " << mu2
       << ", relative mass of second eigenvector " << rep.second_vector_mass
       << "); the discretized operator may be reducible";
    rep.warnings.push_back(os.str());
  }
  for (double mu : rep.eigenvalues)
    if (std::abs(mu) > 1.0 + 1e-6) {
      rep.warnings.push_back("eigenvalue outside the unit disk beyond 1e-6");
      break;
    }
  return rep;
}

std::string to_string(CertificateStatus status) {
  switch (status) {
    case CertificateStatus::pass:
      return "pass";
    case CertificateStatus::fail:
      return "fail";
    case CertificateStatus::trivially_converged:
      return "trivially-converged";
  }
  return "unknown";
}

RateCertificate certify_rate(const SpectralReport& report, const IterationTrace& trace, const DensityGrid& grid,
                             const RateOptions& options) {
  RateCertificate cert;
  cert.rho_spectral = report.rate_bound;
  if (trace.records.empty()) throw ConfigError("certify_rate: empty iteration trace");

  const double f_norm = weighted_norm(grid.target_values, grid);
  const double plateau =
      options.defect > 0.0 ? 100.0 * std::abs(trace.alpha) * options.defect * f_norm / std::max(1e-12, 1.0 - cert.rho_spectral)
                           : 0.0;
  const double floor = std::max(options.floor, plateau);
  const auto& rec = trace.records;
  if (rec.front().error <= std::max(options.floor, 1e-10 * rec.front().norm)) {
    cert.status = CertificateStatus::trivially_converged;
    cert.reason = "initial error already at the numerical floor; no geometric regime to fit";
    return cert;
  }

  // Window: n >= skip and every error down to that point above the floor.
  std::vector<double> xs, ys;
  for (const auto& r : rec) {
    if (r.n < options.skip) continue;
    if (!(r.error > floor)) break;
    xs.push_back(r.n);
    ys.push_back(std::log(r.error));
  }
  cert.window_points = static_cast<int>(xs.size());
  if (cert.window_points < options.min_points) {
    std::ostringstream os;
    os << "only " << xs.size() << " iterations above the floor " << floor << " after skipping " << options.skip
       << " (need " << options.min_points << ")";
    cert.reason = os.str();
    return cert;
  }
  cert.window_begin = static_cast<int>(xs.front());
  cert.window_end = static_cast<int>(xs.back());
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double fit = intercept + slope * xs[i];
    ss_res += (ys[i] - fit) * (ys[i] - fit);
    cert.residuals.push_back({xs[i], ys[i], fit});
  }
  cert.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  cert.rho_empirical = std::exp(slope);
  cert.relative_mismatch = std::abs(cert.rho_empirical - cert.rho_spectral) / cert.rho_spectral;

  if (cert.r_squared < 0.99) {
    std::ostringstream os;
    os << "non-geometric decay: R^2 = " << cert.r_squared;
    cert.reason = os.str();
    return cert;
  }
  if (cert.relative_mismatch >= 0.02) {
    std::ostringstream os;
    os << "empirical rate " << cert.rho_empirical << " differs from spectral rate " << cert.rho_spectral << " by "
       << 100.0 * cert.relative_mismatch << "%";
    cert.reason = os.str();
    return cert;
  }
  cert.status = CertificateStatus::pass;
  return cert;
}

}  // namespace hmclab
