// Acceptance run: one PASS/FAIL line per criterion. Exit status 1 when any
// criterion fails. Every reference value is recomputed here from closed forms
// (Mehler kernel, harmonic oscillator, finite differences) rather than taken
// from the library.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hmclab/kernel.hpp"
#include "hmclab/probes.hpp"
#include "hmclab/sampler.hpp"
#include "hmclab/spectral.hpp"
#include "hmclab/tangent.hpp"

using namespace hmclab;

namespace {

constexpr double kT = 0.7;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Shared Gaussian scenario: standard pair on [-8, 8], n = 401, exact flow.
struct Gaussian {
  ModelPair model = standard_gaussian_model(1, 8.0);
  DensityGrid grid = build_grid(model, 401);
  FlowSpec spec{kT, 1, FlowMethod::exact_gaussian};
  TransferMatrix T = assemble_transfer(grid, model, spec, 257);
  TransferMatrix Ta = assemble_adjoint(grid, model, spec, 257);
};

const Gaussian& gaussian() {
  static const Gaussian g;
  return g;
}

// anharmonic(a = 1, b = 0.5) on [-4, 4], leapfrog at t = 0.3.
struct Anharmonic {
  ModelPair model = make_model(anharmonic_potential(1.0, 0.5, 4.0),
                               gaussian_potential(Vec::Zero(1), Mat::Identity(1, 1)), 4.0);
  DensityGrid grid = build_grid(model, 401);
  FlowSpec spec{0.3, 400, FlowMethod::leapfrog};
  TransferMatrix T = assemble_transfer(grid, model, spec, 400);
};

const Anharmonic& anharmonic() {
  static const Anharmonic a;
  return a;
}

double relative_defect(const TransferMatrix& T, const DensityGrid& g) {
  const DensityVector& f = g.target_values;
  return weighted_norm(T.entries * f - f, g) / weighted_norm(f, g);
}

// Max |a - b| / max |b| over all entries of the 2d x 2d Jacobian.
double block_gap(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff(); }

Mat fd_jacobian(const PhaseState& s, const ModelPair& m, const FlowSpec& spec, double h) {
  const int d = m.dim();
  Mat j(2 * d, 2 * d);
  for (int c = 0; c < 2 * d; ++c) {
    PhaseState a = s, b = s;
    (c < d ? a.q[c] : a.p[c - d]) += h;
    (c < d ? b.q[c] : b.p[c - d]) -= h;
    const PhaseState fa = flow(a, m, spec), fb = flow(b, m, spec);
    j.col(c) << (fa.q - fb.q) / (2 * h), (fa.p - fb.p) / (2 * h);
  }
  return j;
}

// Largest |det J - 1| over every tangent map evaluated below.
double g_worst_det = 0.0;
long g_det_count = 0;
void record_det(const TangentBlocks& b) {
  g_worst_det = std::max(g_worst_det, std::abs(b.full().determinant() - 1.0));
  ++g_det_count;
}

Verdict fixed_point() {
  const Gaussian& g = gaussian();
  const TransferMatrix Ti = assemble_transfer(g.grid, g.model, g.spec, 257, DepositScheme::interpolated);
  const double di = relative_defect(Ti, g.grid);
  const double dp = relative_defect(g.T, g.grid);
  return {di < 1e-6 && dp < 1e-6,
          "interpolated(m=257) " + fmt("%.3g", di) + ", preimage " + fmt("%.3g", dp) + " (limit 1e-6)"};
}

Verdict mass_conservation() {
  const Gaussian& g = gaussian();
  const Anharmonic& a = anharmonic();
  const TransferMatrix Ti = assemble_transfer(g.grid, g.model, g.spec, 257, DepositScheme::interpolated);
  auto worst = [](const TransferMatrix& T, const DensityGrid& grid) {
    std::mt19937_64 rng(2024);
    double w = 0.0;
    for (int k = 0; k < 100; ++k) {
      const DensityVector h = random_density(grid, rng);
      w = std::max(w, std::abs(mass(T.entries * h, grid) - mass(h, grid)) / mass(h, grid));
    }
    return w;
  };
  const double e1 = worst(g.T, g.grid), e2 = worst(Ti, g.grid), e3 = worst(a.T, a.grid);
  return {e1 < 1e-7 && e2 < 1e-7 && e3 < 1e-7, "max relative mass error over 100 densities: gaussian " +
                                                   fmt("%.3g", e1) + ", gaussian-interpolated " + fmt("%.3g", e2) +
                                                   ", anharmonic " + fmt("%.3g", e3) + " (limit 1e-7)"};
}

Verdict contraction() {
  double violation = 0.0, factor = 0.0;
  for (const auto& [T, grid] : {std::pair{&gaussian().T, &gaussian().grid}, std::pair{&anharmonic().T, &anharmonic().grid}}) {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 100; ++k) {
      const DensityVector h = random_signed(*grid, rng);
      const double nh = weighted_norm(h, *grid);
      violation = std::max(violation, (weighted_norm(T->entries * h, *grid) - nh) / nh);
      const DensityVector z = remove_mass(h, *grid);
      factor = std::max(factor, weighted_norm(T->entries * z, *grid) / weighted_norm(z, *grid));
    }
  }
  // Supremum over the zero-mass subspace: |mu_2| of the self-adjoint form.
  const double sup = eigen_spectrum(gaussian().T, gaussian().grid, 2).rate_bound;
  return {violation <= 1e-10 && factor <= 0.99 && sup <= 0.99,
          "max (||Th|| - ||h||)/||h|| = " + fmt("%.3g", violation) + " (limit 1e-10); zero-mass factor " +
              fmt("%.6f", factor) + ", spectral sup " + fmt("%.6f", sup) + " (limit 0.99)"};
}

Verdict self_adjoint() {
  const Gaussian& g = gaussian();
  const double sym = weighted_symmetry_residual(g.T, g.grid);
  const double dual = adjoint_duality_residual(g.T, g.Ta, g.grid, 20, 99);
  const double anh = weighted_symmetry_residual(anharmonic().T, anharmonic().grid);
  return {sym < 1e-7 && dual < 1e-7, "gaussian symmetry residual " + fmt("%.3g", sym) + ", duality " +
                                         fmt("%.3g", dual) + " (limit 1e-7); anharmonic leapfrog symmetry " +
                                         fmt("%.3g", anh) + " (diagnostic)"};
}

Verdict spectral_oracle() {
  const Gaussian& g = gaussian();
  const SpectralReport rep = eigen_spectrum(g.T, g.grid, 6);
  double worst = 0.0;
  for (int k = 0; k < 6; ++k) worst = std::max(worst, std::abs(rep.eigenvalues[k] - std::pow(std::cos(kT), k)));
  return {worst < 1e-3 && rep.leading_deviation < 1e-4 && !rep.symmetrized,
          "max |mu_k - cos^k(0.7)|, k=0..5: " + fmt("%.3g", worst) + " (limit 1e-3); leading vector deviation " +
              fmt("%.3g", rep.leading_deviation) + " (limit 1e-4)"};
}

Verdict hilbert_schmidt() {
  const Gaussian& g = gaussian();
  const KernelField field = assemble_kernel(g.grid, g.model, g.spec, 257);
  const HsNormReport hs = hs_norm_report(field);
  const double exact = 1.0 / std::pow(std::sin(kT), 2);
  const Mat m = weighted_similarity(g.T, g.grid);
  const Vec mu = Eigen::SelfAdjointEigenSolver<Mat>(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly).eigenvalues();
  const double sum_sq = mu.squaredNorm();
  const double r1 = std::abs(hs.position - exact) / exact;
  const double r2 = std::abs(hs.position - sum_sq) / sum_sq;
  return {r1 < 1e-3 && r2 < 1e-3, "||K||^2 = " + fmt("%.8f", hs.position) + " (momentum route " +
                                      fmt("%.8f", hs.momentum) + "), 1/sin^2 = " + fmt("%.8f", exact) +
                                      " rel " + fmt("%.3g", r1) + ", sum mu^2 = " + fmt("%.8f", sum_sq) + " rel " +
                                      fmt("%.3g", r2) + " (limit 1e-3)"};
}

Verdict geometric_rate() {
  auto certify = [](const TransferMatrix& T, const DensityGrid& grid, double rho_ref, int n_max) {
    SpectralReport rep = eigen_spectrum(T, grid, 3);
    if (rho_ref > 0.0) rep.rate_bound = rho_ref;
    const IterationTrace tr = iterate(T, grid, tilted_target(grid, Vec::Constant(1, 1.0)), n_max, 1e-12);
    RateOptions opt;
    opt.defect = fixed_point_defect(T, grid);
    return certify_rate(rep, tr, grid, opt);
  };
  const RateCertificate cg = certify(gaussian().T, gaussian().grid, std::cos(kT), 400);
  const RateCertificate ca = certify(anharmonic().T, anharmonic().grid, -1.0, 600);
  return {cg.status == CertificateStatus::pass && ca.status == CertificateStatus::pass,
          "gaussian rho_emp " + fmt("%.6f", cg.rho_empirical) + " vs cos(0.7) " + fmt("%.6f", std::cos(kT)) + " (" +
              fmt("%.2g", 100 * cg.relative_mismatch) + "%, R^2 " + fmt("%.6f", cg.r_squared) +
              "); anharmonic rho_emp " + fmt("%.6f", ca.rho_empirical) + " vs |mu_2| " +
              fmt("%.6f", ca.rho_spectral) + " (" + fmt("%.2g", 100 * ca.relative_mismatch) + "%, R^2 " +
              fmt("%.6f", ca.r_squared) + ") (limit 2%)" + (cg.reason.empty() ? "" : "; " + cg.reason) +
              (ca.reason.empty() ? "" : "; " + ca.reason)};
}

Verdict tangent_fd() {
  const Anharmonic& a = anharmonic();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  for (int s = 0; s < 50; ++s) {
    const PhaseState st{Vec::Constant(1, u(rng)), Vec::Constant(1, u(rng))};
    const TangentResult r = integrate_tangent(st, a.model, a.spec);
    record_det(r.blocks);
    worst = std::max(worst, block_gap(fd_jacobian(st, a.model, a.spec, 1e-5), r.blocks.full()));
  }
  return {worst < 1e-5, "max relative block error on 50 states: " + fmt("%.3g", worst) + " (limit 1e-5)"};
}

Verdict closed_form() {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  auto spd = [&](int d) {
    Mat g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = n(rng);
    return Mat(g * g.transpose() + 0.5 * Mat::Identity(d, d));
  };
  double worst = 0.0;
  for (int d : {1, 2, 3}) {
    const Mat U = spd(d), V = spd(d);
    const ModelPair m = make_model(gaussian_potential(Vec::Zero(d), U), gaussian_potential(Vec::Zero(d), V), 8.0);
    // Step small enough that leapfrog's O(eps^2) error sits below 1e-9.
    const FlowSpec spec{kT, 40000, FlowMethod::leapfrog};
    PhaseState st{Vec(d), Vec(d)};
    for (int k = 0; k < d; ++k) {
      st.q[k] = n(rng);
      st.p[k] = n(rng);
    }
    const TangentResult r = integrate_tangent(st, m, spec);
    record_det(r.blocks);
    const TangentBlocks closed = block_exponential(RunningAverages{U, V, kT});
    worst = std::max(worst, block_gap(r.blocks.full(), closed.full()));
  }
  // Non-Gaussian: the closed form evaluated at the running averages.
  const Anharmonic& a = anharmonic();
  double diag = 0.0;
  for (double q : {-1.5, -0.5, 0.0, 1.0, 2.0}) {
    const TangentResult r = integrate_tangent(PhaseState{Vec::Constant(1, q), Vec::Constant(1, 0.8)}, a.model, a.spec);
    record_det(r.blocks);
    diag = std::max(diag, block_gap(block_exponential(r.averages).full(), r.blocks.full()));
  }
  return {worst < 1e-8, "gaussian d=1..3: max relative gap " + fmt("%.3g", worst) +
                            " (limit 1e-8); anharmonic closed form at running averages deviates by " +
                            fmt("%.3g", diag) + " (diagnostic)"};
}

Verdict determinant_bounds_check() {
  // Lambda = a + 3 b L^2 must satisfy t Lambda < pi/2 at t = 0.3, so the box
  // is [-1.5, 1.5] (Lambda = 4.375); states are drawn from [-1, 1]^2.
  const double a = 1.0, b = 0.5, L = 1.5, t = 0.3;
  const ModelPair m =
      make_model(anharmonic_potential(a, b, L), gaussian_potential(Vec::Zero(1), Mat::Identity(1, 1)), L);
  const double lam = std::min(a, 1.0);
  const double Lam = std::max(a + 3 * b * L * L, 1.0);
  const double lower = std::pow(t * Lam, -2.0);
  const double upper = std::pow(std::sin(t * lam) / lam, -2.0);
  const FlowSpec spec = default_flow_spec(m, t, FlowMethod::leapfrog);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int inside = 0;
  double lo = 1e300, hi = 0.0, reach = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const PhaseState st{Vec::Constant(1, u(rng)), Vec::Constant(1, u(rng))};
    const TangentResult r = integrate_tangent(st, m, spec);
    record_det(r.blocks);
    reach = std::max(reach, std::abs(r.state.q[0]));
    const JacobianDeterminants det = jacobian_determinants(r.blocks);
    const double x = det.Dq * det.Dp;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    inside += (x >= lower && x <= upper) ? 1 : 0;
  }
  return {inside == 1000, std::to_string(inside) + "/1000 inside [" + fmt("%.6g", lower) + ", " + fmt("%.6g", upper) +
                              "], observed [" + fmt("%.6g", lo) + ", " + fmt("%.6g", hi) + "], max |Q| " +
                              fmt("%.3f", reach)};
}

Verdict volume() {
  return {g_worst_det < 1e-10 && g_det_count > 0,
          "max |det J - 1| over " + std::to_string(g_det_count) + " tangent maps: " + fmt("%.3g", g_worst_det) +
              " (limit 1e-10)"};
}

Verdict conjugacy() {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<PhaseState> states;
  for (int s = 0; s < 200; ++s) states.push_back({Vec::Constant(1, u(rng)), Vec::Constant(1, u(rng))});
  const double lf = momentum_flip_conjugacy_residual(anharmonic().model, anharmonic().spec, states);
  const double ex = momentum_flip_conjugacy_residual(gaussian().model, gaussian().spec, states);
  return {lf < 1e-10 && ex < 1e-12, "leapfrog (anharmonic) " + fmt("%.3g", lf) + " (limit 1e-10), exact (gaussian) " +
                                        fmt("%.3g", ex) + " (limit 1e-12)"};
}

Verdict sampler() {
  auto run = [](const ModelPair& m, const FlowSpec& spec, const DensityGrid& grid, const TransferMatrix& T) {
    const SpectralReport rep = eigen_spectrum(T, grid, 2);
    SamplerOptions opt;
    opt.samples = 1000000;
    opt.burn_in = 1000;
    opt.bins = 100;
    opt.seed = 13;
    return run_sampler(m, spec, grid, rep.leading_vector, opt);
  };
  const SamplerReport g = run(gaussian().model, gaussian().spec, gaussian().grid, gaussian().T);
  const SamplerReport a = run(anharmonic().model, anharmonic().spec, anharmonic().grid, anharmonic().T);
  return {g.sup_distance < 0.01 && a.sup_distance < 0.01,
          "sup |hist - fixed point| per bin: gaussian " + fmt("%.3g", g.sup_distance) + " (acceptance " +
              fmt("%.4f", g.acceptance_rate) + "), anharmonic " + fmt("%.3g", a.sup_distance) + " (acceptance " +
              fmt("%.4f", a.acceptance_rate) + ") (limit 0.01); density-normalized: " +
              fmt("%.3g", g.sup_distance_density) + ", " + fmt("%.3g", a.sup_distance_density)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"fixed point", fixed_point},
      {"mass conservation", mass_conservation},
      {"norm contraction", contraction},
      {"self-adjointness", self_adjoint},
      {"spectral oracle", spectral_oracle},
      {"Hilbert-Schmidt identity", hilbert_schmidt},
      {"geometric rate", geometric_rate},
      {"tangent vs finite differences", tangent_fd},
      {"closed-form tangent", closed_form},
      {"determinant bounds", determinant_bounds_check},
      {"volume preservation", volume},
      {"momentum-flip conjugacy", conjugacy},
      {"sampler cross-check", sampler},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += v.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
