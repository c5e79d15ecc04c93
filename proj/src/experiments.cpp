#include "hmclab/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>

#include "hmclab/io.hpp"
#include "hmclab/iteration.hpp"
#include "hmclab/kernel.hpp"
#include "hmclab/probes.hpp"
#include "hmclab/sampler.hpp"
#include "hmclab/spectral.hpp"
#include "hmclab/tangent.hpp"

namespace hmclab {

namespace {

using json = nlohmann::ordered_json;

std::string join(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

json check(double value, double limit, bool applicable = true, const char* relation = "<") {
  const bool ok = std::string(relation) == "<" ? value < limit : value <= limit;
  return json{{"value", value}, {"limit", limit}, {"relation", relation}, {"applicable", applicable},
              {"pass", ok || !applicable}};
}

bool all_pass(const json& checks) {
  for (const auto& [key, c] : checks.items())
    if (!c.at("pass").get<bool>()) return false;
  return true;
}

void add_warnings(ExperimentOutcome& out, const std::vector<std::string>& w) {
  out.warnings.insert(out.warnings.end(), w.begin(), w.end());
}

json header(const RunConfig& cfg, const ModelPair& model, const FlowSpec& spec) {
  return json{{"model", model.describe()},
              {"flow", {{"time", spec.time}, {"method", to_string(spec.method)}, {"steps", spec.n_steps}}},
              {"grid_n", cfg.n},
              {"momentum_nodes", cfg.momentum_nodes},
              {"scheme", cfg.scheme},
              {"seed", cfg.seed}};
}

DensityVector initial_density(const RunConfig& cfg, const DensityGrid& grid) {
  if (cfg.initial == "target") return grid.target_values;
  if (cfg.initial == "random") {
    std::mt19937_64 rng(cfg.seed);
    return random_density(grid, rng);
  }
  return tilted_target(grid, Vec::Constant(grid.dim, cfg.shift));
}

}  // namespace

double gaussian_rate_oracle(const ModelPair& model, const FlowSpec& spec) {
  if (model.dim() != 1 || !model.both_gaussian() || spec.method != FlowMethod::exact_gaussian)
    return std::numeric_limits<double>::quiet_NaN();
  const double omega =
      std::sqrt(model.target.gaussian()->precision(0, 0) * model.auxiliary.gaussian()->precision(0, 0));
  return std::cos(omega * spec.time);
}

ExperimentOutcome run_flow(const RunConfig& cfg, const std::string& out_dir) {
  const ModelPair model = build_model(cfg);
  const FlowSpec spec = build_flow_spec(cfg, model);
  const int d = model.dim();
  const PhaseState start{Vec::Constant(d, cfg.q0), Vec::Constant(d, cfg.p0)};
  const double h_start = total_energy(start, model);

  std::vector<std::string> cols{"s"};
  for (int k = 0; k < d; ++k) cols.push_back("Q" + std::to_string(k));
  for (int k = 0; k < d; ++k) cols.push_back("P" + std::to_string(k));
  cols.push_back("H");
  cols.push_back("detJ");

  std::vector<std::vector<double>> rows;
  double e_min = h_start, e_max = h_start, det_err = 0.0;
  PhaseState last = start;
  for (int i = 0; i < cfg.trajectory_points; ++i) {
    const double s = spec.time * i / (cfg.trajectory_points - 1);
    std::vector<double> row{s};
    PhaseState st = start;
    double det = 1.0;
    if (i > 0) {
      FlowSpec sub = spec;
      sub.time = s;
      if (spec.method == FlowMethod::leapfrog)
        sub.n_steps = std::max(1, static_cast<int>(std::lround(spec.n_steps * s / spec.time)));
      const TangentResult r = integrate_tangent(start, model, sub);
      st = r.state;
      det = r.blocks.full().determinant();
    }
    for (int k = 0; k < d; ++k) row.push_back(st.q[k]);
    for (int k = 0; k < d; ++k) row.push_back(st.p[k]);
    const double h = total_energy(st, model);
    row.push_back(h);
    row.push_back(det);
    e_min = std::min(e_min, h);
    e_max = std::max(e_max, h);
    det_err = std::max(det_err, std::abs(det - 1.0));
    rows.push_back(std::move(row));
    last = st;
  }
  ExperimentOutcome out;
  out.name = "flow";
  const std::string path = join(out_dir, "trajectory.csv");
  write_csv(path, cols, rows);
  out.files.push_back(path);

  const bool exact = spec.method == FlowMethod::exact_gaussian;
  json checks;
  checks["energy_drift"] = check(e_max - e_min, exact ? 1e-10 : 1e-5);
  checks["det_jacobian"] = check(det_err, 1e-10);
  out.certificate = header(cfg, model, spec);
  out.certificate["checks"] = checks;
  out.certificate["closure_distance"] =
      std::sqrt((last.q - start.q).squaredNorm() + (last.p - start.p).squaredNorm());
  out.passed = all_pass(checks);
  return out;
}

ExperimentOutcome run_operator(const RunConfig& cfg, const std::string& out_dir) {
  const ModelPair model = build_model(cfg);
  const FlowSpec spec = build_flow_spec(cfg, model);
  const DensityGrid grid = build_grid(model, cfg.n);
  const DepositScheme scheme = build_scheme(cfg);
  const TransferMatrix T = assemble_transfer(grid, model, spec, cfg.momentum_nodes, scheme);
  const TransferMatrix Ta = assemble_adjoint(grid, model, spec, cfg.momentum_nodes, scheme);

  ExperimentOutcome out;
  out.name = "operator";
  add_warnings(out, T.warnings);
  if (!grid.warning.empty()) out.warnings.push_back(grid.warning);

  std::mt19937_64 rng(cfg.seed);
  double mass_err = 0.0, norm_ratio = 0.0, zero_mass_ratio = 0.0, positivity = 0.0;
  std::vector<std::vector<double>> rows;
  for (int c = 0; c < 100; ++c) {
    const DensityVector h = random_density(grid, rng);
    const DensityVector th = apply(T, h);
    const double me = std::abs(mass(th, grid) - mass(h, grid)) / mass(h.cwiseAbs(), grid);
    const double nr = weighted_norm(th, grid) / weighted_norm(h, grid);
    const DensityVector h0 = remove_mass(h, grid);
    const double zr = weighted_norm(apply(T, h0), grid) / weighted_norm(h0, grid);
    const double pos = std::max(0.0, -th.minCoeff()) / h.cwiseAbs().maxCoeff();
    mass_err = std::max(mass_err, me);
    norm_ratio = std::max(norm_ratio, nr);
    zero_mass_ratio = std::max(zero_mass_ratio, zr);
    positivity = std::max(positivity, pos);
    rows.push_back({double(c), me, nr, zr, pos});
  }
  const std::string probes = join(out_dir, "operator_probes.csv");
  write_csv(probes, {"probe", "mass_error", "norm_ratio", "zero_mass_ratio", "negativity"}, rows);
  const std::string tpath = join(out_dir, "transfer.bin");
  const std::string apath = join(out_dir, "adjoint.bin");
  write_matrix(tpath, T.entries);
  write_matrix(apath, Ta.entries);
  out.files = {probes, tpath, apath};

  const bool exact_energy = spec.method == FlowMethod::exact_gaussian;
  const bool self_adjoint_case = model.auxiliary_even && exact_energy;
  json checks;
  checks["fixed_point"] = check(fixed_point_defect(T, grid), 1e-6, exact_energy);
  checks["mass_conservation"] = check(mass_err, 1e-7);
  checks["norm_contraction"] = check(norm_ratio, 1.0 + 1e-10, true, "<=");
  checks["zero_mass_contraction"] = check(zero_mass_ratio, 0.99, true, "<=");
  checks["positivity"] = check(positivity, 1e-12, true, "<=");
  checks["weighted_symmetry"] = check(weighted_symmetry_residual(T, grid), 1e-7, self_adjoint_case);
  checks["adjoint_duality"] = check(adjoint_duality_residual(T, Ta, grid, 20, cfg.seed), 1e-7, exact_energy);
  if (model.auxiliary_even && model.both_gaussian())
    checks["forward_equals_adjoint"] = check((T.entries - Ta.entries).cwiseAbs().maxCoeff(), 1e-7, exact_energy);
  out.certificate = header(cfg, model, spec);
  out.certificate["leakage"] = {{"significant_pairs", T.leakage.significant_pairs},
                                {"leaving_pairs", T.leakage.leaving_pairs},
                                {"leaked_mass_fraction", T.leakage.leaked_mass_fraction}};
  out.certificate["dropped_mass_fraction"] = grid.dropped_mass_fraction;
  out.certificate["checks"] = checks;
  out.passed = all_pass(checks);
  return out;
}

ExperimentOutcome run_spectrum(const RunConfig& cfg, const std::string& out_dir) {
  const ModelPair model = build_model(cfg);
  const FlowSpec spec = build_flow_spec(cfg, model);
  const DensityGrid grid = build_grid(model, cfg.n);
  const TransferMatrix T = assemble_transfer(grid, model, spec, cfg.momentum_nodes, build_scheme(cfg));
  const SpectralReport rep = eigen_spectrum(T, grid, cfg.eigen_k);

  ExperimentOutcome out;
  out.name = "spectrum";
  add_warnings(out, T.warnings);
  add_warnings(out, rep.warnings);
  const double c = gaussian_rate_oracle(model, spec);
  std::vector<std::vector<double>> rows;
  double oracle_err = 0.0;
  for (std::size_t k = 0; k < rep.eigenvalues.size(); ++k) {
    const double oracle = std::isfinite(c) ? std::pow(c, static_cast<double>(k)) : c;
    rows.push_back({double(k), rep.eigenvalues[k], oracle});
    if (std::isfinite(oracle)) oracle_err = std::max(oracle_err, std::abs(rep.eigenvalues[k] - oracle));
  }
  const std::string epath = join(out_dir, "eigenvalues.csv");
  write_csv(epath, {"k", "mu", "oracle"}, rows);
  rows.clear();
  for (Eigen::Index i = 0; i < T.size(); ++i)
    rows.push_back({grid.nodes(0, i), rep.leading_vector[i], grid.target_values[i], rep.second_vector[i]});
  const std::string vpath = join(out_dir, "leading_vector.csv");
  write_csv(vpath, {"q0", "leading", "target", "second"}, rows);
  out.files = {epath, vpath};

  double max_abs = 0.0;
  for (double mu : rep.eigenvalues) max_abs = std::max(max_abs, std::abs(mu));
  json checks;
  checks["mu1"] = check(std::abs(rep.eigenvalues[0] - 1.0), 1e-4, true, "<=");
  checks["unit_disk"] = check(max_abs, 1.0 + 1e-6, true, "<=");
  checks["leading_vector"] = check(rep.leading_deviation, 1e-4);
  checks["second_vector_mass"] = check(rep.second_vector_mass, 1e-6, true, "<=");
  checks["oracle"] = check(oracle_err, 1e-3, std::isfinite(c));
  out.certificate = header(cfg, model, spec);
  out.certificate["eigenvalues"] = rep.eigenvalues;
  out.certificate["gap"] = rep.gap;
  out.certificate["rate_bound"] = rep.rate_bound;
  out.certificate["multiplicity_check"] = rep.multiplicity_check;
  out.certificate["symmetrized"] = rep.symmetrized;
  out.certificate["symmetry_residual"] = rep.symmetry_residual;
  out.certificate["solver"] = rep.solver;
  out.certificate["checks"] = checks;
  out.passed = all_pass(checks);
  return out;
}

ExperimentOutcome run_kernel_norm(const RunConfig& cfg, const std::string& out_dir) {
  const ModelPair model = build_model(cfg);
  const FlowSpec spec = build_flow_spec(cfg, model);
  const DensityGrid grid = build_grid(model, cfg.n);
  const KernelField field = assemble_kernel(grid, model, spec, cfg.momentum_nodes);
  ExperimentOutcome out;
  out.name = "kernel-norm";

  const double gap = std::abs(field.hs_norm_sq - field.hs_norm_sq_momentum) / field.hs_norm_sq;
  // Sum of squared eigenvalues of the weighted-similarity form of T = K w / f.
  const TransferMatrix T = assemble_transfer(grid, model, spec, cfg.momentum_nodes, DepositScheme::preimage);
  add_warnings(out, T.warnings);
  const Mat m = weighted_similarity(T, grid);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  const double sum_mu2 = es.eigenvalues().squaredNorm();
  const double bound = std::pow(spec.time * sinc(spec.time * model.lambda()), -2.0 * model.dim());
  const double c = gaussian_rate_oracle(model, spec);
  const double oracle = 1.0 / (1.0 - c * c);

  const std::string kpath = join(out_dir, "kernel.bin");
  write_matrix(kpath, field.values);
  const std::string npath = join(out_dir, "hs_norm.csv");
  write_csv(npath, {"position_route", "momentum_route", "sum_mu_squared", "upper_bound", "oracle"},
            {{field.hs_norm_sq, field.hs_norm_sq_momentum, sum_mu2, bound, oracle}});
  out.files = {kpath, npath};

  json checks;
  checks["routes_agree"] = check(gap, 1e-4);
  checks["hilbert_schmidt_identity"] = check(std::abs(sum_mu2 - field.hs_norm_sq) / field.hs_norm_sq, 1e-3);
  checks["determinant_bound"] = check(field.hs_norm_sq, bound * (1.0 + 1e-6), true, "<=");
  checks["oracle"] = check(std::abs(field.hs_norm_sq - oracle) / oracle, 1e-3, std::isfinite(c));
  out.certificate = header(cfg, model, spec);
  out.certificate["hs_norm_sq"] = field.hs_norm_sq;
  out.certificate["hs_norm_sq_momentum"] = field.hs_norm_sq_momentum;
  out.certificate["sum_mu_squared"] = sum_mu2;
  out.certificate["checks"] = checks;
  out.passed = all_pass(checks);
  if (gap > 1e-3) {
    out.certificate["consistency_failure"] = "position and momentum routes disagree by more than 1e-3";
    out.passed = false;
  }
  return out;
}

ExperimentOutcome run_convergence(const RunConfig& cfg, const std::string& out_dir) {
  const ModelPair model = build_model(cfg);
  const FlowSpec spec = build_flow_spec(cfg, model);
  const DensityGrid grid = build_grid(model, cfg.n);
  const TransferMatrix T = assemble_transfer(grid, model, spec, cfg.momentum_nodes, build_scheme(cfg));
  const SpectralReport rep = eigen_spectrum(T, grid, std::max(2, cfg.eigen_k));
  const IterationTrace trace = iterate(T, grid, initial_density(cfg, grid), cfg.max_iterations, cfg.tolerance);
  RateOptions opts;
  opts.defect = fixed_point_defect(T, grid);
  const RateCertificate cert = certify_rate(rep, trace, grid, opts);

  ExperimentOutcome out;
  out.name = "convergence";
  add_warnings(out, T.warnings);
  add_warnings(out, rep.warnings);
  if (!trace.anomaly.empty()) out.warnings.push_back(trace.anomaly);

  std::vector<std::vector<double>> rows;
  bool monotone = true;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    rows.push_back({double(r.n), r.norm, r.error});
    if (i > 0 && r.norm > trace.records[i - 1].norm * (1.0 + 1e-10)) monotone = false;
  }
  const std::string tpath = join(out_dir, "trace.csv");
  write_csv(tpath, {"n", "norm", "error"}, rows);
  out.files.push_back(tpath);
  if (!cert.residuals.empty()) {
    rows.clear();
    for (const auto& r : cert.residuals) rows.push_back({r[0], r[1], r[2]});
    const std::string rpath = join(out_dir, "rate_fit.csv");
    write_csv(rpath, {"n", "log_error", "fitted_log_error"}, rows);
    out.files.push_back(rpath);
  }

  out.certificate = header(cfg, model, spec);
  out.certificate["status"] = to_string(cert.status);
  out.certificate["rho_empirical"] = cert.rho_empirical;
  out.certificate["rho_spectral"] = cert.rho_spectral;
  out.certificate["relative_mismatch"] = cert.relative_mismatch;
  out.certificate["r_squared"] = cert.r_squared;
  out.certificate["window"] = {cert.window_begin, cert.window_end};
  out.certificate["fixed_point_defect"] = opts.defect;
  out.certificate["norm_monotone"] = monotone;
  out.certificate["alpha"] = trace.alpha;
  out.certificate["iterations"] = trace.records.size() - 1;
  if (!cert.reason.empty()) out.certificate["reason"] = cert.reason;
  const double oracle = gaussian_rate_oracle(model, spec);
  if (std::isfinite(oracle)) out.certificate["rho_oracle"] = std::abs(oracle);
  if (!trace.anomaly.empty()) out.certificate["anomaly"] = trace.anomaly;
  out.passed = cert.status != CertificateStatus::fail && monotone && trace.anomaly.empty();
  return out;
}

ExperimentOutcome run_sampler_check(const RunConfig& cfg, const std::string& out_dir) {
  const ModelPair model = build_model(cfg);
  const FlowSpec spec = build_flow_spec(cfg, model);
  const DensityGrid grid = build_grid(model, cfg.n);
  ExperimentOutcome out;
  out.name = "sampler-check";

  DensityVector reference = grid.target_values;
  if (cfg.samples > 0) {
    const TransferMatrix T = assemble_transfer(grid, model, spec, cfg.momentum_nodes, build_scheme(cfg));
    add_warnings(out, T.warnings);
    reference = eigen_spectrum(T, grid, 2).leading_vector;
  }
  SamplerOptions opts{cfg.samples, cfg.burn_in, cfg.bins, cfg.seed};
  const SamplerReport rep = run_sampler(model, spec, grid, reference, opts);
  add_warnings(out, rep.warnings);

  std::vector<std::vector<double>> rows;
  for (std::size_t b = 0; b < rep.empirical_mass.size(); ++b)
    rows.push_back({rep.bin_edges[b], rep.bin_edges[b + 1], rep.empirical_mass[b], rep.reference_mass[b]});
  const std::string hpath = join(out_dir, "histogram.csv");
  write_csv(hpath, {"left", "right", "empirical_mass", "reference_mass"}, rows);
  out.files.push_back(hpath);

  json checks;
  checks["sup_distance"] = check(rep.sup_distance, 0.01, cfg.samples > 0);
  out.certificate = header(cfg, model, spec);
  out.certificate["samples"] = rep.samples;
  out.certificate["acceptance_rate"] = rep.acceptance_rate;
  out.certificate["sup_distance"] = rep.sup_distance;
  out.certificate["sup_distance_density"] = rep.sup_distance_density;
  out.certificate["outside"] = rep.outside;
  out.certificate["checks"] = checks;
  out.passed = all_pass(checks);
  return out;
}

}  // namespace hmclab
