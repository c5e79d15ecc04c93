// Command-line front end: one subcommand per experiment.
//
// Exit codes: 0 all certificate checks pass, 2 certificate failure,
// 1 configuration or runtime error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hmclab/experiments.hpp"
#include "hmclab/io.hpp"

namespace {

using hmclab::ExperimentOutcome;
using hmclab::RunConfig;
using Runner = ExperimentOutcome (*)(const RunConfig&, const std::string&);

void write_outputs(const RunConfig& cfg, const std::string& command, const std::string& out_dir,
                   ExperimentOutcome& result) {
  const std::string cert = (std::filesystem::path(out_dir) / "certificate.json").string();
  nlohmann::ordered_json doc = result.certificate;
  doc["experiment"] = result.name;
  doc["passed"] = result.passed;
  doc["warnings"] = result.warnings;
  hmclab::write_text(cert, doc.dump(2) + "\n");
  result.files.push_back(cert);

  std::ostringstream m;
  m << "# hmclab " << command << "\n"
    << "status = " << (result.passed ? "pass" : "fail") << "\n"
    << "files =";
  for (const auto& f : result.files) m << ' ' << std::filesystem::path(f).filename().string();
  m << "\n\n" << hmclab::echo(cfg);
  hmclab::write_text((std::filesystem::path(out_dir) / "manifest.txt").string(), m.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer-operator analysis of Hamiltonian Monte Carlo"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("--config", config_path, "INI configuration file (defaults when omitted)");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", seed, "Seed for random test vectors and the sampler (overrides the config)");
  app.add_option("--threads", threads, "Assembly threads (0 = runtime default)");

  const std::vector<std::pair<std::string, Runner>> commands{
      {"flow", hmclab::run_flow},
      {"operator", hmclab::run_operator},
      {"spectrum", hmclab::run_spectrum},
      {"kernel-norm", hmclab::run_kernel_norm},
      {"convergence", hmclab::run_convergence},
      {"sampler-check", hmclab::run_sampler_check},
  };
  const std::map<std::string, std::string> help{
      {"flow", "Trajectory, energy and Jacobian determinant along one flow"},
      {"operator", "Assemble the transfer operator and its adjoint; structural checks"},
      {"spectrum", "Leading eigenvalues, spectral gap and fixed-point vector"},
      {"kernel-norm", "Kernel tabulation and Hilbert-Schmidt norm by two routes"},
      {"convergence", "Power iteration trace and geometric-rate certificate"},
      {"sampler-check", "Empirical HMC histogram against the operator fixed point"},
  };
  for (const auto& [name, run] : commands) app.add_subcommand(name, help.at(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg = config_path.empty() ? hmclab::default_config() : hmclab::load_config(config_path);
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--threads")) cfg.threads = threads;
    if (cfg.threads < 0) throw hmclab::ConfigError("--threads must be >= 0");
#ifdef _OPENMP
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, run] : commands) {
      if (!app.got_subcommand(name)) continue;
      ExperimentOutcome result = run(cfg, out_dir);
      write_outputs(cfg, name, out_dir, result);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << name << ": " << (result.passed ? "pass" : "FAIL") << " (" << out_dir << ")\n";
      return result.passed ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
