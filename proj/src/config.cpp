#include "hmclab/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace hmclab {

namespace {

namespace pt = boost::property_tree;

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(field + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw ConfigError(field + ": empty list");
  return out;
}

Vec parse_vector(const std::string& text, int d, const std::string& field) {
  const auto v = parse_list(text, field);
  if (v.size() == 1) return Vec::Constant(d, v[0]);
  if (static_cast<int>(v.size()) != d) throw ConfigError(field + ": expected " + std::to_string(d) + " entries");
  return Eigen::Map<const Vec>(v.data(), d);
}

Mat parse_matrix(const std::string& text, int d, const std::string& field) {
  const auto v = parse_list(text, field);
  if (v.size() == 1) return v[0] * Mat::Identity(d, d);
  if (static_cast<int>(v.size()) != d * d)
    throw ConfigError(field + ": expected 1 or " + std::to_string(d * d) + " entries");
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = v[i * d + j];
  return m;
}

template <class T>
void read(const pt::ptree& tree, const std::string& section, const std::string& key, T& into) {
  const auto node = tree.get_child_optional(pt::ptree::path_type(section + "/" + key, '/'));
  if (!node) return;
  const std::string raw = node->get_value<std::string>();
  if constexpr (std::is_same_v<T, std::string>) {
    into = raw;
  } else {
    std::istringstream is(raw);
    T value{};
    is >> value;
    if (is.fail() || !(is >> std::ws).eof()) throw ConfigError(section + "." + key + ": cannot parse '" + raw + "'");
    into = value;
  }
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"model",
       {"target", "dim", "target_mean", "target_precision", "anharmonic_a", "anharmonic_b", "auxiliary_mean",
        "auxiliary_precision", "halfwidth"}},
      {"flow", {"time", "method", "steps"}},
      {"grid", {"n"}},
      {"operator", {"momentum_nodes", "scheme"}},
      {"experiment",
       {"eigen_k", "max_iterations", "tolerance", "initial", "shift", "samples", "burn_in", "bins", "q0", "p0",
        "trajectory_points", "seed", "threads"}},
  };
  return keys;
}

void check(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + ": " + what);
}

void validate_config(const RunConfig& c) {
  check(c.target == "gaussian" || c.target == "anharmonic", "model.target", "must be gaussian or anharmonic");
  check(c.dim >= 1, "model.dim", "must be >= 1");
  check(c.target != "anharmonic" || c.dim == 1, "model.dim", "anharmonic targets are one-dimensional");
  check(c.halfwidth > 0.0 && std::isfinite(c.halfwidth), "model.halfwidth", "must be positive");
  check(c.time > 0.0 && std::isfinite(c.time), "flow.time", "must be positive");
  check(c.steps >= 0, "flow.steps", "must be >= 0");
  check(c.n >= 16, "grid.n", "must be >= 16");
  check(c.momentum_nodes >= 2, "operator.momentum_nodes", "must be >= 2");
  check(c.eigen_k >= 2, "experiment.eigen_k", "must be >= 2");
  check(c.max_iterations >= 0, "experiment.max_iterations", "must be >= 0");
  check(c.tolerance > 0.0, "experiment.tolerance", "must be positive");
  check(c.initial == "shifted" || c.initial == "target" || c.initial == "random", "experiment.initial",
        "must be shifted, target or random");
  check(c.samples >= 0, "experiment.samples", "must be >= 0");
  check(c.burn_in >= 0, "experiment.burn_in", "must be >= 0");
  check(c.bins >= 1, "experiment.bins", "must be >= 1");
  check(c.trajectory_points >= 2, "experiment.trajectory_points", "must be >= 2");
  check(c.threads >= 0, "experiment.threads", "must be >= 0");
  parse_flow_method(c.method);
  parse_deposit_scheme(c.scheme);
}

}  // namespace

RunConfig default_config() { return RunConfig{}; }

RunConfig load_config(const std::string& path) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ConfigError("config: unknown section [" + section + "]");
    for (const auto& [key, value] : body)
      if (!it->second.count(key)) throw ConfigError(section + "." + key + ": unknown key");
  }
  RunConfig c;
  read(tree, "model", "target", c.target);
  read(tree, "model", "dim", c.dim);
  read(tree, "model", "target_mean", c.target_mean);
  read(tree, "model", "target_precision", c.target_precision);
  read(tree, "model", "anharmonic_a", c.anharmonic_a);
  read(tree, "model", "anharmonic_b", c.anharmonic_b);
  read(tree, "model", "auxiliary_mean", c.auxiliary_mean);
  read(tree, "model", "auxiliary_precision", c.auxiliary_precision);
  read(tree, "model", "halfwidth", c.halfwidth);
  read(tree, "flow", "time", c.time);
  read(tree, "flow", "method", c.method);
  read(tree, "flow", "steps", c.steps);
  read(tree, "grid", "n", c.n);
  read(tree, "operator", "momentum_nodes", c.momentum_nodes);
  read(tree, "operator", "scheme", c.scheme);
  read(tree, "experiment", "eigen_k", c.eigen_k);
  read(tree, "experiment", "max_iterations", c.max_iterations);
  read(tree, "experiment", "tolerance", c.tolerance);
  read(tree, "experiment", "initial", c.initial);
  read(tree, "experiment", "shift", c.shift);
  read(tree, "experiment", "samples", c.samples);
  read(tree, "experiment", "burn_in", c.burn_in);
  read(tree, "experiment", "bins", c.bins);
  read(tree, "experiment", "q0", c.q0);
  read(tree, "experiment", "p0", c.p0);
  read(tree, "experiment", "trajectory_points", c.trajectory_points);
  read(tree, "experiment", "seed", c.seed);
  read(tree, "experiment", "threads", c.threads);
  validate_config(c);
  return c;
}

ModelPair build_model(const RunConfig& c) {
  validate_config(c);
  Potential target = c.target == "anharmonic"
                         ? anharmonic_potential(c.anharmonic_a, c.anharmonic_b, c.halfwidth)
                         : gaussian_potential(parse_vector(c.target_mean, c.dim, "model.target_mean"),
                                              parse_matrix(c.target_precision, c.dim, "model.target_precision"));
  Potential aux = gaussian_potential(parse_vector(c.auxiliary_mean, c.dim, "model.auxiliary_mean"),
                                     parse_matrix(c.auxiliary_precision, c.dim, "model.auxiliary_precision"));
  return make_model(std::move(target), std::move(aux), c.halfwidth);
}

FlowSpec build_flow_spec(const RunConfig& c, const ModelPair& model) {
  const FlowMethod method = parse_flow_method(c.method);
  FlowSpec spec = c.steps > 0 ? FlowSpec{c.time, c.steps, method} : default_flow_spec(model, c.time, method);
  validate(spec, model);
  return spec;
}

DepositScheme build_scheme(const RunConfig& c) { return parse_deposit_scheme(c.scheme); }

std::string echo(const RunConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "[model]\n"
     << "target = " << c.target << "\ndim = " << c.dim << "\ntarget_mean = " << c.target_mean
     << "\ntarget_precision = " << c.target_precision << "\nanharmonic_a = " << c.anharmonic_a
     << "\nanharmonic_b = " << c.anharmonic_b << "\nauxiliary_mean = " << c.auxiliary_mean
     << "\nauxiliary_precision = " << c.auxiliary_precision << "\nhalfwidth = " << c.halfwidth << "\n\n"
     << "[flow]\ntime = " << c.time << "\nmethod = " << c.method << "\nsteps = " << c.steps << "\n\n"
     << "[grid]\nn = " << c.n << "\n\n"
     << "[operator]\nmomentum_nodes = " << c.momentum_nodes << "\nscheme = " << c.scheme << "\n\n"
     << "[experiment]\neigen_k = " << c.eigen_k << "\nmax_iterations = " << c.max_iterations
     << "\ntolerance = " << c.tolerance << "\ninitial = " << c.initial << "\nshift = " << c.shift
     << "\nsamples = " << c.samples << "\nburn_in = " << c.burn_in << "\nbins = " << c.bins << "\nq0 = " << c.q0
     << "\np0 = " << c.p0 << "\ntrajectory_points = " << c.trajectory_points << "\nseed = " << c.seed
     << "\nthreads = " << c.threads << "\n";
  return os.str();
}

}  // namespace hmclab
