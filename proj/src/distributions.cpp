#include "hmclab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hmclab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double Potential::eval(const Vec& x) const {
  return std::visit(overloaded{
                        [&](const GaussianFamily& g) {
                          const Vec r = x - g.mean;
                          return 0.5 * r.dot(g.precision * r);
                        },
                        [&](const AnharmonicFamily& a) {
                          const double x2 = x[0] * x[0];
                          return 0.5 * a.a * x2 + 0.25 * a.b * x2 * x2;
                        },
                    },
                    family_);
}

Vec Potential::grad(const Vec& x) const {
  return std::visit(overloaded{
                        [&](const GaussianFamily& g) -> Vec { return g.precision * (x - g.mean); },
                        [&](const AnharmonicFamily& a) -> Vec {
                          Vec out(1);
                          out[0] = a.a * x[0] + a.b * x[0] * x[0] * x[0];
                          return out;
                        },
                    },
                    family_);
}

Mat Potential::hess(const Vec& x) const {
  return std::visit(overloaded{
                        [&](const GaussianFamily& g) -> Mat { return g.precision; },
                        [&](const AnharmonicFamily& a) -> Mat {
                          Mat out(1, 1);
                          out(0, 0) = a.a + 3.0 * a.b * x[0] * x[0];
                          return out;
                        },
                    },
                    family_);
}

double Potential::eval1(double x) const {
  if (const auto* a = std::get_if<AnharmonicFamily>(&family_)) {
    const double x2 = x * x;
    return 0.5 * a->a * x2 + 0.25 * a->b * x2 * x2;
  }
  const auto& g = std::get<GaussianFamily>(family_);
  const double r = x - g.mean[0];
  return 0.5 * g.precision(0, 0) * r * r;
}

double Potential::grad1(double x) const {
  if (const auto* a = std::get_if<AnharmonicFamily>(&family_)) return a->a * x + a->b * x * x * x;
  const auto& g = std::get<GaussianFamily>(family_);
  return g.precision(0, 0) * (x - g.mean[0]);
}

double Potential::hess1(double x) const {
  if (const auto* a = std::get_if<AnharmonicFamily>(&family_)) return a->a + 3.0 * a->b * x * x;
  return std::get<GaussianFamily>(family_).precision(0, 0);
}

bool Potential::is_even() const {
  return std::visit(overloaded{
                        [](const GaussianFamily& g) { return g.mean.isZero(0.0); },
                        [](const AnharmonicFamily&) { return true; },
                    },
                    family_);
}

std::string Potential::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const GaussianFamily& g) {
                   os << "gaussian(d=" << g.mean.size() << ",mean=[";
                   for (Eigen::Index i = 0; i < g.mean.size(); ++i) os << (i ? "," : "") << g.mean[i];
                   os << "],precision=[";
                   for (Eigen::Index i = 0; i < g.precision.size(); ++i)
                     os << (i ? "," : "") << g.precision(i / g.precision.cols(), i % g.precision.cols());
                   os << "])";
                 },
                 [&](const AnharmonicFamily& a) {
                   os << "anharmonic(a=" << a.a << ",b=" << a.b << ",L=" << a.halfwidth << ")";
                 },
             },
             family_);
  return os.str();
}

Potential gaussian_potential(const Vec& mean, const Mat& precision) {
  const auto d = mean.size();
  if (d < 1) throw ConfigError("gaussian_potential: dimension must be positive");
  if (precision.rows() != d || precision.cols() != d)
    throw ConfigError("gaussian_potential: precision must be " + std::to_string(d) + "x" +
                      std::to_string(d));
  if (!mean.allFinite() || !precision.allFinite())
    throw ConfigError("gaussian_potential: non-finite parameters");
  const double scale = std::max(1.0, precision.cwiseAbs().maxCoeff());
  if ((precision - precision.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ConfigError("gaussian_potential: precision is not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> eig(precision, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) {
    std::ostringstream os;
    os << "gaussian_potential: precision is not positive definite (smallest eigenvalue " << lo
       << ")";
    throw ConfigError(os.str());
  }
  const Mat sym = 0.5 * (precision + precision.transpose());
  return Potential(GaussianFamily{mean, sym}, static_cast<int>(d), lo, hi);
}

Potential anharmonic_potential(double a, double b, double halfwidth) {
  if (!(a > 0.0)) throw ConfigError("anharmonic_potential: a must be > 0");
  if (!(b >= 0.0)) throw ConfigError("anharmonic_potential: b must be >= 0");
  if (!(halfwidth > 0.0)) throw ConfigError("anharmonic_potential: L must be > 0");
  return Potential(AnharmonicFamily{a, b, halfwidth}, 1, a, a + 3.0 * b * halfwidth * halfwidth);
}

double density_value(const Potential& pot, const Vec& x) { return std::exp(-pot.eval(x)); }

double ModelPair::lambda() const { return std::min(target.lambda_lo(), auxiliary.lambda_lo()); }

double ModelPair::Lambda() const { return std::max(target.lambda_hi(), auxiliary.lambda_hi()); }

std::string ModelPair::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "target=" << target.describe() << ";auxiliary=" << auxiliary.describe()
     << ";L=" << domain_halfwidth;
  return os.str();
}

ModelPair make_model(Potential target, Potential auxiliary, double domain_halfwidth) {
  if (target.dim() != auxiliary.dim())
    throw ConfigError("make_model: target and auxiliary dimensions differ");
  if (!(domain_halfwidth > 0.0)) throw ConfigError("make_model: domain half-width must be > 0");
  const bool even = auxiliary.is_even();
  return ModelPair{std::move(target), std::move(auxiliary), domain_halfwidth, even};
}

ModelPair standard_gaussian_model(int d, double domain_halfwidth) {
  return make_model(gaussian_potential(Vec::Zero(d), Mat::Identity(d, d)),
                    gaussian_potential(Vec::Zero(d), Mat::Identity(d, d)), domain_halfwidth);
}

}  // namespace hmclab
