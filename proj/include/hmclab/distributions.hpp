#pragma once

#include <string>
#include <variant>

#include "hmclab/types.hpp"

namespace hmclab {

/// U(x) = 1/2 (x - mean)^T precision (x - mean).
struct GaussianFamily {
  Vec mean;
  Mat precision;
};

/// One-dimensional U(x) = a x^2 / 2 + b x^4 / 4 with curvature bounds declared
/// on [-halfwidth, halfwidth].
struct AnharmonicFamily {
  double a = 1.0;
  double b = 0.0;
  double halfwidth = 1.0;
};

/// Potential energy of a uniformly strongly log-concave density, i.e. the
/// negative log of an unnormalized density, together with its derivatives and
/// the spectral bounds [lambda_lo, lambda_hi] of its Hessian.
///
/// Potentials are immutable values; every evaluator is pure.
class Potential {
 public:
  using Family = std::variant<GaussianFamily, AnharmonicFamily>;

  int dim() const { return dim_; }
  double eval(const Vec& x) const;
  Vec grad(const Vec& x) const;
  Mat hess(const Vec& x) const;
  /// Scalar versions for d = 1 (hot loops avoid the vector allocations).
  double eval1(double x) const;
  double grad1(double x) const;
  double hess1(double x) const;
  double lambda_lo() const { return lambda_lo_; }
  double lambda_hi() const { return lambda_hi_; }

  bool is_gaussian() const { return std::holds_alternative<GaussianFamily>(family_); }
  /// Null unless the potential is Gaussian.
  const GaussianFamily* gaussian() const { return std::get_if<GaussianFamily>(&family_); }
  const Family& family() const { return family_; }

  /// Whether eval(x) == eval(-x) holds structurally.
  bool is_even() const;

  /// Short human-readable identity, e.g. "gaussian(d=1)" or "anharmonic(a=1,b=0.5,L=2)".
  std::string describe() const;

  friend Potential gaussian_potential(const Vec& mean, const Mat& precision);
  friend Potential anharmonic_potential(double a, double b, double halfwidth);

 private:
  Potential(Family family, int dim, double lo, double hi)
      : family_(std::move(family)), dim_(dim), lambda_lo_(lo), lambda_hi_(hi) {}

  Family family_;
  int dim_;
  double lambda_lo_;
  double lambda_hi_;
};

/// Throws ConfigError when the precision is not symmetric positive definite.
Potential gaussian_potential(const Vec& mean, const Mat& precision);

/// Requires a > 0, b >= 0, halfwidth > 0.
Potential anharmonic_potential(double a, double b, double halfwidth);

/// exp(-U(x)); underflows to 0 for very large U.
double density_value(const Potential& pot, const Vec& x);

/// Target potential U = -log f and auxiliary (kinetic) potential V = -log g
/// over the position box [-L, L]^d.
struct ModelPair {
  Potential target;
  Potential auxiliary;
  double domain_halfwidth;
  bool auxiliary_even;

  int dim() const { return target.dim(); }
  /// min of both potentials' lower curvature bounds.
  double lambda() const;
  /// max of both potentials' upper curvature bounds.
  double Lambda() const;
  bool both_gaussian() const { return target.is_gaussian() && auxiliary.is_gaussian(); }
  std::string describe() const;
};

/// Builds a model, deriving the evenness flag from the auxiliary potential.
ModelPair make_model(Potential target, Potential auxiliary, double domain_halfwidth);

/// Standard Gaussian target and momentum in dimension d.
ModelPair standard_gaussian_model(int d, double domain_halfwidth);

}  // namespace hmclab
