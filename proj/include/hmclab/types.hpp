#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hmclab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Invalid parameters, configuration fields, or model/method combinations.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix expected to be symmetric positive definite is not.
class NotSpdError : public std::domain_error {
 public:
  NotSpdError(const std::string& what, double eigenvalue)
      : std::domain_error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// A Jacobian block is (numerically) singular, i.e. the flow time sits at or
/// beyond a conjugate point.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested time lies outside the small-time regime t * Lambda < pi/2.
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two independent computations of the same quantity disagree.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hmclab
