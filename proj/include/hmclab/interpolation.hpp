#pragma once

#include <utility>
#include <vector>

#include "hmclab/grid.hpp"

namespace hmclab {

/// Local C^1 cubic Hermite interpolation on a uniform tensor grid.
///
/// Nodal slopes come from fourth-order central differences (second order in
/// the two outermost cells), so the interpolant reproduces cubics in the
/// interior. The interpolant is linear in the nodal data; `stencil` returns
/// the (node index, weight) pairs for one evaluation point. Outside the box
/// the interpolant is zero.
class GridInterpolator {
 public:
  explicit GridInterpolator(const DensityGrid& grid);

  using Stencil = std::vector<std::pair<Eigen::Index, double>>;

  /// Returns false (and clears `out`) when x lies outside the box.
  bool stencil(const Vec& x, Stencil& out) const;
  double evaluate(const DensityVector& values, const Vec& x) const;

 private:
  /// One-dimensional cardinal weights for coordinate x: up to 6 (index, weight).
  int axis_weights(double x, int* index, double* weight) const;

  int dim_;
  int n_;
  double lo_;
  double h_;
  std::vector<Eigen::Index> strides_;
};

}  // namespace hmclab
