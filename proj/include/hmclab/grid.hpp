#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hmclab/distributions.hpp"

namespace hmclab {

/// Node values h_i of a (possibly signed) density on a DensityGrid.
using DensityVector = Vec;

/// Tensor trapezoid grid over [-L, L]^d carrying the target values f_i.
///
/// Nodes are enumerated with the last axis varying fastest. Nodes with
/// f_i < floor are dropped from weighted norms and inner products.
struct DensityGrid {
  int dim = 1;
  int n_per_axis = 0;
  double halfwidth = 0.0;
  double spacing = 0.0;
  std::vector<double> axis;
  Mat nodes;  ///< d x n
  Vec weights;
  Vec target_values;
  double floor = 0.0;
  std::vector<char> retained;
  /// Fraction of sum_i w_i f_i carried by dropped nodes.
  double dropped_mass_fraction = 0.0;
  /// Non-empty when the target integral deviates from a 4x refined grid by
  /// more than 1e-3 (relative).
  std::string warning;

  std::size_t size() const { return static_cast<std::size_t>(weights.size()); }
  Vec node(std::size_t i) const { return nodes.col(static_cast<Eigen::Index>(i)); }
  std::size_t retained_count() const;
  /// Identity used to check that two matrices live on the same grid.
  std::string fingerprint() const;
};

/// Requires n_per_axis >= 16. floor = 1e-12 * max f_i.
DensityGrid build_grid(const ModelPair& model, int n_per_axis);

/// <a, b> = sum over retained nodes of w_i a_i b_i / f_i.
double weighted_inner(const DensityVector& a, const DensityVector& b, const DensityGrid& grid);
/// ||a||_2 = sqrt(<a, a>).
double weighted_norm(const DensityVector& a, const DensityGrid& grid);
/// sum_i w_i h_i over all nodes.
double mass(const DensityVector& h, const DensityGrid& grid);

/// Target values f_i as a density vector.
DensityVector target_density(const DensityGrid& grid);

}  // namespace hmclab
