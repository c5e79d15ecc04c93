#include "hmclab/interpolation.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hmclab {

GridInterpolator::GridInterpolator(const DensityGrid& grid)
    : dim_(grid.dim), n_(grid.n_per_axis), lo_(grid.axis.front()), h_(grid.spacing), strides_(grid.dim) {
  Eigen::Index stride = 1;
  for (int k = dim_ - 1; k >= 0; --k) {
    strides_[k] = stride;
    stride *= n_;
  }
}

int GridInterpolator::axis_weights(double x, int* index, double* weight) const {
  const double t = (x - lo_) / h_;
  if (!(t >= -1e-12) || !(t <= (n_ - 1) + 1e-12)) return 0;
  int j = static_cast<int>(std::floor(t));
  j = std::clamp(j, 0, n_ - 2);
  const double s = std::clamp(t - j, 0.0, 1.0);

  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;

  // Local slots cover nodes j-2 .. j+3.
  std::array<double, 6> w{};
  auto add = [&](int node, double c) { w[node - (j - 2)] += c; };
  auto add_slope = [&](int i, double c) {
    if (i == 0) {
      add(0, -1.5 * c);
      add(1, 2.0 * c);
      add(2, -0.5 * c);
    } else if (i == n_ - 1) {
      add(n_ - 1, 1.5 * c);
      add(n_ - 2, -2.0 * c);
      add(n_ - 3, 0.5 * c);
    } else if (i == 1 || i == n_ - 2) {
      add(i - 1, -0.5 * c);
      add(i + 1, 0.5 * c);
    } else {
      add(i - 2, c / 12.0);
      add(i - 1, -8.0 * c / 12.0);
      add(i + 1, 8.0 * c / 12.0);
      add(i + 2, -c / 12.0);
    }
  };
  add(j, h00);
  add(j + 1, h01);
  add_slope(j, h10);
  add_slope(j + 1, h11);

  int count = 0;
  for (int slot = 0; slot < 6; ++slot) {
    const int node = j - 2 + slot;
    if (node < 0 || node >= n_ || w[slot] == 0.0) continue;
    index[count] = node;
    weight[count] = w[slot];
    ++count;
  }
  return count;
}

bool GridInterpolator::stencil(const Vec& x, Stencil& out) const {
  out.clear();
  std::array<int, 6> idx{};
  std::array<double, 6> wt{};
  out.emplace_back(0, 1.0);
  Stencil next;
  for (int k = 0; k < dim_; ++k) {
    const int c = axis_weights(x[k], idx.data(), wt.data());
    if (c == 0) {
      out.clear();
      return false;
    }
    next.clear();
    for (const auto& [base, bw] : out)
      for (int a = 0; a < c; ++a) next.emplace_back(base + idx[a] * strides_[k], bw * wt[a]);
    out.swap(next);
  }
  return true;
}

double GridInterpolator::evaluate(const DensityVector& values, const Vec& x) const {
  Stencil st;
  if (!stencil(x, st)) return 0.0;
  double s = 0.0;
  for (const auto& [i, w] : st) s += w * values[i];
  return s;
}

}  // namespace hmclab
