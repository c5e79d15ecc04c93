#pragma once

#include <random>

#include "hmclab/distributions.hpp"

namespace testing_util {

inline hmclab::Mat random_spd(int d, std::mt19937_64& rng, double lo = 0.5, double hi = 3.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(lo, hi);
  hmclab::Mat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = n(rng);
  const Eigen::HouseholderQR<hmclab::Mat> qr(g);
  const hmclab::Mat q = qr.householderQ();
  hmclab::Vec ev(d);
  for (int i = 0; i < d; ++i) ev[i] = u(rng);
  return q * ev.asDiagonal() * q.transpose();
}

inline hmclab::ModelPair anharmonic_model(double L = 4.0) {
  using namespace hmclab;
  return make_model(anharmonic_potential(1.0, 0.5, L), gaussian_potential(Vec::Zero(1), Mat::Identity(1, 1)), L);
}

inline hmclab::Vec vec1(double x) { return hmclab::Vec::Constant(1, x); }

}  // namespace testing_util
