#include "hmclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace hmclab {

GaussHermiteRule gauss_hermite(int m) {
  if (m < 1) throw ConfigError("gauss_hermite: number of nodes must be >= 1");
  // Golub-Welsch eigenvalues as starting points, then Newton on the orthonormal
  // probabilists' Hermite recurrence. The recurrence is rescaled on the fly and
  // its log-scale tracked, since p_m(x) overflows for the extreme nodes.
  const int n = m;
  Vec diag = Vec::Zero(n);
  Vec off(std::max(n - 1, 0));
  for (int j = 1; j < n; ++j) off[j - 1] = std::sqrt(static_cast<double>(j));
  Eigen::SelfAdjointEigenSolver<Mat> gw;
  gw.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);

  // Returns p_n(x), p_{n-1}(x) divided by exp(log_scale).
  auto recurrence = [n](double x, double& pn, double& pn1, double& log_scale) {
    double p_prev = 0.0;
    double p = 1.0;  // p_0, with the 1/(2 pi)^{1/4} folded into the weights
    log_scale = 0.0;
    for (int j = 0; j < n; ++j) {
      const double next = (x * p - std::sqrt(static_cast<double>(j)) * p_prev) / std::sqrt(j + 1.0);
      p_prev = p;
      p = next;
      const double a = std::abs(p);
      if (a > 1e100) {
        p /= a;
        p_prev /= a;
        log_scale += std::log(a);
      }
    }
    pn = p;
    pn1 = p_prev;
  };

  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  std::vector<double> log_w(n);
  for (int i = 0; i < n; ++i) {
    double x = gw.eigenvalues()[i];
    double pn = 0.0, pn1 = 0.0, ls = 0.0;
    for (int it = 0; it < 50; ++it) {
      recurrence(x, pn, pn1, ls);
      // p_n' = sqrt(n) p_{n-1}
      const double dx = pn / (std::sqrt(static_cast<double>(n)) * pn1);
      x -= dx;
      if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    recurrence(x, pn, pn1, ls);
    // w = sqrt(2 pi) / (n p_{n-1}(x)^2) for orthonormal p_k.
    log_w[i] = 0.5 * std::log(2.0 * std::numbers::pi) - std::log(static_cast<double>(n)) -
               2.0 * (std::log(std::abs(pn1)) + ls);
    rule.nodes[i] = x;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  // Symmetrize: the rule is exactly symmetric.
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double lw = 0.5 * (log_w[i] + log_w[n - 1 - i]);
    log_w[i] = lw;
    log_w[n - 1 - i] = lw;
  }
  for (int i = 0; i < n; ++i) rule.weights[i] = std::exp(log_w[i]);
  return rule;
}

double MomentumQuadrature::deposit_weight(std::size_t k, double potential_at_image) const {
  return std::exp(log_probabilities[k] + potential[k] - potential_at_image);
}

double MomentumQuadrature::normalized_density(double potential_value) const {
  return std::exp(-potential_value - log_normalizer);
}

double momentum_support_halfwidth(const Potential& auxiliary, double tail) {
  if (auxiliary.dim() != 1)
    throw ConfigError("momentum_support_halfwidth: only one-dimensional auxiliaries");
  auto v = [&](double x) { return auxiliary.eval(Vec::Constant(1, x)); };
  double reach = 1.0;
  while (v(reach) < 60.0 || v(-reach) < 60.0) reach *= 2.0;

  constexpr int kSamples = 20001;
  const double h = 2.0 * reach / (kSamples - 1);
  std::vector<double> dens(kSamples);
  double total = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    dens[i] = std::exp(-v(-reach + i * h));
    total += dens[i];
  }
  // Shrink symmetrically while the mass outside stays below tail * total.
  double outside = 0.0;
  int lo = 0;
  int hi = kSamples - 1;
  while (hi - lo > 2) {
    const double next = outside + dens[lo] + dens[hi];
    if (next > tail * total) break;
    outside = next;
    ++lo;
    --hi;
  }
  return std::max(std::abs(-reach + lo * h), std::abs(-reach + hi * h));
}

double momentum_window(const Potential& auxiliary, double window) {
  if (auxiliary.dim() != 1) throw ConfigError("momentum_window: only one-dimensional auxiliaries");
  auto v = [&](double x) { return auxiliary.eval(Vec::Constant(1, x)); };
  double reach = 1.0;
  for (int it = 0; it < 60; ++it) {
    constexpr int kScan = 4001;
    double v_min = v(0.0);
    for (int i = 0; i < kScan; ++i) v_min = std::min(v_min, v(-reach + 2.0 * reach * i / (kScan - 1)));
    if (v(reach) - v_min >= window && v(-reach) - v_min >= window) {
      // Shrink each side to the crossing of v_min + window.
      auto crossing = [&](double sign) {
        double lo = 0.0, hi = reach;
        if (v(0.0) - v_min >= window) return 0.0;
        for (int b = 0; b < 100; ++b) {
          const double mid = 0.5 * (lo + hi);
          (v(sign * mid) - v_min < window ? lo : hi) = mid;
        }
        return hi;
      };
      return std::max(crossing(1.0), crossing(-1.0));
    }
    reach *= 2.0;
  }
  throw ConfigError("momentum_window: auxiliary potential does not grow");
}

double log_auxiliary_normalizer(const Potential& auxiliary) {
  if (const GaussianFamily* g = auxiliary.gaussian())
    return 0.5 * g->precision.rows() * std::log(2.0 * std::numbers::pi) - 0.5 * std::log(g->precision.determinant()) -
           auxiliary.eval(g->mean);
  if (auxiliary.dim() != 1) throw ConfigError("log_auxiliary_normalizer: non-Gaussian auxiliaries must be 1-d");
  // Trapezoid on a window holding all but ~e^-80 of the mass: spectrally
  // accurate for smooth, rapidly decaying integrands.
  const double reach = momentum_window(auxiliary, 80.0);
  constexpr int kSamples = 40001;
  const double h = 2.0 * reach / (kSamples - 1);
  std::vector<double> v(kSamples);
  for (int i = 0; i < kSamples; ++i) v[i] = auxiliary.eval(Vec::Constant(1, -reach + i * h));
  const double v_min = *std::min_element(v.begin(), v.end());
  double total = 0.0;
  for (int i = 0; i < kSamples; ++i) total += (i == 0 || i == kSamples - 1 ? 0.5 : 1.0) * std::exp(v_min - v[i]);
  return std::log(total * h) - v_min;
}

MomentumQuadrature build_momentum_quadrature(const Potential& auxiliary, int m) {
  if (m < 2) throw ConfigError("momentum quadrature: need at least 2 nodes");
  MomentumQuadrature out;
  const int d = auxiliary.dim();
  std::ostringstream desc;

  if (const GaussianFamily* g = auxiliary.gaussian()) {
    const GaussHermiteRule rule = gauss_hermite(m);
    // p = mean + precision^{-1/2} x with x ~ exp(-|x|^2/2).
    Eigen::SelfAdjointEigenSolver<Mat> eig(g->precision);
    const Mat inv_sqrt =
        eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
        eig.eigenvectors().transpose();
    const double axis_total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
    std::size_t count = 1;
    for (int k = 0; k < d; ++k) count *= static_cast<std::size_t>(m);
    out.nodes.reserve(count);
    out.probabilities.reserve(count);
    std::vector<int> idx(d, 0);
    for (std::size_t c = 0; c < count; ++c) {
      Vec x(d);
      double log_prob = 0.0;
      for (int k = 0; k < d; ++k) {
        x[k] = rule.nodes[idx[k]];
        log_prob += std::log(rule.weights[idx[k]] / axis_total);
      }
      Vec p = g->mean + inv_sqrt * x;
      out.potential.push_back(auxiliary.eval(p));
      out.nodes.push_back(std::move(p));
      out.probabilities.push_back(std::exp(log_prob));
      out.log_probabilities.push_back(log_prob);
      for (int k = d - 1; k >= 0; --k) {
        if (++idx[k] < m) break;
        idx[k] = 0;
      }
    }
    out.log_normalizer = d * std::log(axis_total) - 0.5 * std::log(g->precision.determinant());
    desc << "gauss_hermite(m=" << m << " per axis, d=" << d << ")";
  } else {
    if (d != 1) throw ConfigError("momentum quadrature: non-Gaussian auxiliaries must be 1-d");
    const double reach = momentum_support_halfwidth(auxiliary, 1e-12);
    const double h = 2.0 * reach / (m - 1);
    double total = 0.0;
    for (int k = 0; k < m; ++k) {
      Vec p = Vec::Constant(1, -reach + k * h);
      const double vk = auxiliary.eval(p);
      const double wk = (k == 0 || k == m - 1) ? 0.5 * h : h;
      out.potential.push_back(vk);
      out.probabilities.push_back(wk * std::exp(-vk));
      total += out.probabilities.back();
      out.nodes.push_back(std::move(p));
    }
    for (double& pr : out.probabilities) {
      pr /= total;
      out.log_probabilities.push_back(std::log(pr));
    }
    out.log_normalizer = std::log(total);
    desc << "trapezoid(m=" << m << ", Lp=" << reach << ")";
  }
  out.description = desc.str();
  return out;
}

}  // namespace hmclab
