#pragma once

#include <string>
#include <vector>

#include "hmclab/distributions.hpp"

namespace hmclab {

struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// m-point Gauss-Hermite rule for the weight exp(-x^2/2) on the real line
/// (probabilists' convention): sum_k w_k phi(x_k) ~ int phi(x) exp(-x^2/2) dx.
/// Nodes ascending; weights sum to sqrt(2 pi).
GaussHermiteRule gauss_hermite(int m);

/// Discrete probability measure on momentum space standing in for the
/// normalized auxiliary density g = gbar / int gbar.
///
/// int phi(p) g(p) dp ~ sum_k probabilities[k] * phi(nodes[k]).
struct MomentumQuadrature {
  std::vector<Vec> nodes;
  std::vector<double> probabilities;
  std::vector<double> log_probabilities;
  /// V(p_k) = -log gbar(p_k), cached for the deposit weights.
  std::vector<double> potential;
  /// log int gbar, as realized by the rule itself.
  double log_normalizer = 0.0;
  std::string description;

  std::size_t size() const { return nodes.size(); }
  /// Weight v_k * g(P) of node k for the integrand phi(Q) g(P) dp, given
  /// V(P) at the flowed momentum: probabilities[k] * exp(V(p_k) - V(P)).
  double deposit_weight(std::size_t k, double potential_at_image) const;
  /// Normalized auxiliary density g(p) = exp(-V(p)) / int gbar.
  double normalized_density(double potential_value) const;
};

/// Tensor Gauss-Hermite in whitened coordinates when the auxiliary potential
/// is Gaussian (m points per axis); otherwise a one-dimensional trapezoid rule
/// with m points on [-Lp, Lp] covering all but 1e-12 of the auxiliary mass.
MomentumQuadrature build_momentum_quadrature(const Potential& auxiliary, int m);

/// Half-width of the symmetric momentum interval on which a one-dimensional
/// auxiliary potential stays within `window` of its minimum.
double momentum_window(const Potential& auxiliary, double window);

/// log int exp(-V(p)) dp: closed form for Gaussians, otherwise (d = 1) a
/// trapezoid rule over the region where V is within 80 of its minimum.
double log_auxiliary_normalizer(const Potential& auxiliary);

/// Half-width Lp of a symmetric interval holding all but `tail` of the mass
/// of a one-dimensional auxiliary density.
double momentum_support_halfwidth(const Potential& auxiliary, double tail);

}  // namespace hmclab
