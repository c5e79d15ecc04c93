#pragma once

#include <random>

#include "hmclab/grid.hpp"

namespace hmclab {

/// Seeded test vectors. Every probe is f times a smooth likelihood, so it lies
/// in the weighted space for any target.

/// h = f * (1 + sum_m a_m cos(w_m . q + phi_m)) with sum |a_m| <= 0.9; positive.
DensityVector random_density(const DensityGrid& grid, std::mt19937_64& rng);

/// h = f * (c + sum_m a_m cos(w_m . q + phi_m)); signed.
DensityVector random_signed(const DensityGrid& grid, std::mt19937_64& rng);

/// h - (mass(h) / mass(f)) f.
DensityVector remove_mass(const DensityVector& h, const DensityGrid& grid);

/// h = f * exp(shift . q - |shift|^2 / 2). For a standard Gaussian target this
/// is the target translated by `shift`.
DensityVector tilted_target(const DensityGrid& grid, const Vec& shift);

}  // namespace hmclab
