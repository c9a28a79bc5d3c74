#ifndef MINETAX_VARIATION_HPP
#define MINETAX_VARIATION_HPP

#include <cstdint>
#include <random>
#include <span>

#include "minetax/model.hpp"

namespace minetax {

using Rng = std::mt19937_64;

/// Derives an independent stream seed from a base seed and two counters.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

double uniform01(Rng& rng);

/// Simulated binary crossover, applied per variable with probability 1/2,
/// children clipped to the bounds.
void sbx_crossover(std::span<double> x1, std::span<double> x2, std::span<const Bounds> bounds, double eta, Rng& rng);

/// Polynomial mutation, each variable mutated with probability `rate`.
void polynomial_mutation(std::span<double> x, std::span<const Bounds> bounds, double eta, double rate, Rng& rng);

}  // namespace minetax

#endif
