#include "minetax/variation.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace minetax {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

double uniform01(Rng& rng) {
    // 53 random bits; independent of the standard library's distribution code.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void sbx_crossover(std::span<double> x1, std::span<double> x2, std::span<const Bounds> bounds, double eta, Rng& rng) {
    constexpr double eps = 1e-14;
    for (std::size_t i = 0; i < x1.size(); ++i) {
        if (uniform01(rng) > 0.5) continue;
        if (std::abs(x1[i] - x2[i]) <= eps) continue;
        const double lo = bounds[i].lower;
        const double hi = bounds[i].upper;
        const double y1 = std::min(x1[i], x2[i]);
        const double y2 = std::max(x1[i], x2[i]);
        const double u = uniform01(rng);

        auto spread = [&](double beta) {
            const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
            if (u <= 1.0 / alpha) return std::pow(u * alpha, 1.0 / (eta + 1.0));
            return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
        };

        const double betaq1 = spread(1.0 + 2.0 * (y1 - lo) / (y2 - y1));
        double c1 = 0.5 * ((y1 + y2) - betaq1 * (y2 - y1));
        const double betaq2 = spread(1.0 + 2.0 * (hi - y2) / (y2 - y1));
        double c2 = 0.5 * ((y1 + y2) + betaq2 * (y2 - y1));
        c1 = std::clamp(c1, lo, hi);
        c2 = std::clamp(c2, lo, hi);
        if (uniform01(rng) <= 0.5) std::swap(c1, c2);
        x1[i] = c1;
        x2[i] = c2;
    }
}

void polynomial_mutation(std::span<double> x, std::span<const Bounds> bounds, double eta, double rate, Rng& rng) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (uniform01(rng) >= rate) continue;
        const double lo = bounds[i].lower;
        const double hi = bounds[i].upper;
        if (hi <= lo) continue;
        const double delta1 = (x[i] - lo) / (hi - lo);
        const double delta2 = (hi - x[i]) / (hi - lo);
        const double u = uniform01(rng);
        const double power = 1.0 / (eta + 1.0);
        double deltaq;
        if (u < 0.5) {
            const double xy = 1.0 - delta1;
            const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta + 1.0);
            deltaq = std::pow(val, power) - 1.0;
        } else {
            const double xy = 1.0 - delta2;
            const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta + 1.0);
            deltaq = 1.0 - std::pow(val, power);
        }
        x[i] = std::clamp(x[i] + deltaq * (hi - lo), lo, hi);
    }
}

}  // namespace minetax
