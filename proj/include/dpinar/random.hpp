#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace dpinar {

using Rng = std::mt19937_64;

inline double draw_uniform(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double draw_gamma(Rng& rng, double shape, double rate) {
    return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

inline double draw_beta(Rng& rng, double a, double b) {
    const double x = draw_gamma(rng, a, 1.0);
    const double y = draw_gamma(rng, b, 1.0);
    return x / (x + y);
}

inline int draw_poisson(Rng& rng, double mean) {
    if (mean == 0.0) return 0;
    return std::poisson_distribution<int>(mean)(rng);
}

inline int draw_binomial(Rng& rng, int n, double p) {
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;
    return std::binomial_distribution<int>(n, p)(rng);
}

/// Sample an index from unnormalized log-weights (stable shift + inverse CDF).
int draw_log_discrete(Rng& rng, std::span<const double> log_weights);

/// Deterministic per-fold seed derivation (FNV-1a over the components).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt_a, std::uint64_t salt_b);

}  // namespace dpinar
