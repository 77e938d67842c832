#include "dpinar/random.hpp"

#include "dpinar/logprob.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dpinar {

int draw_log_discrete(Rng& rng, std::span<const double> log_weights) {
    if (log_weights.empty()) throw std::invalid_argument("draw_log_discrete: empty support");
    double m = neg_inf;
    for (double lw : log_weights) m = std::max(m, lw);
    if (m == neg_inf) throw std::invalid_argument("draw_log_discrete: all weights zero");
    double total = 0.0;
    std::vector<double> w(log_weights.size());
    for (size_t i = 0; i < w.size(); ++i) {
        w[i] = std::exp(log_weights[i] - m);
        total += w[i];
    }
    const double target = draw_uniform(rng) * total;
    double acc = 0.0;
    for (size_t i = 0; i + 1 < w.size(); ++i) {
        acc += w[i];
        if (target < acc) return static_cast<int>(i);
    }
    return static_cast<int>(w.size()) - 1;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt_a, std::uint64_t salt_b) {
    std::uint64_t h = 14695981039346656037ull;
    for (std::uint64_t v : {master, salt_a, salt_b}) {
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (v >> (8 * byte)) & 0xff;
            h *= 1099511628211ull;
        }
    }
    return h;
}

}  // namespace dpinar
