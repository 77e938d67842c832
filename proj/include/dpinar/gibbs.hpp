#pragma once

#include "dpinar/random.hpp"
#include "dpinar/types.hpp"

#include <optional>
#include <vector>

namespace dpinar {

struct SamplerConfig {
    int n_iterations = 12000;
    int burn_in = 2000;
    int thinning = 2;
    std::uint64_t seed = 0;
    std::optional<GibbsState> initial_state;
    // Debugging switch: hold the concentration at this value instead of
    // sampling it.
    std::optional<double> fixed_tau;

    int retained() const { return (n_iterations - burn_in) / thinning; }

    void validate() const {
        if (n_iterations < 1) throw std::invalid_argument("SamplerConfig: n_iterations < 1");
        if (burn_in < 0 || burn_in >= n_iterations)
            throw std::invalid_argument("SamplerConfig: need 0 <= burn_in < n_iterations");
        if (thinning < 1) throw std::invalid_argument("SamplerConfig: thinning < 1");
        if (retained() < 1) throw std::invalid_argument("SamplerConfig: no retained draws");
        if (fixed_tau && !(*fixed_tau > 0.0))
            throw std::invalid_argument("SamplerConfig: fixed_tau must be > 0");
    }
};

struct PosteriorDraws {
    std::vector<GibbsState> draws;
    std::vector<int> cluster_counts;  // distinct lambda values per draw

    int size() const { return static_cast<int>(draws.size()); }
};

/// Single-site conditional moves. Each replaces one block of `state` with an
/// exact draw from its full conditional.
void update_maturation(int t, GibbsState& state, const CountSeries& series, Rng& rng);
void update_lambda(int t, GibbsState& state, const CountSeries& series, const PriorConfig& priors,
                   Rng& rng);
void update_alpha(GibbsState& state, const CountSeries& series, const PriorConfig& priors, Rng& rng);
void update_tau(GibbsState& state, int k, int T, const PriorConfig& priors, Rng& rng);

/// Escobar-West acceleration: redraw every cluster's shared rate from its
/// conjugate Gamma posterior, keeping the partition fixed.
void resample_cluster_values(GibbsState& state, const CountSeries& series,
                             const PriorConfig& priors, Rng& rng);

/// Log-weights of the lambda_t full conditional mixture: entry 0 is the
/// fresh-Gamma component, entries 1.. correspond to the point masses at
/// lambda_r, r != t in sweep order. Exposed for the normalization checks.
std::vector<double> lambda_conditional_log_weights(int t, const GibbsState& state,
                                                   const CountSeries& series,
                                                   const PriorConfig& priors);

/// Log-weights of the two-component tau mixture given (k, u).
std::pair<double, double> tau_conditional_log_weights(int k, double u, int T,
                                                      const PriorConfig& priors);

GibbsState default_initial_state(const CountSeries& series, const PriorConfig& priors);

PosteriorDraws run_sampler(const CountSeries& series, const PriorConfig& priors,
                           const SamplerConfig& config);

}  // namespace dpinar
