#include "dpinar/gibbs.hpp"

#include "dpinar/logprob.hpp"

#include <cmath>
#include <stdexcept>

namespace dpinar {

void update_maturation(int t, GibbsState& state, const CountSeries& series, Rng& rng) {
    const int y_prev = series.counts[t - 2];
    const int y_cur = series.counts[t - 1];
    const int m_max = std::min(y_prev, y_cur);
    const double lambda = state.lambdas[t - 2];
    const double alpha = state.alpha;

    if (m_max == 0 || alpha == 0.0) {
        state.maturations[t - 2] = 0;
        return;
    }
    if (alpha == 1.0) {  // weight ratio diverges; limit puts all mass at m_max
        state.maturations[t - 2] = m_max;
        return;
    }

    const double log_ratio = std::log(alpha) - std::log(lambda) - std::log1p(-alpha);
    std::vector<double> log_weights(m_max + 1);
    for (int m = 0; m <= m_max; ++m)
        log_weights[m] = m * log_ratio - log_factorial(m) - log_factorial(y_cur - m) -
                         log_factorial(y_prev - m);
    state.maturations[t - 2] = draw_log_discrete(rng, log_weights);
}

std::vector<double> lambda_conditional_log_weights(int t, const GibbsState& state,
                                                   const CountSeries& series,
                                                   const PriorConfig& priors) {
    const int d = series.counts[t - 1] - state.maturations[t - 2];
    const int n = static_cast<int>(state.lambdas.size());

    std::vector<double> log_weights;
    log_weights.reserve(n);
    log_weights.push_back(std::log(state.tau) + priors.a_g0 * std::log(priors.b_g0) +
                          std::lgamma(d + priors.a_g0) - std::lgamma(priors.a_g0) -
                          (d + priors.a_g0) * std::log(priors.b_g0 + 1.0));
    for (int r = 0; r < n; ++r) {
        if (r == t - 2) continue;
        log_weights.push_back(d * std::log(state.lambdas[r]) - state.lambdas[r]);
    }
    return log_weights;
}

void update_lambda(int t, GibbsState& state, const CountSeries& series, const PriorConfig& priors,
                   Rng& rng) {
    const auto log_weights = lambda_conditional_log_weights(t, state, series, priors);
    const int pick = draw_log_discrete(rng, log_weights);
    if (pick == 0) {
        const int d = series.counts[t - 1] - state.maturations[t - 2];
        state.lambdas[t - 2] = draw_gamma(rng, d + priors.a_g0, priors.b_g0 + 1.0);
    } else {
        // Map the weight index back to the rate it points at (self skipped).
        const int r = pick - 1 < t - 2 ? pick - 1 : pick;
        state.lambdas[t - 2] = state.lambdas[r];
    }
}

void update_alpha(GibbsState& state, const CountSeries& series, const PriorConfig& priors,
                  Rng& rng) {
    const int T = series.length();
    long sum_m = 0, sum_rest = 0;
    for (int t = 2; t <= T; ++t) {
        sum_m += state.maturations[t - 2];
        sum_rest += series.counts[t - 2] - state.maturations[t - 2];
    }
    state.alpha = draw_beta(rng, priors.a_alpha + sum_m, priors.b_alpha + sum_rest);
}

std::pair<double, double> tau_conditional_log_weights(int k, double u, int T,
                                                      const PriorConfig& priors) {
    // West's two-component mixture for tau | u, k. With c = b - log u the
    // normalized-density weights are
    //   w1 ~ Gamma(a+k)/c^{a+k},   w2 ~ (T-1) Gamma(a+k-1)/c^{a+k-1},
    // from integrating tau^{a+k-2}(tau + T - 1) e^{-c tau}.
    const double c = priors.b_tau - std::log(u);
    const double shape2 = priors.a_tau + k - 1.0;
    const double log_w1 = std::lgamma(priors.a_tau + k) - (priors.a_tau + k) * std::log(c);
    if (shape2 <= 0.0) return {0.0, neg_inf};  // degenerate second component; all mass on the first
    const double log_w2 = std::log(static_cast<double>(T - 1)) + std::lgamma(shape2) -
                          shape2 * std::log(c);
    const double norm = log_sum_exp(log_w1, log_w2);
    return {log_w1 - norm, log_w2 - norm};
}

void update_tau(GibbsState& state, int k, int T, const PriorConfig& priors, Rng& rng) {
    if (k < 1) throw std::invalid_argument("update_tau: k must be >= 1");
    state.u = draw_beta(rng, state.tau + 1.0, static_cast<double>(T - 1));
    const double c = priors.b_tau - std::log(state.u);
    const auto [log_w1, log_w2] = tau_conditional_log_weights(k, state.u, T, priors);
    const bool first = std::log(draw_uniform(rng)) < log_w1 || log_w2 == neg_inf;
    const double shape = first ? priors.a_tau + k : priors.a_tau + k - 1.0;
    state.tau = draw_gamma(rng, shape, c);
}

void resample_cluster_values(GibbsState& state, const CountSeries& series,
                             const PriorConfig& priors, Rng& rng) {
    const auto view = make_cluster_view(state.lambdas);
    const int k = view.num_clusters();
    const int n = static_cast<int>(state.lambdas.size());
    std::vector<double> innovation_sums(k, 0.0);
    for (int i = 0; i < n; ++i)
        innovation_sums[view.assignment[i]] += series.counts[i + 1] - state.maturations[i];

    std::vector<double> fresh(k);
    for (int j = 0; j < k; ++j)
        fresh[j] = draw_gamma(rng, priors.a_g0 + innovation_sums[j], priors.b_g0 + view.occupancy[j]);
    for (int i = 0; i < n; ++i) state.lambdas[i] = fresh[view.assignment[i]];
}

GibbsState default_initial_state(const CountSeries& series, const PriorConfig& priors) {
    const int T = series.length();
    GibbsState state;
    state.alpha = 0.5;
    state.maturations.resize(T - 1);
    state.lambdas.resize(T - 1);
    for (int t = 2; t <= T; ++t) {
        state.maturations[t - 2] = std::min(series.counts[t - 2], series.counts[t - 1]) / 2;
        state.lambdas[t - 2] =
            std::max(static_cast<double>(series.counts[t - 1] - state.maturations[t - 2]), 0.5);
    }
    state.tau = priors.a_tau / priors.b_tau;
    state.u = 0.5;
    return state;
}

PosteriorDraws run_sampler(const CountSeries& series, const PriorConfig& priors,
                           const SamplerConfig& config) {
    series.validate();
    priors.validate();
    config.validate();

    const int T = series.length();
    Rng rng(config.seed);
    GibbsState state = config.initial_state ? *config.initial_state
                                            : default_initial_state(series, priors);
    if (config.fixed_tau) state.tau = *config.fixed_tau;
    state.check_invariants(series);

    PosteriorDraws out;
    out.draws.reserve(config.retained());
    out.cluster_counts.reserve(config.retained());

    for (int iter = 1; iter <= config.n_iterations; ++iter) {
        for (int t = 2; t <= T; ++t) {
            update_maturation(t, state, series, rng);
            update_lambda(t, state, series, priors, rng);
        }
        update_alpha(state, series, priors, rng);
        const int k = state.num_clusters();
        if (!config.fixed_tau) update_tau(state, k, T, priors, rng);
        resample_cluster_values(state, series, priors, rng);

#ifndef NDEBUG
        state.check_invariants(series);
#endif
        if (iter > config.burn_in && (iter - config.burn_in) % config.thinning == 0) {
            out.draws.push_back(state);
            out.cluster_counts.push_back(state.num_clusters());
        }
    }
    return out;
}

}  // namespace dpinar
