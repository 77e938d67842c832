#include "dpinar/core.hpp"

#include "dpinar/logprob.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dpinar {

double transition_log_pmf(int y_prev, int y_cur, double alpha, double lambda) {
    if (y_prev < 0 || y_cur < 0) throw std::domain_error("transition_log_pmf: negative count");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("transition_log_pmf: alpha out of [0,1]");
    if (!(lambda > 0.0)) throw std::domain_error("transition_log_pmf: lambda must be > 0");

    const int m_max = std::min(y_prev, y_cur);
    std::vector<double> terms(m_max + 1);
    for (int m = 0; m <= m_max; ++m)
        terms[m] = log_binomial_pmf(m, y_prev, alpha) + log_poisson_pmf(y_cur - m, lambda);
    return log_sum_exp(terms);
}

double joint_log_likelihood(const CountSeries& series, double alpha, const VectorXd& lambdas) {
    const int T = series.length();
    if (lambdas.size() != T - 1)
        throw std::invalid_argument("joint_log_likelihood: rate vector must have length T-1");
    double total = 0.0;
    for (int t = 2; t <= T; ++t)
        total += transition_log_pmf(series.counts[t - 2], series.counts[t - 1], alpha, lambdas[t - 2]);
    return total;
}

double augmented_log_density(const CountSeries& series, const GibbsState& state,
                             const PriorConfig& priors) {
    const int T = series.length();
    if (state.lambdas.size() != T - 1 || state.maturations.size() != T - 1)
        throw std::invalid_argument("augmented_log_density: state size mismatch");

    double total = log_beta_pdf(state.alpha, priors.a_alpha, priors.b_alpha);
    for (int t = 2; t <= T; ++t) {
        const int y_prev = series.counts[t - 2];
        const int y_cur = series.counts[t - 1];
        const int m = state.maturations[t - 2];
        if (m < 0 || m > y_prev || m > y_cur) return neg_inf;
        total += log_poisson_pmf(y_cur - m, state.lambdas[t - 2]);
        total += log_binomial_pmf(m, y_prev, state.alpha);
    }
    return total;
}

CountSeries simulate(int T, double alpha, const VectorXd& rate_schedule, std::uint64_t seed,
                     std::optional<int> y1) {
    if (T < 2) throw std::invalid_argument("simulate: need T >= 2");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("simulate: alpha out of [0,1]");
    if (rate_schedule.size() != T - 1) throw std::invalid_argument("simulate: rate vector must have length T-1");
    if ((rate_schedule.array() < 0.0).any()) throw std::invalid_argument("simulate: negative rate");
    if (y1 && *y1 < 0) throw std::invalid_argument("simulate: negative y1");

    Rng rng(seed);
    VectorXi counts(T);
    counts[0] = y1 ? *y1 : draw_poisson(rng, rate_schedule[0]);
    for (int t = 2; t <= T; ++t) {
        const int survived = draw_binomial(rng, counts[t - 2], alpha);
        counts[t - 1] = survived + draw_poisson(rng, rate_schedule[t - 2]);
    }
    return CountSeries(std::move(counts));
}

}  // namespace dpinar
