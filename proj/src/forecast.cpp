#include "dpinar/forecast.hpp"

#include "dpinar/logprob.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace dpinar {

namespace {

VectorXd convolution_pmf(int y_t, double thin_prob, double poisson_mean, int cap) {
    VectorXd pmf(cap + 1);
    std::vector<double> terms(y_t + 1);
    for (int y = 0; y <= cap; ++y) {
        const int m_max = std::min(y_t, y);
        terms.resize(m_max + 1);
        for (int m = 0; m <= m_max; ++m)
            terms[m] = log_binomial_pmf(m, y_t, thin_prob) + log_poisson_pmf(y - m, poisson_mean);
        pmf[y] = std::exp(log_sum_exp(terms));
    }
    return pmf;
}

// Content hash of a draw, so per-draw extension randomness is invariant
// under reordering of the posterior sample.
std::uint64_t hash_draw(const GibbsState& draw) {
    std::uint64_t h = 14695981039346656037ull;
    const auto mix = [&h](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (bits >> (8 * byte)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(draw.alpha);
    mix(draw.tau);
    for (Eigen::Index i = 0; i < draw.lambdas.size(); ++i) mix(draw.lambdas[i]);
    return h;
}

}  // namespace

VectorXd hstep_transition_pmf(int y_t, double alpha, const RateExtension& future_rates,
                              int y_cap_hint, double tail_target) {
    const int h = static_cast<int>(future_rates.future_rates.size());
    if (h < 1) throw std::invalid_argument("hstep_transition_pmf: need h >= 1");
    if (y_t < 0) throw std::invalid_argument("hstep_transition_pmf: negative count");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("hstep_transition_pmf: alpha out of [0,1]");

    double mu = future_rates.future_rates[0];
    for (int i = 1; i < h; ++i) mu = alpha * mu + future_rates.future_rates[i];
    const double thin_prob = std::pow(alpha, h);

    int cap = std::max(y_cap_hint, y_t + 10);
    for (;;) {
        VectorXd pmf = convolution_pmf(y_t, thin_prob, mu, cap);
        if (1.0 - pmf.sum() < tail_target) return pmf;
        cap *= 2;
    }
}

RateExtension extend_rates(const GibbsState& draw, int h, const PriorConfig& priors, Rng& rng) {
    if (h < 1) throw std::invalid_argument("extend_rates: need h >= 1");
    const int n_observed = static_cast<int>(draw.lambdas.size());  // T - 1 rates in the urn

    RateExtension extension;
    extension.future_rates.resize(h);
    for (int i = 0; i < h; ++i) {
        const int urn_size = n_observed + i;
        const double fresh_prob = draw.tau / (draw.tau + urn_size);
        if (draw_uniform(rng) < fresh_prob) {
            extension.future_rates[i] = draw_gamma(rng, priors.a_g0, priors.b_g0);
        } else {
            const int pick = static_cast<int>(draw_uniform(rng) * urn_size);
            const int index = std::min(pick, urn_size - 1);
            extension.future_rates[i] =
                index < n_observed ? draw.lambdas[index] : extension.future_rates[index - n_observed];
        }
    }
    return extension;
}

ForecastDistribution predictive_pmf(const PosteriorDraws& draws, const CountSeries& series, int h,
                                    const PriorConfig& priors, Rng& rng) {
    if (draws.size() < 1) throw std::invalid_argument("predictive_pmf: empty posterior sample");
    const int y_last = series.counts[series.length() - 1];

    double max_rate = 0.0, max_alpha = 0.0;
    for (const auto& draw : draws.draws) {
        max_rate = std::max(max_rate, draw.lambdas.maxCoeff());
        max_alpha = std::max(max_alpha, draw.alpha);
    }
    const int cap_hint =
        y_last + static_cast<int>(std::ceil(10.0 * (max_rate + y_last * max_alpha)));

    const std::uint64_t base_seed = rng();
    VectorXd accumulated = VectorXd::Zero(1);
    for (const auto& draw : draws.draws) {
        Rng draw_rng(derive_seed(base_seed, hash_draw(draw), static_cast<std::uint64_t>(h)));
        const RateExtension extension = extend_rates(draw, h, priors, draw_rng);
        const VectorXd pmf = hstep_transition_pmf(y_last, draw.alpha, extension, cap_hint);
        if (pmf.size() > accumulated.size()) {
            VectorXd grown = VectorXd::Zero(pmf.size());
            grown.head(accumulated.size()) = accumulated;
            accumulated = std::move(grown);
        }
        accumulated.head(pmf.size()) += pmf;
    }
    accumulated /= draws.size();

    ForecastDistribution forecast;
    forecast.horizon = h;
    forecast.pmf = std::move(accumulated);
    forecast.tail_mass = std::max(0.0, 1.0 - forecast.pmf.sum());
    forecast.point_forecast = generalized_median(forecast.pmf);
    return forecast;
}

int generalized_median(const VectorXd& pmf) {
    if (pmf.size() == 0) throw std::invalid_argument("generalized_median: empty pmf");
    // Scan only support points: along a zero-mass stretch the CDF is flat, so
    // such y carry no information and must not win ties (a point mass at c
    // has every distance equal to 1/2 and must still return c).
    double cdf = 0.0, best_distance = std::numeric_limits<double>::infinity();
    int best = -1;
    for (int y = 0; y < pmf.size(); ++y) {
        cdf += pmf[y];
        const double distance = std::abs(0.5 - cdf);
        if (pmf[y] > 0.0 && distance < best_distance) {
            best_distance = distance;
            best = y;
        }
    }
    if (best < 0) throw std::invalid_argument("generalized_median: zero pmf");
    return best;
}

}  // namespace dpinar
