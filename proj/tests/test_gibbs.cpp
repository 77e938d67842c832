#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dpinar/core.hpp"
#include "dpinar/gibbs.hpp"
#include "dpinar/logprob.hpp"
#include "oracles.hpp"

#include <cmath>
#include <map>
#include <tuple>
#include <vector>

using namespace dpinar;

namespace {

GibbsState toy_state(const CountSeries& series, double alpha, std::vector<double> lambdas,
                     std::vector<int> maturations, double tau) {
    GibbsState state;
    state.alpha = alpha;
    state.lambdas = Eigen::Map<VectorXd>(lambdas.data(), static_cast<Eigen::Index>(lambdas.size()));
    state.maturations =
        Eigen::Map<VectorXi>(maturations.data(), static_cast<Eigen::Index>(maturations.size()));
    state.tau = tau;
    state.check_invariants(series);
    return state;
}

}  // namespace

TEST_CASE("update_maturation: singleton supports") {
    PriorConfig priors;
    Rng rng(1);

    CountSeries zero_prev(std::vector<int>{0, 3});
    auto state = toy_state(zero_prev, 0.7, {1.0}, {0}, 1.0);
    for (int i = 0; i < 50; ++i) {
        update_maturation(2, state, zero_prev, rng);
        CHECK(state.maturations[0] == 0);
    }

    CountSeries series(std::vector<int>{3, 2});
    state = toy_state(series, 0.0, {1.0}, {1}, 1.0);
    update_maturation(2, state, series, rng);
    CHECK(state.maturations[0] == 0);  // alpha = 0: no survivors

    state = toy_state(series, 1.0, {1.0}, {0}, 1.0);
    update_maturation(2, state, series, rng);
    CHECK(state.maturations[0] == 2);  // alpha = 1: everyone survives
}

TEST_CASE("update_maturation matches the exact 3-point law") {
    // y_prev = 2, y_cur = 2, alpha = 0.5, lambda = 1: weights proportional to
    // 1/(m!(2-m)!(2-m)!) * [alpha/(lambda(1-alpha))]^m = {1/4, 1, 1/2},
    // normalized to {1/7, 4/7, 2/7}.
    CountSeries series(std::vector<int>{2, 2});
    auto state = toy_state(series, 0.5, {1.0}, {0}, 1.0);
    Rng rng(42);
    const int draws = 100000;
    std::vector<int> counts(3, 0);
    for (int i = 0; i < draws; ++i) {
        update_maturation(2, state, series, rng);
        ++counts[state.maturations[0]];
    }
    CHECK(counts[0] / double(draws) == doctest::Approx(1.0 / 7.0).epsilon(0.05));
    CHECK(counts[1] / double(draws) == doctest::Approx(4.0 / 7.0).epsilon(0.02));
    CHECK(counts[2] / double(draws) == doctest::Approx(2.0 / 7.0).epsilon(0.03));
}

TEST_CASE("update_maturation agrees with the augmented density (detailed balance)") {
    // The conditional law of m_t must equal the normalized augmented joint
    // across the m support, everything else held fixed.
    CountSeries series(std::vector<int>{3, 2, 1});
    PriorConfig priors;
    auto state = toy_state(series, 0.35, {1.7, 0.8}, {0, 0}, 1.0);

    std::vector<double> log_target;
    for (int m = 0; m <= 2; ++m) {
        state.maturations[0] = m;
        log_target.push_back(augmented_log_density(series, state, priors));
    }
    const double norm = log_sum_exp(log_target);

    Rng rng(7);
    const int draws = 200000;
    std::vector<int> counts(3, 0);
    for (int i = 0; i < draws; ++i) {
        update_maturation(2, state, series, rng);
        ++counts[state.maturations[0]];
    }
    double tv = 0.0;
    for (int m = 0; m <= 2; ++m)
        tv += std::abs(counts[m] / double(draws) - std::exp(log_target[m] - norm));
    CHECK(tv / 2.0 < 0.01);
}

TEST_CASE("lambda conditional weights: T = 2 has only the fresh component") {
    CountSeries series(std::vector<int>{1, 3});
    PriorConfig priors;
    priors.a_g0 = 2.0;
    priors.b_g0 = 1.5;
    auto state = toy_state(series, 0.5, {1.0}, {1}, 1.0);

    const auto weights = lambda_conditional_log_weights(2, state, series, priors);
    CHECK(weights.size() == 1);

    // The draw is then exactly Gamma(d + a_g0, b_g0 + 1) with d = 3 - 1 = 2.
    Rng rng(3);
    double sum = 0.0;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
        update_lambda(2, state, series, priors, rng);
        sum += state.lambdas[0];
    }
    CHECK(sum / draws == doctest::Approx((2.0 + 2.0) / (1.5 + 1.0)).epsilon(0.01));
}

TEST_CASE("lambda conditional weights: d = 0 with unit priors") {
    // Fresh weight tau * b^a Gamma(a)/[Gamma(a)(b+1)^a] = tau/2 at a=b=1;
    // point masses e^{-lambda_r}.
    CountSeries series(std::vector<int>{2, 1, 1, 2});
    PriorConfig priors;
    auto state = toy_state(series, 0.5, {0.9, 1.4, 2.0}, {1, 1, 0}, 3.0);

    const auto weights = lambda_conditional_log_weights(2, state, series, priors);
    REQUIRE(weights.size() == 3);
    CHECK(std::exp(weights[0]) == doctest::Approx(3.0 / 2.0).epsilon(1e-12));
    CHECK(std::exp(weights[1]) == doctest::Approx(std::exp(-1.4)).epsilon(1e-12));
    CHECK(std::exp(weights[2]) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("lambda conditional weights match a directly computed mixture") {
    // Three-epoch toy state, weights recomputed in plain arithmetic.
    CountSeries series(std::vector<int>{1, 2, 3, 1});
    PriorConfig priors;
    priors.a_g0 = 1.5;
    priors.b_g0 = 0.7;
    auto state = toy_state(series, 0.4, {2.2, 1.1, 0.6}, {1, 1, 1}, 0.8);

    const int t = 3;
    const int d = series.counts[t - 1] - state.maturations[t - 2];  // 3 - 1 = 2
    const double fresh = state.tau * std::pow(priors.b_g0, priors.a_g0) *
                         std::tgamma(d + priors.a_g0) /
                         (std::tgamma(priors.a_g0) * std::pow(priors.b_g0 + 1.0, d + priors.a_g0));
    const double mass_1 = std::pow(2.2, d) * std::exp(-2.2);
    const double mass_3 = std::pow(0.6, d) * std::exp(-0.6);

    const auto weights = lambda_conditional_log_weights(t, state, series, priors);
    REQUIRE(weights.size() == 3);
    CHECK(std::exp(weights[0]) == doctest::Approx(fresh).epsilon(1e-12));
    CHECK(std::exp(weights[1]) == doctest::Approx(mass_1).epsilon(1e-12));
    CHECK(std::exp(weights[2]) == doctest::Approx(mass_3).epsilon(1e-12));
}

TEST_CASE("update_lambda: pick frequencies follow the normalized weights") {
    CountSeries series(std::vector<int>{1, 2, 3, 1});
    PriorConfig priors;
    auto base = toy_state(series, 0.4, {2.2, 1.1, 0.6}, {1, 1, 1}, 0.8);

    const auto log_weights = lambda_conditional_log_weights(3, base, series, priors);
    const double norm = log_sum_exp(log_weights);
    const double p_reuse_1 = std::exp(log_weights[1] - norm);
    const double p_reuse_3 = std::exp(log_weights[2] - norm);

    Rng rng(9);
    const int draws = 200000;
    int reuse_1 = 0, reuse_3 = 0;
    for (int i = 0; i < draws; ++i) {
        GibbsState state = base;
        update_lambda(3, state, series, priors, rng);
        if (state.lambdas[1] == 2.2) ++reuse_1;
        if (state.lambdas[1] == 0.6) ++reuse_3;
    }
    CHECK(reuse_1 / double(draws) == doctest::Approx(p_reuse_1).epsilon(0.02));
    CHECK(reuse_3 / double(draws) == doctest::Approx(p_reuse_3).epsilon(0.02));
}

TEST_CASE("update_alpha draws from the conjugate Beta") {
    // a = b = 1, sum m = 3, sum (y_prev - m) = 5 -> Beta(4, 6), mean 0.4.
    PriorConfig priors;
    CountSeries s2(std::vector<int>{4, 4, 4});
    auto st2 = toy_state(s2, 0.5, {1.0, 1.0}, {2, 1}, 1.0);  // m: 3, rest: 2+3=5
    Rng rng(11);
    double sum = 0.0, sum_sq = 0.0;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
        update_alpha(st2, s2, priors, rng);
        sum += st2.alpha;
        sum_sq += st2.alpha * st2.alpha;
    }
    const double mean = sum / draws;
    const double var = sum_sq / draws - mean * mean;
    CHECK(mean == doctest::Approx(4.0 / 10.0).epsilon(0.01));
    CHECK(var == doctest::Approx(4.0 * 6.0 / (100.0 * 11.0)).epsilon(0.05));
}

TEST_CASE("update_alpha: empty sufficient statistics reduce to the prior") {
    CountSeries series(std::vector<int>{0, 0, 0});
    PriorConfig priors;
    priors.a_alpha = 2.0;
    priors.b_alpha = 5.0;
    auto state = toy_state(series, 0.5, {1.0, 1.0}, {0, 0}, 1.0);
    Rng rng(13);
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        update_alpha(state, series, priors, rng);
        sum += state.alpha;
    }
    CHECK(sum / draws == doctest::Approx(2.0 / 7.0).epsilon(0.02));
}

TEST_CASE("update_alpha agrees with augmented-density ratios") {
    // log p(alpha1 | rest) - log p(alpha2 | rest) must match the augmented
    // joint evaluated at the two alpha values.
    CountSeries series(std::vector<int>{3, 2, 2});
    PriorConfig priors;
    priors.a_alpha = 1.3;
    priors.b_alpha = 2.1;
    auto state = toy_state(series, 0.5, {1.2, 0.7}, {1, 2}, 1.0);

    const double sum_m = 3, sum_rest = (3 - 1) + (2 - 2);
    const auto log_beta_pdf = [&](double x) {
        const double a = priors.a_alpha + sum_m, b = priors.b_alpha + sum_rest;
        return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x);  // up to constant
    };
    state.alpha = 0.3;
    const double joint_1 = augmented_log_density(series, state, priors);
    state.alpha = 0.6;
    const double joint_2 = augmented_log_density(series, state, priors);
    CHECK(joint_1 - joint_2 ==
          doctest::Approx(log_beta_pdf(0.3) - log_beta_pdf(0.6)).epsilon(1e-10));
}

TEST_CASE("tau conditional weights normalize and hit the closed-form case") {
    PriorConfig priors;
    for (int k : {1, 2, 5}) {
        for (double u : {0.1, 0.5, 0.9}) {
            const auto [w1, w2] = tau_conditional_log_weights(k, u, 6, priors);
            CHECK(std::exp(w1) + std::exp(w2) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    // a = b = 1, k = 2, u = e^{-1}, T = 5: c = 2, w1 ~ Gamma(3)/2^3 = 1/4,
    // w2 ~ 4 Gamma(2)/2^2 = 1 -> probabilities (0.2, 0.8).
    const auto [w1, w2] = tau_conditional_log_weights(2, std::exp(-1.0), 5, priors);
    CHECK(std::exp(w1) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(std::exp(w2) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("tau mixture mean matches the quadrature oracle") {
    // Unnormalized conditional density of tau given u:
    // tau^{a+k-2}(tau + T - 1) e^{-c tau}, c = b - log u.
    PriorConfig priors;
    const int k = 2, T = 5;
    const double u = std::exp(-1.0), c = priors.b_tau - std::log(u);
    const auto density = [&](double t) {
        return std::pow(t, priors.a_tau + k - 2.0) * (t + T - 1.0) * std::exp(-c * t);
    };
    const double mass = oracle::simpson(density, 0.0, 60.0, 20000);
    const double mean =
        oracle::simpson([&](double t) { return t * density(t); }, 0.0, 60.0, 20000) / mass;

    const auto [w1, w2] = tau_conditional_log_weights(k, u, T, priors);
    const double mixture_mean = std::exp(w1) * (priors.a_tau + k) / c +
                                std::exp(w2) * (priors.a_tau + k - 1.0) / c;
    CHECK(mixture_mean == doctest::Approx(mean).epsilon(1e-6));
    CHECK(mixture_mean == doctest::Approx(1.1).epsilon(1e-12));  // closed form
}

TEST_CASE("tau corner: k = 1 with a_tau < 1 keeps both components proper") {
    // The second component's shape is a_tau + k - 1, which stays positive for
    // every valid prior, so the degenerate-shape collapse never fires; the
    // mixture must remain normalized here.
    PriorConfig priors;
    priors.a_tau = 0.519;
    const auto [w1, w2] = tau_conditional_log_weights(1, 0.4, 10, priors);
    CHECK(std::exp(w1) + std::exp(w2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w2 > neg_inf);

    GibbsState state;
    state.tau = 1.0;
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        update_tau(state, 1, 10, priors, rng);
        CHECK(state.tau > 0.0);
        CHECK(state.u > 0.0);
        CHECK(state.u < 1.0);
    }
}

TEST_CASE("update_tau chain reproduces West's marginal law for fixed k") {
    // Iterating u | tau, tau | u with k held fixed targets
    // p(tau | k) ~ tau^{a+k-2} (tau + T - 1) e^{-b tau} B(tau + 1, T - 1).
    PriorConfig priors;
    const int k = 3, T = 10;
    const auto log_density = [&](double t) {
        return (priors.a_tau + k - 2.0) * std::log(t) + std::log(t + T - 1.0) -
               priors.b_tau * t + std::lgamma(t + 1.0) + std::lgamma(T - 1.0) -
               std::lgamma(t + static_cast<double>(T));
    };
    const auto density = [&](double t) { return t > 0.0 ? std::exp(log_density(t)) : 0.0; };
    const double mass = oracle::simpson(density, 0.0, 80.0, 40000);

    GibbsState state;
    state.tau = 1.0;
    Rng rng(19);
    const int draws = 200000;
    const double bin_width = 0.25;
    std::map<int, int> histogram;
    for (int i = 0; i < draws; ++i) {
        update_tau(state, k, T, priors, rng);
        ++histogram[static_cast<int>(state.tau / bin_width)];
    }
    double tv = 0.0;
    for (int bin = 0; bin < 200; ++bin) {
        const double lo = bin * bin_width;
        const double expected = oracle::simpson(density, lo, lo + bin_width, 64) / mass;
        const double empirical = histogram.count(bin) ? histogram[bin] / double(draws) : 0.0;
        tv += std::abs(expected - empirical);
    }
    CHECK(tv / 2.0 < 0.02);
}

TEST_CASE("resample_cluster_values: partition preserved, conjugate parameters") {
    CountSeries series(std::vector<int>{1, 3, 2, 3});
    PriorConfig priors;
    priors.a_g0 = 2.0;
    priors.b_g0 = 1.0;
    // Clusters: {t=2, t=4} at 1.5 and {t=3} at 0.4. Innovations d = y_t - m_t:
    // d2 = 2, d3 = 1, d4 = 3.
    auto base = toy_state(series, 0.5, {1.5, 0.4, 1.5}, {1, 1, 0}, 1.0);

    Rng rng(23);
    double sum_big = 0.0, sum_small = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        GibbsState state = base;
        resample_cluster_values(state, series, priors, rng);
        CHECK(state.lambdas[0] == state.lambdas[2]);  // shared cluster stays shared
        CHECK(state.lambdas[0] != state.lambdas[1]);
        sum_big += state.lambdas[0];
        sum_small += state.lambdas[1];
    }
    // Cluster {2,4}: Gamma(2 + 2 + 3, 1 + 2); cluster {3}: Gamma(2 + 1, 1 + 1).
    CHECK(sum_big / draws == doctest::Approx(7.0 / 3.0).epsilon(0.01));
    CHECK(sum_small / draws == doctest::Approx(3.0 / 2.0).epsilon(0.01));
}

TEST_CASE("resample_cluster_values: single cluster pools all innovations") {
    CountSeries series(std::vector<int>{2, 1, 2, 1});
    PriorConfig priors;
    auto base = toy_state(series, 0.5, {0.7, 0.7, 0.7}, {0, 1, 0}, 1.0);
    // d = 1, 1, 1 -> Gamma(1 + 3, 1 + 3).
    Rng rng(29);
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        GibbsState state = base;
        resample_cluster_values(state, series, priors, rng);
        CHECK(state.num_clusters() == 1);
        sum += state.lambdas[0];
    }
    CHECK(sum / draws == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("run_sampler: seed determinism and retained count") {
    CountSeries series(std::vector<int>{2, 4, 1, 3, 2, 5});
    PriorConfig priors;
    SamplerConfig config;
    config.n_iterations = 500;
    config.burn_in = 100;
    config.thinning = 3;
    config.seed = 77;

    const auto a = run_sampler(series, priors, config);
    const auto b = run_sampler(series, priors, config);
    REQUIRE(a.size() == config.retained());
    REQUIRE(a.size() == b.size());
    for (int i = 0; i < a.size(); ++i) {
        CHECK(a.draws[i].alpha == b.draws[i].alpha);
        CHECK(a.draws[i].tau == b.draws[i].tau);
        CHECK(a.draws[i].lambdas == b.draws[i].lambdas);
        CHECK(a.cluster_counts[i] == b.cluster_counts[i]);
        CHECK(a.cluster_counts[i] == a.draws[i].num_clusters());
    }

    SamplerConfig other = config;
    other.seed = 78;
    const auto c = run_sampler(series, priors, other);
    bool any_different = false;
    for (int i = 0; i < a.size(); ++i)
        if (a.draws[i].alpha != c.draws[i].alpha) any_different = true;
    CHECK(any_different);
}

TEST_CASE("run_sampler matches the enumerated posterior on a T = 3 series") {
    // Fixed tau, counts <= 3: the exact posterior over (m_2, m_3, partition)
    // is enumerable by marginalizing alpha and the rates analytically.
    CountSeries series(std::vector<int>{1, 2, 1});
    PriorConfig priors;
    const double tau = 1.0;
    const auto exact = oracle::exact_t3_posterior(series, priors, tau);

    SamplerConfig config;
    config.n_iterations = 100000;
    config.burn_in = 2000;
    config.thinning = 1;
    config.seed = 4242;
    config.fixed_tau = tau;
    const auto draws = run_sampler(series, priors, config);

    std::map<std::tuple<int, int, int>, int> counts;
    for (const auto& draw : draws.draws) {
        const int same = draw.lambdas[0] == draw.lambdas[1] ? 1 : 0;
        ++counts[{draw.maturations[0], draw.maturations[1], same}];
    }
    double tv = 0.0;
    for (const auto& [key, probability] : exact) {
        const double empirical =
            counts.count(key) ? counts[key] / double(draws.size()) : 0.0;
        tv += std::abs(probability - empirical);
    }
    CHECK(tv / 2.0 < 0.02);
}

TEST_CASE("run_sampler recovers homogeneous truth on a synthetic series") {
    const double true_alpha = 0.3, true_lambda = 5.0;
    const int T = 200;
    const auto series = simulate(T, true_alpha, VectorXd::Constant(T - 1, true_lambda), 31);

    PriorConfig priors;
    SamplerConfig config;
    config.n_iterations = 3000;
    config.burn_in = 1000;
    config.thinning = 1;
    config.seed = 37;
    const auto draws = run_sampler(series, priors, config);

    double mean_alpha = 0.0, var_alpha = 0.0;
    std::map<int, int> k_counts;
    for (const auto& draw : draws.draws) mean_alpha += draw.alpha;
    mean_alpha /= draws.size();
    for (const auto& draw : draws.draws)
        var_alpha += (draw.alpha - mean_alpha) * (draw.alpha - mean_alpha);
    var_alpha /= draws.size();
    for (int k : draws.cluster_counts) ++k_counts[k];

    // Truth within 3 posterior standard deviations; K concentrated low.
    CHECK(std::abs(mean_alpha - true_alpha) < 3.0 * std::sqrt(var_alpha));
    int mode_k = 0, mode_count = 0;
    for (const auto& [k, count] : k_counts)
        if (count > mode_count) mode_count = count, mode_k = k;
    CHECK(mode_k <= 3);
}

TEST_CASE("sampler config validation") {
    SamplerConfig config;
    config.n_iterations = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.n_iterations = 10;
    config.burn_in = 10;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.burn_in = 2;
    config.thinning = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.thinning = 100;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);  // no retained draws
    config.thinning = 2;
    config.fixed_tau = -1.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}
