#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dpinar/core.hpp"
#include "dpinar/logprob.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace dpinar;

TEST_CASE("transition_log_pmf: empty thinning sum is pure innovation") {
    CHECK(transition_log_pmf(0, 3, 0.5, 2.0) ==
          doctest::Approx(std::log(std::exp(-2.0) * 8.0 / 6.0)).epsilon(1e-12));
}

TEST_CASE("transition_log_pmf: alpha = 0 degenerates to Poisson") {
    for (int y_prev : {0, 2, 7})
        CHECK(transition_log_pmf(y_prev, 4, 0.0, 1.0) ==
              doctest::Approx(log_poisson_pmf(4, 1.0)).epsilon(1e-12));
}

TEST_CASE("transition_log_pmf matches direct enumeration") {
    const double expected = oracle::transition_pmf(2, 1, 0.3, 1.5);
    CHECK(std::exp(transition_log_pmf(2, 1, 0.3, 1.5)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("transition_log_pmf preconditions") {
    CHECK_THROWS_AS(transition_log_pmf(-1, 0, 0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(transition_log_pmf(0, 0, 1.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(transition_log_pmf(0, 0, 0.5, 0.0), std::domain_error);
}

TEST_CASE("transition pmf sums to one over y_cur") {
    std::mt19937 gen(42);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int y_prev = trial % 7;
        const double alpha = unif(gen);
        const double lambda = 0.2 + 8.0 * unif(gen);
        double total = 0.0;
        for (int y = 0; y <= y_prev + 200; ++y)
            total += std::exp(transition_log_pmf(y_prev, y, alpha, lambda));
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("joint_log_likelihood: T = 2 is one transition") {
    CountSeries series(std::vector<int>{3, 1});
    VectorXd lambdas(1);
    lambdas << 2.0;
    CHECK(joint_log_likelihood(series, 0.4, lambdas) ==
          doctest::Approx(transition_log_pmf(3, 1, 0.4, 2.0)));
}

TEST_CASE("joint_log_likelihood: all-zero series") {
    CountSeries series(std::vector<int>{0, 0, 0, 0});
    const double c = 1.7;
    VectorXd lambdas = VectorXd::Constant(3, c);
    CHECK(joint_log_likelihood(series, 0.6, lambdas) == doctest::Approx(-3.0 * c).epsilon(1e-12));
}

TEST_CASE("joint_log_likelihood rejects length mismatch") {
    CountSeries series(std::vector<int>{1, 2, 3});
    CHECK_THROWS_AS(joint_log_likelihood(series, 0.5, VectorXd::Constant(1, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("marginalization identity on small series") {
    std::mt19937 gen(7);
    std::uniform_int_distribution<int> count(0, 5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    PriorConfig priors;  // uniform alpha prior, so prior(alpha) = 1

    for (int trial = 0; trial < 10; ++trial) {
        const int T = 3 + trial % 3;
        std::vector<int> counts(T);
        for (auto& c : counts) c = count(gen);
        CountSeries series(counts);

        GibbsState state;
        state.alpha = 0.1 + 0.8 * unif(gen);
        state.lambdas = VectorXd::Constant(T - 1, 0.5 + 2.0 * unif(gen));
        state.maturations = VectorXi::Zero(T - 1);
        state.tau = 1.0;

        double total = 0.0;
        for (const auto& m : oracle::feasible_maturations(series)) {
            for (int i = 0; i < T - 1; ++i) state.maturations[i] = m[i];
            total += std::exp(augmented_log_density(series, state, priors));
        }
        const double expected = std::exp(joint_log_likelihood(series, state.alpha, state.lambdas));
        CHECK(std::log(total) == doctest::Approx(std::log(expected)).epsilon(1e-12));
    }
}

TEST_CASE("augmented_log_density: infeasible maturation gives -inf") {
    CountSeries series(std::vector<int>{3, 1});
    PriorConfig priors;
    GibbsState state;
    state.alpha = 0.5;
    state.lambdas = VectorXd::Constant(1, 1.0);
    state.maturations = VectorXi::Constant(1, 2);  // m > y_2
    CHECK(augmented_log_density(series, state, priors) == neg_inf);
}

TEST_CASE("augmented_log_density: all-zero maturations at alpha = 0") {
    CountSeries series(std::vector<int>{2, 3, 1});
    PriorConfig priors;
    GibbsState state;
    state.alpha = 0.0;
    state.lambdas = VectorXd::Constant(2, 1.5);
    state.maturations = VectorXi::Zero(2);
    double expected = 0.0;  // log prior(0) = 0 under the uniform Beta(1,1)
    for (int t = 2; t <= 3; ++t) expected += log_poisson_pmf(series.counts[t - 1], 1.5);
    CHECK(augmented_log_density(series, state, priors) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("simulate: deterministic given seed") {
    const VectorXd rates = VectorXd::Constant(9, 3.0);
    const auto a = simulate(10, 0.4, rates, 99);
    const auto b = simulate(10, 0.4, rates, 99);
    CHECK(a.counts == b.counts);
}

TEST_CASE("simulate: alpha = 0 gives iid Poisson mean") {
    const int T = 20000;
    const double lambda = 4.0;
    const auto series = simulate(T, 0.0, VectorXd::Constant(T - 1, lambda), 5);
    const double mean = series.counts.tail(T - 1).cast<double>().mean();
    CHECK(mean == doctest::Approx(lambda).epsilon(0.02));
}

TEST_CASE("simulate: pure survival at alpha = 1, zero rates") {
    const auto series = simulate(12, 1.0, VectorXd::Zero(11), 3, 7);
    for (int t = 0; t < 12; ++t) CHECK(series.counts[t] == 7);
}

TEST_CASE("simulate: lag-1 autocorrelation near alpha") {
    const int T = 10000;
    const double alpha = 0.3, lambda = 5.0;
    const auto series = simulate(T, alpha, VectorXd::Constant(T - 1, lambda), 11);
    const VectorXd x = series.counts.cast<double>();
    const double mean = x.mean();
    double num = 0.0, den = 0.0;
    for (int t = 0; t + 1 < T; ++t) num += (x[t] - mean) * (x[t + 1] - mean);
    for (int t = 0; t < T; ++t) den += (x[t] - mean) * (x[t] - mean);
    const double acf = num / den;
    const double se = 1.0 / std::sqrt(static_cast<double>(T));
    CHECK(std::abs(acf - alpha) < 3.0 * se);
}

TEST_CASE("simulate output never has -inf likelihood") {
    std::mt19937 gen(21);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double alpha = unif(gen);
        const VectorXd rates = VectorXd::Constant(19, 0.2 + 10.0 * unif(gen));
        const auto series = simulate(20, alpha, rates, 1000 + trial);
        CHECK(std::isfinite(joint_log_likelihood(series, alpha, rates)));
    }
}

TEST_CASE("homogeneous specialization matches classic INAR(1) transition") {
    // With all rates equal, the factor is the classic Bin * Poisson mixture.
    const double alpha = 0.25, lambda = 2.5;
    for (int y_prev : {0, 1, 4})
        for (int y_cur : {0, 2, 5})
            CHECK(std::exp(transition_log_pmf(y_prev, y_cur, alpha, lambda)) ==
                  doctest::Approx(oracle::transition_pmf(y_prev, y_cur, alpha, lambda))
                      .epsilon(1e-12));
}

TEST_CASE("cluster view bookkeeping") {
    VectorXd lambdas(5);
    lambdas << 2.0, 1.0, 2.0, 3.0, 1.0;
    const auto view = make_cluster_view(lambdas);
    CHECK(view.num_clusters() == 3);
    int total = 0;
    for (int n : view.occupancy) total += n;
    CHECK(total == 5);
    for (int i = 0; i < 5; ++i) CHECK(view.unique_rates[view.assignment[i]] == lambdas[i]);
}
