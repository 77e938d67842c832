#include "dpinar/eval.hpp"

#include <cmath>
#include <stdexcept>

namespace dpinar {

std::string model_label(ModelKind model) { return model == ModelKind::dp ? "dp" : "inar1"; }

EvalPlan make_plan(int T, int holdout_len, int h) {
    if (holdout_len < 1) throw std::invalid_argument("make_plan: holdout_len < 1");
    if (h < 1) throw std::invalid_argument("make_plan: horizon < 1");
    if (T - holdout_len - h < 2) throw std::invalid_argument("make_plan: infeasible window");

    EvalPlan plan;
    plan.horizon = h;
    plan.folds.reserve(holdout_len);
    for (int s = T - holdout_len + 1; s <= T; ++s) plan.folds.push_back({s, s - h});
    return plan;
}

PosteriorDraws fit_baseline_inar1(const CountSeries& series, const PriorConfig& priors,
                                  const SamplerConfig& config) {
    series.validate();
    priors.validate();
    config.validate();

    const int T = series.length();
    Rng rng(config.seed);
    GibbsState state = config.initial_state ? *config.initial_state
                                            : default_initial_state(series, priors);
    // Collapse to a single shared rate.
    state.lambdas.setConstant(std::max(0.5, series.counts.tail(T - 1).cast<double>().mean()));

    PosteriorDraws out;
    out.draws.reserve(config.retained());
    out.cluster_counts.reserve(config.retained());

    for (int iter = 1; iter <= config.n_iterations; ++iter) {
        for (int t = 2; t <= T; ++t) update_maturation(t, state, series, rng);
        update_alpha(state, series, priors, rng);

        double innovation_sum = 0.0;
        for (int t = 2; t <= T; ++t) innovation_sum += series.counts[t - 1] - state.maturations[t - 2];
        const double rate =
            draw_gamma(rng, priors.a_g0 + innovation_sum, priors.b_g0 + (T - 1));
        state.lambdas.setConstant(rate);

        if (iter > config.burn_in && (iter - config.burn_in) % config.thinning == 0) {
            out.draws.push_back(state);
            out.cluster_counts.push_back(1);
        }
    }
    return out;
}

ForecastDistribution predictive_pmf_homogeneous(const PosteriorDraws& draws,
                                                const CountSeries& series, int h) {
    if (draws.size() < 1) throw std::invalid_argument("predictive_pmf_homogeneous: empty sample");
    const int y_last = series.counts[series.length() - 1];

    double max_rate = 0.0, max_alpha = 0.0;
    for (const auto& draw : draws.draws) {
        max_rate = std::max(max_rate, draw.lambdas.maxCoeff());
        max_alpha = std::max(max_alpha, draw.alpha);
    }
    const int cap_hint =
        y_last + static_cast<int>(std::ceil(10.0 * (max_rate + y_last * max_alpha)));

    VectorXd accumulated = VectorXd::Zero(1);
    for (const auto& draw : draws.draws) {
        RateExtension extension;
        extension.future_rates = VectorXd::Constant(h, draw.lambdas[draw.lambdas.size() - 1]);
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

EvalReport evaluate(const CountSeries& series, const EvalPlan& plan, ModelKind model,
                    const PriorConfig& priors, const SamplerConfig& config) {
    EvalReport report;
    report.model = model_label(model);
    report.horizon = plan.horizon;

    double deviation_sum = 0.0;
    for (const auto& fold : plan.folds) {
        if (fold.train_end < 2 || fold.target > series.length())
            throw std::invalid_argument("evaluate: plan infeasible for series");
        const CountSeries window = series.prefix(fold.train_end);

        SamplerConfig fold_config = config;
        fold_config.seed = derive_seed(config.seed, static_cast<std::uint64_t>(fold.target),
                                       model == ModelKind::dp ? 1u : 2u);

        ForecastDistribution forecast;
        if (model == ModelKind::dp) {
            const PosteriorDraws draws = run_sampler(window, priors, fold_config);
            Rng forecast_rng(derive_seed(fold_config.seed, 0xf0f0u, 0u));
            forecast = predictive_pmf(draws, window, plan.horizon, priors, forecast_rng);
        } else {
            const PosteriorDraws draws = fit_baseline_inar1(window, priors, fold_config);
            forecast = predictive_pmf_homogeneous(draws, window, plan.horizon);
        }

        const int truth = series.counts[fold.target - 1];
        const int deviation = std::abs(forecast.point_forecast - truth);
        report.records.push_back({fold.target, truth, forecast.point_forecast, deviation});
        deviation_sum += deviation;
    }
    report.mad = deviation_sum / static_cast<double>(report.records.size());
    return report;
}

ComparisonRecord compare(const EvalReport& dp_report, const EvalReport& baseline_report,
                         const std::string& label) {
    if (dp_report.horizon != baseline_report.horizon ||
        dp_report.records.size() != baseline_report.records.size())
        throw std::invalid_argument("compare: mismatched plans");
    for (size_t i = 0; i < dp_report.records.size(); ++i)
        if (dp_report.records[i].target != baseline_report.records[i].target)
            throw std::invalid_argument("compare: mismatched targets");

    ComparisonRecord record;
    record.label = label;
    record.dp_mad = dp_report.mad;
    record.baseline_mad = baseline_report.mad;
    if (dp_report.mad < baseline_report.mad) record.winner = 1;
    else if (baseline_report.mad < dp_report.mad) record.winner = -1;
    return record;
}

double dp_win_fraction(const std::vector<ComparisonRecord>& records) {
    if (records.empty()) throw std::invalid_argument("dp_win_fraction: empty batch");
    int wins = 0;
    for (const auto& r : records) wins += r.winner == 1 ? 1 : 0;
    return static_cast<double>(wins) / static_cast<double>(records.size());
}

}  // namespace dpinar
