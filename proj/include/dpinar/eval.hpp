#pragma once

#include "dpinar/forecast.hpp"
#include "dpinar/gibbs.hpp"
#include "dpinar/types.hpp"

#include <string>
#include <vector>

namespace dpinar {

enum class ModelKind { dp, baseline };

std::string model_label(ModelKind model);

/// Rolling-origin scheme: for each target epoch the model is refit on the
/// prefix ending h epochs earlier.
struct EvalPlan {
    int horizon = 1;
    struct Fold {
        int target;     // epoch s whose count is predicted, 1-based
        int train_end;  // training window is y_1..y_{train_end}
    };
    std::vector<Fold> folds;
};

struct EvalReport {
    std::string model;
    int horizon = 1;
    struct Record {
        int target;
        int truth;
        int forecast;
        int deviation;
    };
    std::vector<Record> records;
    double mad = 0.0;
};

struct ComparisonRecord {
    std::string label;  // series id
    double dp_mad = 0.0;
    double baseline_mad = 0.0;
    int winner = 0;  // +1 dp, -1 baseline, 0 tie
};

EvalPlan make_plan(int T, int holdout_len, int h);

/// Homogeneous INAR(1) baseline: single shared rate with its conjugate
/// Gamma update, alpha and maturation moves as in the DP sampler. Draws
/// carry the rate replicated across epochs for interface uniformity.
PosteriorDraws fit_baseline_inar1(const CountSeries& series, const PriorConfig& priors,
                                  const SamplerConfig& config);

/// Baseline forecasting: h-step law with every future rate equal to the
/// draw's shared rate.
ForecastDistribution predictive_pmf_homogeneous(const PosteriorDraws& draws,
                                                const CountSeries& series, int h);

EvalReport evaluate(const CountSeries& series, const EvalPlan& plan, ModelKind model,
                    const PriorConfig& priors, const SamplerConfig& config);

ComparisonRecord compare(const EvalReport& dp_report, const EvalReport& baseline_report,
                         const std::string& label = "");

/// Fraction of series where the DP model has strictly lower MAD.
double dp_win_fraction(const std::vector<ComparisonRecord>& records);

}  // namespace dpinar
