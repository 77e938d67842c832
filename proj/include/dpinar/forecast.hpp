#pragma once

#include "dpinar/gibbs.hpp"
#include "dpinar/types.hpp"

namespace dpinar {

/// h-step predictive pmf over 0..y_cap with a certified truncation.
struct ForecastDistribution {
    int horizon = 1;
    VectorXd pmf;            // index = count value
    double tail_mass = 0.0;  // mass beyond the cap, < 1e-8 by construction
    int point_forecast = 0;  // generalized median
};

/// Innovation rates extended past the observed window for one posterior draw.
struct RateExtension {
    VectorXd future_rates;  // lambda_{T+1}..lambda_{T+h}
};

/// Exact h-step transition law given future rates: convolution of
/// Bin(y_t, alpha^h) with Poisson(mu_h), mu_h built by the recurrence
/// mu_{i+1} = alpha mu_i + lambda_{t+i+1}. The cap is grown automatically
/// until the truncated tail is below `tail_target`.
VectorXd hstep_transition_pmf(int y_t, double alpha, const RateExtension& future_rates,
                              int y_cap_hint, double tail_target = 1e-8);

/// Sequential urn draws of lambda_{T+1}..lambda_{T+h}, previously extended
/// rates joining the urn.
RateExtension extend_rates(const GibbsState& draw, int h, const PriorConfig& priors, Rng& rng);

/// Monte Carlo average of per-draw h-step pmfs.
ForecastDistribution predictive_pmf(const PosteriorDraws& draws, const CountSeries& series, int h,
                                    const PriorConfig& priors, Rng& rng);

/// argmin over y of |0.5 - CDF(y)|, smallest index on ties.
int generalized_median(const VectorXd& pmf);

}  // namespace dpinar
