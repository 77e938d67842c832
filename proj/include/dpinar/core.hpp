#pragma once

#include "dpinar/random.hpp"
#include "dpinar/types.hpp"

#include <optional>

namespace dpinar {

/// log Pr{Y_t = y_cur | Y_{t-1} = y_prev, alpha, lambda}: binomial thinning
/// of the previous count convolved with a Poisson innovation.
double transition_log_pmf(int y_prev, int y_cur, double alpha, double lambda);

/// Sum of transition log-pmfs over t = 2..T; lambdas indexed t = 2..T.
double joint_log_likelihood(const CountSeries& series, double alpha, const VectorXd& lambdas);

/// Log of the data-augmented joint over (y, m, alpha) at fixed rates:
/// innovation Poisson terms, maturation binomial terms, and the Beta prior
/// on alpha. The exchangeable prior on the rates is the urn's job and is
/// excluded here. Returns -inf for infeasible maturations.
double augmented_log_density(const CountSeries& series, const GibbsState& state,
                             const PriorConfig& priors);

/// Forward simulation. rate_schedule indexed t = 2..T. When y1 is absent the
/// first count is drawn from Poisson(rate_schedule[0]). Rates may be zero
/// here (pure-survival chains), unlike everywhere else.
CountSeries simulate(int T, double alpha, const VectorXd& rate_schedule, std::uint64_t seed,
                     std::optional<int> y1 = std::nullopt);

}  // namespace dpinar
