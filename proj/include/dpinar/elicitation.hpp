#pragma once

#include "dpinar/stirling.hpp"

#include <limits>
#include <stdexcept>
#include <utility>

namespace dpinar {

/// Reference distributions the hyperparameter search matches against: a
/// discrete uniform on {k_min..k_max} for the cluster count and a continuous
/// uniform on [0, lambda_max] for the base density.
struct ElicitationTargets {
    int k_min = 1;
    int k_max = 1;
    double lambda_max = 1.0;
    int series_length = 2;  // T

    /// Upper bound of the concentration range the cluster-count objective
    /// integrates over. The KL valley in (a, b) is extremely flat, and with
    /// an unbounded domain the minimizer is pulled toward concentrations of
    /// order 10^3, far beyond the regime where the cluster-count prior is
    /// informative for series of moderate length; the bound pins the search
    /// to the informative regime.
    double tau_upper = 850.0;

    void validate() const {
        if (!(1 <= k_min && k_min <= k_max && k_max <= series_length - 1))
            throw std::invalid_argument("ElicitationTargets: need 1 <= k_min <= k_max <= T-1");
        if (!(lambda_max > 0.0)) throw std::invalid_argument("ElicitationTargets: lambda_max must be > 0");
        if (!(tau_upper > 1.0)) throw std::invalid_argument("ElicitationTargets: tau_upper must be > 1");
    }
};

/// Pr{K = k | tau} over {1..n} for n draws from the urn.
double cluster_count_prior_given_tau(int k, double tau, int n, const StirlingTable& table);

/// log I(a, b; k) = log int_0^U tau^{k+a-1} e^{-b tau} Gamma(tau)/Gamma(tau+n) dtau,
/// by adaptive quadrature with the tau^{k+a-1} endpoint factor absorbed
/// analytically near zero. Relative error target 1e-8. The default upper
/// limit is the full half line.
double log_cluster_integral(double a, double b, int k, int n,
                            double tau_upper = std::numeric_limits<double>::infinity());

/// Marginal pmf of the cluster count after mixing tau over Gamma(a, b),
/// assembled from the exact Gamma-prior normalization.
double marginal_cluster_pmf(int k, double a_tau, double b_tau, int n, const StirlingTable& table);

/// KL objective for the concentration prior, up to the (a,b)-independent
/// constant dropped during optimization.
double tau_prior_kl_objective(double a_tau, double b_tau, const ElicitationTargets& targets);

/// KL divergence between the Gamma(a, b) base density and the uniform on
/// [0, lambda_max], in closed form.
double base_measure_kl_objective(double a_g0, double b_g0, double lambda_max);

/// Minimize the cluster-count KL over (a_tau, b_tau).
std::pair<double, double> elicit_tau_prior(const ElicitationTargets& targets);

/// Minimize the base-density KL over (a_g0, b_g0).
std::pair<double, double> elicit_base_measure(const ElicitationTargets& targets);

}  // namespace dpinar
