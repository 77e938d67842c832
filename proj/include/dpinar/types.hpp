#pragma once

#include <Eigen/Dense>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpinar {

using Eigen::VectorXd;
using Eigen::VectorXi;

/// Observed counts y_1..y_T. y_1 is conditioned on, never modeled.
struct CountSeries {
    VectorXi counts;
    std::vector<std::string> epoch_labels;  // optional, empty or size T

    CountSeries() = default;
    explicit CountSeries(VectorXi c, std::vector<std::string> labels = {})
        : counts(std::move(c)), epoch_labels(std::move(labels)) {
        validate();
    }
    explicit CountSeries(const std::vector<int>& c)
        : counts(Eigen::Map<const VectorXi>(c.data(), static_cast<Eigen::Index>(c.size()))) {
        validate();
    }

    int length() const { return static_cast<int>(counts.size()); }
    int max_count() const { return counts.maxCoeff(); }

    // Training prefix y_1..y_n.
    CountSeries prefix(int n) const {
        if (n < 2 || n > length()) throw std::invalid_argument("CountSeries::prefix: bad length");
        return CountSeries(VectorXi(counts.head(n)));
    }

    void validate() const {
        if (counts.size() < 2) throw std::invalid_argument("CountSeries: need T >= 2");
        if ((counts.array() < 0).any()) throw std::invalid_argument("CountSeries: negative count");
        if (!epoch_labels.empty() && epoch_labels.size() != static_cast<size_t>(counts.size()))
            throw std::invalid_argument("CountSeries: label count mismatch");
    }
};

/// The six model hyperparameters: Beta prior on the thinning probability,
/// Gamma prior on the concentration, and the Gamma base measure.
struct PriorConfig {
    double a_alpha = 1.0;
    double b_alpha = 1.0;
    double a_tau = 1.0;
    double b_tau = 1.0;
    double a_g0 = 1.0;
    double b_g0 = 1.0;

    void validate() const {
        for (double v : {a_alpha, b_alpha, a_tau, b_tau, a_g0, b_g0})
            if (!(v > 0.0)) throw std::invalid_argument("PriorConfig: hyperparameters must be > 0");
    }
};

/// Grouping of the innovation rates by exact value equality. Point-mass
/// reuse in the urn makes exact ties the cluster definition.
struct ClusterView {
    std::vector<double> unique_rates;  // lambda*_1..lambda*_k
    std::vector<int> assignment;       // index into unique_rates, one per epoch t=2..T
    std::vector<int> occupancy;        // n_j

    int num_clusters() const { return static_cast<int>(unique_rates.size()); }
};

inline ClusterView make_cluster_view(const VectorXd& lambdas) {
    ClusterView view;
    view.assignment.resize(lambdas.size());
    std::map<double, int> index_of;
    for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
        auto [it, inserted] = index_of.try_emplace(lambdas[i], view.num_clusters());
        if (inserted) {
            view.unique_rates.push_back(lambdas[i]);
            view.occupancy.push_back(0);
        }
        view.assignment[i] = it->second;
        ++view.occupancy[it->second];
    }
    return view;
}

/// One configuration of the augmented model. lambdas and maturations are
/// indexed t = 2..T, stored at offsets 0..T-2.
struct GibbsState {
    double alpha = 0.5;
    VectorXd lambdas;
    VectorXi maturations;
    double tau = 1.0;
    double u = 0.5;  // auxiliary variable for the concentration update

    int num_clusters() const {
        std::map<double, int> seen;
        for (Eigen::Index i = 0; i < lambdas.size(); ++i) ++seen[lambdas[i]];
        return static_cast<int>(seen.size());
    }

    void check_invariants(const CountSeries& series) const {
        const int T = series.length();
        if (lambdas.size() != T - 1 || maturations.size() != T - 1)
            throw std::logic_error("GibbsState: size mismatch with series");
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::logic_error("GibbsState: alpha out of [0,1]");
        if (!(tau > 0.0)) throw std::logic_error("GibbsState: tau must be > 0");
        for (int t = 2; t <= T; ++t) {
            const int m = maturations[t - 2];
            const int bound = std::min(series.counts[t - 2], series.counts[t - 1]);
            if (m < 0 || m > bound) throw std::logic_error("GibbsState: maturation bound violated");
            if (!(lambdas[t - 2] > 0.0)) throw std::logic_error("GibbsState: nonpositive lambda");
        }
    }
};

}  // namespace dpinar
