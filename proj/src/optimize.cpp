#include "dpinar/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace dpinar {

OptimizeResult nelder_mead(const Objective& f, const Eigen::VectorXd& start,
                           const NelderMeadOptions& options) {
    using Eigen::VectorXd;
    const int n = static_cast<int>(start.size());

    std::vector<VectorXd> simplex(n + 1, start);
    for (int i = 0; i < n; ++i) simplex[i + 1][i] += options.initial_step;
    std::vector<double> values(n + 1);
    for (int i = 0; i <= n; ++i) values[i] = f(simplex[i]);

    std::vector<int> order(n + 1);
    OptimizeResult result;
    for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
        const int best = order[0], worst = order[n], second_worst = order[n - 1];

        double x_spread = 0.0;
        for (int i = 1; i <= n; ++i)
            x_spread = std::max(x_spread, (simplex[order[i]] - simplex[best]).cwiseAbs().maxCoeff());
        if (std::abs(values[worst] - values[best]) < options.f_tolerance &&
            x_spread < options.x_tolerance) {
            result.converged = true;
            break;
        }

        VectorXd centroid = VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += simplex[i];
        centroid /= n;

        const VectorXd reflected = centroid + (centroid - simplex[worst]);
        const double f_reflected = f(reflected);

        if (f_reflected < values[best]) {
            const VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
            const double f_expanded = f(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
        } else if (f_reflected < values[second_worst]) {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
        } else {
            const VectorXd contracted = centroid + 0.5 * (simplex[worst] - centroid);
            const double f_contracted = f(contracted);
            if (f_contracted < values[worst]) {
                simplex[worst] = contracted;
                values[worst] = f_contracted;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
                    values[i] = f(simplex[i]);
                }
            }
        }
    }

    int best = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
    result.x = simplex[best];
    result.value = values[best];
    return result;
}

OptimizeResult newton_polish(const Objective& f, const Eigen::VectorXd& start, int max_steps,
                             double grad_tolerance) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    const int n = static_cast<int>(start.size());

    OptimizeResult result;
    result.x = start;
    result.value = f(start);

    for (result.iterations = 0; result.iterations < max_steps; ++result.iterations) {
        VectorXd grad(n);
        MatrixXd hess(n, n);
        const double h = 1e-5;
        for (int i = 0; i < n; ++i) {
            VectorXd up = result.x, down = result.x;
            up[i] += h;
            down[i] -= h;
            grad[i] = (f(up) - f(down)) / (2.0 * h);
            hess(i, i) = (f(up) - 2.0 * result.value + f(down)) / (h * h);
        }
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                VectorXd pp = result.x, pm = result.x, mp = result.x, mm = result.x;
                pp[i] += h; pp[j] += h;
                pm[i] += h; pm[j] -= h;
                mp[i] -= h; mp[j] += h;
                mm[i] -= h; mm[j] -= h;
                hess(i, j) = hess(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
            }
        }
        if (grad.cwiseAbs().maxCoeff() < grad_tolerance) {
            result.converged = true;
            break;
        }

        VectorXd step = hess.ldlt().solve(-grad);
        if (!step.allFinite()) break;
        double scale = 1.0;
        VectorXd candidate = result.x + step;
        double f_candidate = f(candidate);
        while (!(f_candidate <= result.value) && scale > 1e-6) {
            scale *= 0.5;
            candidate = result.x + scale * step;
            f_candidate = f(candidate);
        }
        if (!(f_candidate <= result.value)) break;
        result.x = candidate;
        result.value = f_candidate;
    }
    return result;
}

}  // namespace dpinar
