#include "dpinar/elicitation.hpp"

#include "dpinar/logprob.hpp"
#include "dpinar/optimize.hpp"
#include "dpinar/random.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

namespace dpinar {

namespace {

// Adaptive Simpson with interval bisection.
struct AdaptiveSimpson {
    std::function<double(double)> f;
    double tolerance;
    int max_depth = 40;
    int evaluations = 0;

    double integrate(double lo, double hi) {
        const double mid = 0.5 * (lo + hi);
        const double f_lo = eval(lo), f_mid = eval(mid), f_hi = eval(hi);
        const double whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
        return recurse(lo, hi, f_lo, f_mid, f_hi, whole, tolerance, max_depth);
    }

  private:
    double eval(double x) {
        ++evaluations;
        return f(x);
    }

    double recurse(double lo, double hi, double f_lo, double f_mid, double f_hi, double whole,
                   double tol, int depth) {
        const double mid = 0.5 * (lo + hi);
        const double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
        const double f_lmid = eval(lmid), f_rmid = eval(rmid);
        const double left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lmid + f_mid);
        const double right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rmid + f_hi);
        const double delta = left + right - whole;
        if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
            return left + right + delta / 15.0;
        return recurse(lo, mid, f_lo, f_lmid, f_mid, left, 0.5 * tol, depth - 1) +
               recurse(mid, hi, f_mid, f_rmid, f_hi, right, 0.5 * tol, depth - 1);
    }
};

// log of the smooth part f(tau) = e^{-b tau} Gamma(tau+1) / Gamma(tau+n),
// the integrand with the tau^{k+a-2} factor peeled off (tau Gamma(tau) =
// Gamma(tau+1) removes the pole at zero).
double log_smooth_part(double tau, double b, int n) {
    return -b * tau + std::lgamma(tau + 1.0) - std::lgamma(tau + n);
}

// log of int exp(log_g(s)) ds. Locates the peak by scan plus ternary
// refinement, cuts where the log-integrand has dropped `drop` nats, and
// runs adaptive Simpson on the scaled integrand over that window only, so
// very sharp peaks (large shape parameters) stay cheap.
double integrate_log_integrand(const std::function<double(double)>& log_g, double scan_lo,
                               double scan_hi, double clamp_lo, double clamp_hi,
                               double drop = 50.0) {
    scan_hi = std::min(scan_hi, clamp_hi);
    double s_best = scan_lo, v_best = neg_inf;
    for (double s = scan_lo; s <= scan_hi; s += 0.5) {
        const double v = log_g(s);
        if (v > v_best) {
            v_best = v;
            s_best = s;
        }
    }
    if (v_best == neg_inf) return neg_inf;

    double lo = std::max(clamp_lo, s_best - 0.5), hi = std::min(clamp_hi, s_best + 0.5);
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (log_g(m1) < log_g(m2)) lo = m1;
        else hi = m2;
    }
    const double s_peak = 0.5 * (lo + hi);
    const double peak = log_g(s_peak);

    const auto cut = [&](double direction) {
        double delta = 1e-9;
        while (delta <= 1e4) {
            const double s = s_peak + direction * delta;
            if (direction < 0.0 && s <= clamp_lo) return clamp_lo;
            if (direction > 0.0 && s >= clamp_hi) return clamp_hi;
            if (log_g(s) < peak - drop) return s;
            delta *= 2.0;
        }
        return s_peak + direction * delta;
    };
    const double s_lo = std::max(clamp_lo, cut(-1.0));
    const double s_hi = std::min(clamp_hi, cut(+1.0));
    if (!(s_hi > s_lo)) return neg_inf;

    AdaptiveSimpson quad;
    quad.f = [&](double s) { return std::exp(log_g(s) - peak); };
    // Rough pass fixes the tolerance scale, then the adaptive pass refines.
    double rough = 0.0;
    const int panels = 64;
    const double h = (s_hi - s_lo) / (2 * panels);
    for (int i = 0; i <= 2 * panels; ++i)
        rough += quad.f(s_lo + i * h) * (i == 0 || i == 2 * panels ? 1.0 : (i % 2 ? 4.0 : 2.0));
    rough *= h / 3.0;
    // Relative target 1e-9, floored at the integrand's own rounding noise:
    // log_g carries absolute error ~ eps * |peak| from cancellation of its
    // large terms, which exp() turns into the same relative error.
    const double rel = std::max(1e-9, 50.0 * std::numeric_limits<double>::epsilon() *
                                          std::abs(peak));
    quad.tolerance = std::max(rough, 1e-300) * rel;
    const double integral = quad.integrate(s_lo, s_hi);
    return integral > 0.0 ? peak + std::log(integral) : neg_inf;
}

}  // namespace

double cluster_count_prior_given_tau(int k, double tau, int n, const StirlingTable& table) {
    if (n < 1 || n > table.size()) throw std::domain_error("cluster_count_prior_given_tau: bad n");
    if (!(tau > 0.0)) throw std::domain_error("cluster_count_prior_given_tau: tau must be > 0");
    if (k < 1 || k > n) return 0.0;
    return std::exp(table.log_value(n, k) + k * std::log(tau) + std::lgamma(tau) -
                    std::lgamma(tau + n));
}

double log_cluster_integral(double a, double b, int k, int n, double tau_upper) {
    if (!(a > 0.0 && b > 0.0)) throw std::domain_error("log_cluster_integral: need a, b > 0");
    if (k < 1 || k > n) throw std::domain_error("log_cluster_integral: k outside {1..n}");
    if (!(tau_upper > 1.0)) throw std::domain_error("log_cluster_integral: need tau_upper > 1");

    // I = int_0^U tau^{c-1} f(tau) dtau with c = k + a - 1 > 0 and
    // f(tau) = e^{-b tau} Gamma(tau+1)/Gamma(tau+n).
    const double c = k + a - 1.0;
    const double s_upper = std::log(tau_upper);  // +inf when unbounded
    const auto log_g = [&](double s) { return c * s + log_smooth_part(std::exp(s), b, n); };

    double result;
    if (c >= 1.0) {
        // No endpoint singularity: one pass in s = log tau over the line.
        result = integrate_log_integrand(log_g, -40.0, 60.0,
                                         -std::numeric_limits<double>::infinity(), s_upper);
    } else {
        // Piece on (0, 1] with u = tau^c absorbing the singular factor
        // exactly; the integrand in u is bounded and smooth.
        const double scale = std::max(log_smooth_part(0.0, b, n), log_smooth_part(1.0, b, n));
        AdaptiveSimpson quad;
        quad.tolerance = 1e-11;
        quad.f = [&](double u) {
            const double tau = (u <= 0.0) ? 0.0 : std::pow(u, 1.0 / c);
            return std::exp(log_smooth_part(tau, b, n) - scale);
        };
        const double piece_a = quad.integrate(0.0, 1.0) / c;
        const double log_piece_a = piece_a > 0.0 ? scale + std::log(piece_a) : neg_inf;

        // Remainder on [1, U) in s-space, peak clamped to s >= 0.
        const double log_piece_b = integrate_log_integrand(log_g, 0.0, 60.0, 0.0, s_upper);
        result = log_sum_exp(log_piece_a, log_piece_b);
    }

    if (!std::isfinite(result)) {
        std::ostringstream msg;
        msg << "log_cluster_integral: quadrature failed (a=" << a << ", b=" << b << ", k=" << k
            << ", n=" << n << ")";
        throw std::runtime_error(msg.str());
    }
    return result;
}

double marginal_cluster_pmf(int k, double a_tau, double b_tau, int n, const StirlingTable& table) {
    if (n < 1 || n > table.size()) throw std::domain_error("marginal_cluster_pmf: bad n");
    if (!(a_tau > 0.0 && b_tau > 0.0)) throw std::domain_error("marginal_cluster_pmf: need a, b > 0");
    if (k < 1 || k > n) return 0.0;
    return std::exp(a_tau * std::log(b_tau) - std::lgamma(a_tau) + table.log_value(n, k) +
                    log_cluster_integral(a_tau, b_tau, k, n));
}

double tau_prior_kl_objective(double a_tau, double b_tau, const ElicitationTargets& targets) {
    targets.validate();
    const int n = targets.series_length - 1;
    double mean_log_integral = 0.0;
    for (int k = targets.k_min; k <= targets.k_max; ++k)
        mean_log_integral += log_cluster_integral(a_tau, b_tau, k, n, targets.tau_upper);
    mean_log_integral /= (targets.k_max - targets.k_min + 1);
    return std::lgamma(a_tau) - a_tau * std::log(b_tau) - mean_log_integral;
}

double base_measure_kl_objective(double a_g0, double b_g0, double lambda_max) {
    return -std::log(lambda_max) - a_g0 * std::log(b_g0) + std::lgamma(a_g0) -
           (a_g0 - 1.0) * (std::log(lambda_max) - 1.0) + 0.5 * b_g0 * lambda_max;
}

namespace {

std::pair<double, double> minimize_in_log_space(const Objective& f_log,
                                                const std::vector<Eigen::Vector2d>& starts) {
    OptimizeResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (const auto& start : starts) {
        NelderMeadOptions options;
        options.max_iterations = 600;
        auto result = nelder_mead(f_log, start, options);
        const bool better =
            result.value < best.value ||
            (result.value == best.value && best.x.size() > 0 &&
             (result.x[0] < best.x[0] || (result.x[0] == best.x[0] && result.x[1] < best.x[1])));
        if (better) best = result;
    }
    if (!std::isfinite(best.value))
        throw std::runtime_error("elicitation: optimizer failed to find a finite objective");
    auto polished = newton_polish(f_log, best.x, 40, 1e-11);
    if (polished.value <= best.value) best = polished;
    return {std::exp(best.x[0]), std::exp(best.x[1])};
}

}  // namespace

std::pair<double, double> elicit_tau_prior(const ElicitationTargets& targets) {
    targets.validate();
    const Objective f_log = [&](const Eigen::VectorXd& p) {
        if (p.cwiseAbs().maxCoeff() > 30.0) return 1e100;  // keep quadrature in range
        return tau_prior_kl_objective(std::exp(p[0]), std::exp(p[1]), targets);
    };
    Rng rng(0x5e11c17u);
    std::vector<Eigen::Vector2d> starts = {{std::log(0.5), std::log(0.01)}};
    for (int i = 0; i < 2; ++i)
        starts.emplace_back(std::log(0.1) + draw_uniform(rng) * (std::log(5.0) - std::log(0.1)),
                            std::log(1e-3) + draw_uniform(rng) * (std::log(1.0) - std::log(1e-3)));
    return minimize_in_log_space(f_log, starts);
}

std::pair<double, double> elicit_base_measure(const ElicitationTargets& targets) {
    targets.validate();
    const Objective f_log = [&](const Eigen::VectorXd& p) {
        if (p.cwiseAbs().maxCoeff() > 60.0) return 1e100;
        return base_measure_kl_objective(std::exp(p[0]), std::exp(p[1]), targets.lambda_max);
    };
    Rng rng(0xba5e0u);
    std::vector<Eigen::Vector2d> starts = {
        {std::log(1.0), std::log(2.0 / targets.lambda_max)}};
    for (int i = 0; i < 2; ++i)
        starts.emplace_back(std::log(0.2) + draw_uniform(rng) * (std::log(10.0) - std::log(0.2)),
                            std::log(0.1 / targets.lambda_max) +
                                draw_uniform(rng) *
                                    (std::log(20.0 / targets.lambda_max) -
                                     std::log(0.1 / targets.lambda_max)));
    return minimize_in_log_space(f_log, starts);
}

}  // namespace dpinar
