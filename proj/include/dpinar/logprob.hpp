#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace dpinar {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// log(n!) from a growing table, lgamma beyond the table.
double log_factorial(int n);

/// log C(n, k); -inf outside the triangle.
inline double log_choose(int n, int k) {
    if (k < 0 || k > n) return neg_inf;
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

inline double log_sum_exp(double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

inline double log_sum_exp(std::span<const double> xs) {
    double m = neg_inf;
    for (double x : xs) m = std::max(m, x);
    if (m == neg_inf) return neg_inf;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

/// log Poisson(k; lambda). lambda = 0 is the degenerate point mass at 0.
inline double log_poisson_pmf(int k, double lambda) {
    if (k < 0) return neg_inf;
    if (lambda == 0.0) return k == 0 ? 0.0 : neg_inf;
    return k * std::log(lambda) - lambda - log_factorial(k);
}

/// log Binomial(k; n, p), with the p in {0,1} edges handled exactly.
inline double log_binomial_pmf(int k, int n, double p) {
    if (k < 0 || k > n) return neg_inf;
    if (p == 0.0) return k == 0 ? 0.0 : neg_inf;
    if (p == 1.0) return k == n ? 0.0 : neg_inf;
    return log_choose(n, k) + k * std::log(p) + (n - k) * std::log1p(-p);
}

/// log density of Gamma(shape, rate) at x > 0.
inline double log_gamma_pdf(double x, double shape, double rate) {
    if (!(x > 0.0)) return neg_inf;
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

/// log density of Beta(a, b) at x in (0,1).
inline double log_beta_pdf(double x, double a, double b) {
    if (a == 1.0 && b == 1.0 && x >= 0.0 && x <= 1.0) return 0.0;
    if (!(x > 0.0 && x < 1.0)) return neg_inf;
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + (a - 1.0) * std::log(x) +
           (b - 1.0) * std::log1p(-x);
}

/// Digamma by central difference of lgamma; adequate to ~1e-9 for x > 0.1.
inline double digamma(double x) {
    const double h = 1e-5;
    return (std::lgamma(x + h) - std::lgamma(x - h)) / (2.0 * h);
}

}  // namespace dpinar
