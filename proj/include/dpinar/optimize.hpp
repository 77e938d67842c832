#pragma once

#include <Eigen/Dense>

#include <functional>

namespace dpinar {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct NelderMeadOptions {
    int max_iterations = 2000;
    double f_tolerance = 1e-13;
    double x_tolerance = 1e-10;
    double initial_step = 0.5;
};

struct OptimizeResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimization.
OptimizeResult nelder_mead(const Objective& f, const Eigen::VectorXd& start,
                           const NelderMeadOptions& options = {});

/// A few damped Newton steps with finite-difference gradient and Hessian,
/// used to push a simplex minimum down to machine-level stationarity.
OptimizeResult newton_polish(const Objective& f, const Eigen::VectorXd& start,
                             int max_steps = 20, double grad_tolerance = 1e-10);

}  // namespace dpinar
