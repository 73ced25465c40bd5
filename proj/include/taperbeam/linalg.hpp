#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace taperbeam {

struct LeastSquaresResult {
    Eigen::VectorXd x;         // minimum-norm minimizer of |A x - b|
    Eigen::VectorXd residual;  // A x - b
    int rank;                  // effective numerical rank of A
};

// Rank-revealing orthogonal factorization; rank-deficient systems get the
// minimum-norm solution rather than an error.
LeastSquaresResult solve_least_squares(const Eigen::MatrixXd& A,
                                       const Eigen::VectorXd& b);

struct LbfgsSettings {
    int outer_steps = 1;
    int max_inner_iterations = 50;
    int history_size = 10;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
    double gradient_tolerance = 1e-12;
    // Diagnostic hook, called with (direction, gradient) at every accepted
    // step. Leave empty outside of tests.
    std::function<void(const Eigen::VectorXd&, const Eigen::VectorXd&)>
        iteration_observer;
};

struct LbfgsResult {
    Eigen::VectorXd x;          // best point seen
    double loss = 0.0;          // objective at x
    std::vector<double> trace;  // best loss after each executed outer step
    bool line_search_failed = false;
    int iterations = 0;         // accepted steps across all outer steps
};

// Objective callback: returns f(x) and fills grad with the gradient.
using Objective =
    std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

// L-BFGS with a strong-Wolfe line search. The iteration budget is
// outer_steps * max_inner_iterations; curvature memory persists across outer
// steps, which only delimit the trace entries. Never returns a point worse
// than the best iterate seen; a failed line search sets the flag and stops.
LbfgsResult lbfgs_minimize(const Objective& f_and_grad,
                           const Eigen::VectorXd& x0,
                           const LbfgsSettings& settings);

}  // namespace taperbeam
