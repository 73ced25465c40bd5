#pragma once

#include <vector>

#include "taperbeam/beam.hpp"

namespace taperbeam {

// Closed-form deflection (times 100) of the uniform solid simply supported
// beam under uniform load. kp = 0 gives 100 q0 (X^4 - 2X^3 + X)/24; kp > 0
// is integrated in a regrouped form that stays accurate as kp -> 0 (the
// naive antiderivative form cancels catastrophically for small kp).
double analytic_solid_ss(double X, double q0, double kp);

// Finite-difference reference solution on a uniform grid.
struct FdSolution {
    std::vector<double> grid;
    std::vector<double> w;  // scaled deflection (100 x) at the nodes

    // Cubic interpolation between nodes.
    double eval(double X) const;
};

// Second-order central discretization of the expanded strong form, with
// one-sided second-order boundary stencils, solved as a banded sparse
// system. With richardson = true (the default) the returned solution is the
// extrapolation over step h and h/2; with false it is the raw grid_size
// solution, which is what a convergence-order measurement needs.
// Requires grid_size >= 201.
FdSolution fd_solve(const BeamConfig& cfg, int grid_size,
                    bool richardson = true);

}  // namespace taperbeam
