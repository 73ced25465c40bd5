#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "taperbeam/beam.hpp"
#include "taperbeam/constrained_expression.hpp"
#include "taperbeam/linalg.hpp"

namespace taperbeam {

enum class GridKind { Uniform, ChebyshevGaussLobatto };

struct CollocationGrid {
    std::vector<double> points;  // strictly increasing, within [0,1]
    GridKind kind = GridKind::Uniform;

    static CollocationGrid uniform(int count = 100);
    static CollocationGrid chebyshev_gauss_lobatto(int count = 100);

    void validate() const;  // throws std::invalid_argument
};

const char* to_string(GridKind kind);  // "uniform" | "cgl"
GridKind grid_kind_from_string(const std::string& name);

enum class SolveMethod { DflTfcLs, DflTfcLbfgs, Galerkin, Pinn };

const char* method_name(SolveMethod method);

struct SolveResult {
    std::vector<double> weights;  // solver coefficients / parameters
    double final_loss = 0.0;      // mean squared residual at the grid points
    double wall_time = 0.0;       // seconds
    SolveMethod method = SolveMethod::DflTfcLs;
    int rank = -1;                       // least-squares path only
    bool line_search_failed = false;     // iterative paths only
    std::vector<double> trace;           // iterative paths: loss per step
};

enum class DflMode { LeastSquares, Lbfgs };

// Design matrix and right-hand side of the collocation system. Because the
// constrained expression and the differential operator are both linear in
// the free function, residual(X_i; w) = (A w - b)_i exactly; row i holds the
// operator applied to each basis function's constrained expression at X_i.
void assemble_system(const BeamConfig& cfg, const CollocationGrid& grid,
                     int order, Eigen::MatrixXd& A, Eigen::VectorXd& b);

// Mean of squared residuals of the constrained expression with these
// weights, evaluated directly (no design matrix) at the grid points. This is
// the quantity reported as SolveResult::final_loss.
double residual_mse(const BeamConfig& cfg, const CollocationGrid& grid,
                    const std::vector<double>& weights);

SolveResult dfl_tfc_solve(const BeamConfig& cfg, int order = 15,
                          const CollocationGrid& grid = CollocationGrid::uniform(),
                          DflMode mode = DflMode::LeastSquares);

// Reported deflection: 100 times the constrained expression at X.
double deflection(const SolveResult& result, const ConstrainedExpression& ce,
                  double X);

// Full jet of the (unscaled) constrained expression with the given weights.
Jet deflection_jet(const std::vector<double>& weights,
                   const ConstrainedExpression& ce, double X);

}  // namespace taperbeam
