#include "taperbeam/dfl_tfc.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace taperbeam {

CollocationGrid CollocationGrid::uniform(int count) {
    if (count < 2) throw std::invalid_argument("grid needs at least 2 points");
    CollocationGrid grid;
    grid.kind = GridKind::Uniform;
    grid.points.resize(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        grid.points[static_cast<size_t>(i)] =
            static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return grid;
}

CollocationGrid CollocationGrid::chebyshev_gauss_lobatto(int count) {
    if (count < 2) throw std::invalid_argument("grid needs at least 2 points");
    CollocationGrid grid;
    grid.kind = GridKind::ChebyshevGaussLobatto;
    grid.points.resize(static_cast<size_t>(count));
    // cos on [0, pi] descending, mapped to [0,1] ascending
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < count; ++i) {
        const double x = std::cos(pi * static_cast<double>(count - 1 - i) /
                                  static_cast<double>(count - 1));
        grid.points[static_cast<size_t>(i)] = 0.5 * (x + 1.0);
    }
    grid.points.front() = 0.0;
    grid.points.back() = 1.0;
    return grid;
}

void CollocationGrid::validate() const {
    if (points.empty()) throw std::invalid_argument("empty collocation grid");
    double prev = -1.0;
    for (double p : points) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("grid points must lie in [0,1]");
        }
        if (!(p > prev)) {
            throw std::invalid_argument("grid points must be strictly increasing");
        }
        prev = p;
    }
}

const char* to_string(GridKind kind) {
    return kind == GridKind::Uniform ? "uniform" : "cgl";
}

GridKind grid_kind_from_string(const std::string& name) {
    if (name == "uniform") return GridKind::Uniform;
    if (name == "cgl" || name == "chebyshev-gauss-lobatto") {
        return GridKind::ChebyshevGaussLobatto;
    }
    throw std::invalid_argument("unknown grid kind: " + name +
                                " (expected uniform or cgl)");
}

const char* method_name(SolveMethod method) {
    switch (method) {
        case SolveMethod::DflTfcLs: return "dfl-tfc-ls";
        case SolveMethod::DflTfcLbfgs: return "dfl-tfc-lbfgs";
        case SolveMethod::Galerkin: return "galerkin";
        case SolveMethod::Pinn: return "pinn";
    }
    return "unknown";
}

void assemble_system(const BeamConfig& cfg, const CollocationGrid& grid,
                     int order, Eigen::MatrixXd& A, Eigen::VectorXd& b) {
    grid.validate();
    BasisSet basis(order);
    const ConstrainedExpression ce = build_ce(cfg.bc);
    const StiffnessProfile profile = StiffnessProfile::from_config(cfg);

    const int n = static_cast<int>(grid.points.size());
    const int p = order + 1;
    A.resize(n, p);
    b.resize(n);

    // boundary functionals of each basis function
    const std::vector<Jet> at0 = eval_basis(0.0, order);
    const std::vector<Jet> at1 = eval_basis(1.0, order);
    Eigen::MatrixXd c(4, p);
    for (int j = 0; j < 4; ++j) {
        const BoundaryFunctional& f = ce.functionals[j];
        const std::vector<Jet>& end = (f.location == 0.0) ? at0 : at1;
        for (int k = 0; k < p; ++k) c(j, k) = end[static_cast<size_t>(k)][f.derivative_order];
    }

    for (int i = 0; i < n; ++i) {
        const double X = grid.points[static_cast<size_t>(i)];
        const EiDerivs e = ei_eq(X, profile);
        const std::vector<Jet> T = eval_basis(X, order);
        double psi2[4], psi3[4];  // cubic switching functions have no 4th derivative
        for (int j = 0; j < 4; ++j) {
            psi2[j] = ce.switching_polys[j].eval(X, 2);
            psi3[j] = ce.switching_polys[j].eval(X, 3);
        }
        for (int k = 0; k < p; ++k) {
            const Jet& t = T[static_cast<size_t>(k)];
            double w2 = t[2], w3 = t[3], w4 = t[4];
            for (int j = 0; j < 4; ++j) {
                const double cj = c(j, k);
                w2 -= psi2[j] * cj;
                w3 -= psi3[j] * cj;
            }
            A(i, k) = (e.e2 - cfg.kp) * w2 + 2.0 * e.e1 * w3 + e.e0 * w4;
        }
        b(i) = load(X, cfg.q0, cfg.gamma);
    }
}

double residual_mse(const BeamConfig& cfg, const CollocationGrid& grid,
                    const std::vector<double>& weights) {
    grid.validate();
    const ConstrainedExpression ce = build_ce(cfg.bc);
    const std::array<double, 4> bvals = boundary_functionals(ce, weights);
    const StiffnessProfile profile = StiffnessProfile::from_config(cfg);
    double acc = 0.0;
    for (double X : grid.points) {
        const FreeFunctionData data{free_function(weights, X), bvals};
        const Jet w = ce_eval(ce, X, data);
        const EiDerivs e = ei_eq(X, profile);
        const double r = (e.e2 - cfg.kp) * w[2] + 2.0 * e.e1 * w[3] +
                         e.e0 * w[4] - load(X, cfg.q0, cfg.gamma);
        acc += r * r;
    }
    return acc / static_cast<double>(grid.points.size());
}

SolveResult dfl_tfc_solve(const BeamConfig& cfg, int order,
                          const CollocationGrid& grid, DflMode mode) {
    const auto start = std::chrono::steady_clock::now();

    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    assemble_system(cfg, grid, order, A, b);
    const int p = order + 1;
    const double n = static_cast<double>(A.rows());

    SolveResult result;
    Eigen::VectorXd w(p);

    if (mode == DflMode::LeastSquares) {
        result.method = SolveMethod::DflTfcLs;
        LeastSquaresResult ls = solve_least_squares(A, b);
        w = ls.x;
        result.rank = ls.rank;
    } else {
        result.method = SolveMethod::DflTfcLbfgs;
        // The raw quadratic is badly conditioned: high-order columns carry
        // fourth-derivative values of order 1e8 while the boundary-dominated
        // columns vanish. Rescaling every column to unit norm makes the
        // iteration converge; the weights are mapped back afterwards.
        Eigen::VectorXd scale(p);
        for (int k = 0; k < p; ++k) {
            const double norm = A.col(k).norm();
            scale(k) = (norm > 0.0) ? 1.0 / norm : 1.0;
        }
        const Eigen::MatrixXd As = A * scale.asDiagonal();

        Objective objective = [&](const Eigen::VectorXd& v,
                                  Eigen::VectorXd& grad) {
            Eigen::VectorXd r = As * v - b;
            grad = (2.0 / n) * (As.transpose() * r);
            return r.squaredNorm() / n;
        };

        LbfgsSettings settings;
        settings.outer_steps = 10;
        settings.max_inner_iterations = 50;
        settings.history_size = 100;
        LbfgsResult opt =
            lbfgs_minimize(objective, Eigen::VectorXd::Zero(p), settings);
        w = scale.asDiagonal() * opt.x;
        result.trace = std::move(opt.trace);
        result.line_search_failed = opt.line_search_failed;
    }

    result.weights.assign(w.data(), w.data() + p);
    result.final_loss = residual_mse(cfg, grid, result.weights);
    result.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return result;
}

Jet deflection_jet(const std::vector<double>& weights,
                   const ConstrainedExpression& ce, double X) {
    return ce_eval_weights(ce, weights, X);
}

double deflection(const SolveResult& result, const ConstrainedExpression& ce,
                  double X) {
    return 100.0 * deflection_jet(result.weights, ce, X)[0];
}

}  // namespace taperbeam
