#include "taperbeam/oracles.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <stdexcept>

namespace taperbeam {

double analytic_solid_ss(double X, double q0, double kp) {
    if (!(X >= 0.0 && X <= 1.0)) {
        throw std::invalid_argument("X must lie in [0,1]");
    }
    if (kp < 0.0) throw std::invalid_argument("kp must be >= 0");
    if (kp == 0.0) {
        return 100.0 * q0 * (((X - 2.0) * X * X * X) + X) / 24.0;
    }
    // W'''' - kp W'' = q0 with W = W'' = 0 at both ends. Substituting
    // V = W'' gives V in cosh/sinh; two integrations produce terms of size
    // O(1/kp^2) that cancel to O(1), so the expression below groups them
    // into differences that are individually O(1):
    //   F(xi) = (cosh(a xi) - 1)/kp - xi^2/2, written with 2 sinh^2(a xi/2)
    //   W = (q0/kp) [ F(X) - X F(1) - tanh(a/2) (sinh(aX) - X sinh(a)) / kp ]
    const double a = std::sqrt(kp);
    const auto F = [&](double xi) {
        const double s = std::sinh(0.5 * a * xi);
        return 2.0 * s * s / kp - 0.5 * xi * xi;
    };
    const double D = std::sinh(a * X) - X * std::sinh(a);
    const double W =
        (q0 / kp) * (F(X) - X * F(1.0) - std::tanh(0.5 * a) * D / kp);
    return 100.0 * W;
}

namespace {

std::vector<double> fd_grid_solution(const BeamConfig& cfg, int M) {
    const double h = 1.0 / static_cast<double>(M - 1);
    const StiffnessProfile profile = StiffnessProfile::from_config(cfg);

    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> trip;
    trip.reserve(static_cast<size_t>(5 * M));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(M);

    // value constraints at the ends
    trip.emplace_back(0, 0, 1.0);
    trip.emplace_back(M - 1, M - 1, 1.0);

    // second boundary condition at each end, one-sided second order
    const double h2 = h * h;
    if (cfg.bc == BcKind::SS) {
        // W''(0) = 0
        trip.emplace_back(1, 0, 2.0 / h2);
        trip.emplace_back(1, 1, -5.0 / h2);
        trip.emplace_back(1, 2, 4.0 / h2);
        trip.emplace_back(1, 3, -1.0 / h2);
    } else {
        // W'(0) = 0
        trip.emplace_back(1, 0, -3.0 / (2.0 * h));
        trip.emplace_back(1, 1, 4.0 / (2.0 * h));
        trip.emplace_back(1, 2, -1.0 / (2.0 * h));
    }
    // W''(1) = 0 for both kinds
    trip.emplace_back(M - 2, M - 1, 2.0 / h2);
    trip.emplace_back(M - 2, M - 2, -5.0 / h2);
    trip.emplace_back(M - 2, M - 3, 4.0 / h2);
    trip.emplace_back(M - 2, M - 4, -1.0 / h2);

    const double h3 = h2 * h;
    const double h4 = h2 * h2;
    for (int i = 2; i <= M - 3; ++i) {
        const double X = static_cast<double>(i) * h;
        const EiDerivs e = ei_eq(X, profile);
        const double c2 = e.e2 - cfg.kp;
        const double c3 = 2.0 * e.e1;
        const double c4 = e.e0;
        // W'' : (1, -2, 1) / h^2
        // W''' : (-1, 2, 0, -2, 1) / (2 h^3)
        // W'''' : (1, -4, 6, -4, 1) / h^4
        trip.emplace_back(i, i - 2, -c3 / (2.0 * h3) + c4 / h4);
        trip.emplace_back(i, i - 1,
                          c2 / h2 + 2.0 * c3 / (2.0 * h3) - 4.0 * c4 / h4);
        trip.emplace_back(i, i, -2.0 * c2 / h2 + 6.0 * c4 / h4);
        trip.emplace_back(i, i + 1,
                          c2 / h2 - 2.0 * c3 / (2.0 * h3) - 4.0 * c4 / h4);
        trip.emplace_back(i, i + 2, c3 / (2.0 * h3) + c4 / h4);
        rhs(i) = load(X, cfg.q0, cfg.gamma);
    }

    Eigen::SparseMatrix<double> A(M, M);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
    solver.analyzePattern(A);
    solver.factorize(A);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("singular finite-difference system");
    }
    const Eigen::VectorXd w = solver.solve(rhs);
    std::vector<double> out(static_cast<size_t>(M));
    for (int i = 0; i < M; ++i) out[static_cast<size_t>(i)] = 100.0 * w(i);
    return out;
}

}  // namespace

double FdSolution::eval(double X) const {
    if (!(X >= 0.0 && X <= 1.0)) {
        throw std::invalid_argument("X must lie in [0,1]");
    }
    const int M = static_cast<int>(grid.size());
    const double h = 1.0 / static_cast<double>(M - 1);
    int j = static_cast<int>(std::floor(X / h));
    // window of four nodes centered on the containing interval
    int lo = j - 1;
    if (lo < 0) lo = 0;
    if (lo > M - 4) lo = M - 4;
    double acc = 0.0;
    for (int p = lo; p < lo + 4; ++p) {
        double weight = 1.0;
        for (int r = lo; r < lo + 4; ++r) {
            if (r == p) continue;
            weight *= (X - grid[static_cast<size_t>(r)]) /
                      (grid[static_cast<size_t>(p)] - grid[static_cast<size_t>(r)]);
        }
        acc += weight * w[static_cast<size_t>(p)];
    }
    return acc;
}

FdSolution fd_solve(const BeamConfig& cfg, int grid_size, bool richardson) {
    if (grid_size < 201) {
        throw std::invalid_argument("fd_solve needs grid_size >= 201");
    }
    FdSolution sol;
    sol.grid.resize(static_cast<size_t>(grid_size));
    const double h = 1.0 / static_cast<double>(grid_size - 1);
    for (int i = 0; i < grid_size; ++i) {
        sol.grid[static_cast<size_t>(i)] = static_cast<double>(i) * h;
    }
    const std::vector<double> coarse = fd_grid_solution(cfg, grid_size);
    if (!richardson) {
        sol.w = coarse;
        return sol;
    }
    // halved step with aligned nodes: fine node 2i sits on coarse node i
    const int fine_size = 2 * grid_size - 1;
    const std::vector<double> fine = fd_grid_solution(cfg, fine_size);
    sol.w.resize(static_cast<size_t>(grid_size));
    for (int i = 0; i < grid_size; ++i) {
        sol.w[static_cast<size_t>(i)] =
            (4.0 * fine[static_cast<size_t>(2 * i)] - coarse[static_cast<size_t>(i)]) / 3.0;
    }
    return sol;
}

}  // namespace taperbeam
