#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "taperbeam/dfl_tfc.hpp"

using namespace taperbeam;

namespace {

BeamConfig solid_uniform(double kp) {
    return BeamConfig(1.0, 0, 0.0, 0.0, 0.0, 1.0, kp, BcKind::SS);
}

BeamConfig perforated(BcKind bc) {
    return BeamConfig(0.3, 4, 0.0, 0.0, 1.0, 10.0, 10.0, bc);
}

BeamConfig full_featured(BcKind bc) {
    return BeamConfig(0.8, 3, 0.5, 0.5, 5.0, 1.0, 10.0, bc);
}

}  // namespace

TEST_SUITE("dfl_tfc") {

TEST_CASE("uniform grid spans [0,1] with equal spacing") {
    auto g = CollocationGrid::uniform(5);
    REQUIRE(g.points.size() == 5);
    CHECK(g.points[0] == 0.0);
    CHECK(g.points[1] == 0.25);
    CHECK(g.points[2] == 0.5);
    CHECK(g.points[3] == 0.75);
    CHECK(g.points[4] == 1.0);
    CHECK(g.kind == GridKind::Uniform);
}

TEST_CASE("clustered grid is increasing with exact endpoints") {
    auto g = CollocationGrid::chebyshev_gauss_lobatto(100);
    REQUIRE(g.points.size() == 100);
    CHECK(g.points.front() == 0.0);
    CHECK(g.points.back() == 1.0);
    for (size_t i = 0; i + 1 < g.points.size(); ++i) {
        CHECK(g.points[i] < g.points[i + 1]);
    }
    // Edge spacing is much finer than center spacing.
    const double edge = g.points[1] - g.points[0];
    const double mid = g.points[50] - g.points[49];
    CHECK(edge < 0.2 * mid);
    CHECK_NOTHROW(g.validate());
}

TEST_CASE("grid guards") {
    CHECK_THROWS_AS(CollocationGrid::uniform(1), std::invalid_argument);
    CollocationGrid bad;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.points = {0.0, 1.2};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.points = {0.5, 0.25};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("grid kind names round-trip") {
    CHECK(std::string(to_string(GridKind::Uniform)) == "uniform");
    CHECK(std::string(to_string(GridKind::ChebyshevGaussLobatto)) == "cgl");
    CHECK(grid_kind_from_string("uniform") == GridKind::Uniform);
    CHECK(grid_kind_from_string("cgl") == GridKind::ChebyshevGaussLobatto);
    CHECK(grid_kind_from_string("chebyshev-gauss-lobatto") ==
          GridKind::ChebyshevGaussLobatto);
    CHECK_THROWS_AS(grid_kind_from_string("random"), std::invalid_argument);
}

TEST_CASE("method names") {
    CHECK(std::string(method_name(SolveMethod::DflTfcLs)) == "dfl-tfc-ls");
    CHECK(std::string(method_name(SolveMethod::DflTfcLbfgs)) == "dfl-tfc-lbfgs");
    CHECK(std::string(method_name(SolveMethod::Galerkin)) == "galerkin");
    CHECK(std::string(method_name(SolveMethod::Pinn)) == "pinn");
}

TEST_CASE("right-hand side vanishes without load") {
    BeamConfig cfg(0.5, 2, 0.3, 0.2, 1.0, 0.0, 10.0, BcKind::SS);
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    assemble_system(cfg, CollocationGrid::uniform(50), 15, A, b);
    CHECK(A.rows() == 50);
    CHECK(A.cols() == 16);
    CHECK(b.norm() == 0.0);
}

TEST_CASE("assembled system reproduces the direct residual") {
    // The operator and the constrained expression are both linear in the
    // weights, so A w - b must equal the pointwise residual up to roundoff
    // in the row's own magnitude.
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (BcKind bc : {BcKind::SS, BcKind::CS}) {
        BeamConfig cfg = perforated(bc);
        auto grid = CollocationGrid::uniform(40);
        const int order = 15;
        Eigen::MatrixXd A;
        Eigen::VectorXd b;
        assemble_system(cfg, grid, order, A, b);
        ConstrainedExpression ce = build_ce(bc);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> w(static_cast<size_t>(order) + 1);
            for (double& v : w) v = dist(rng);
            Eigen::Map<const Eigen::VectorXd> wv(w.data(),
                                                 static_cast<long>(w.size()));
            Eigen::VectorXd predicted = A * wv - b;
            for (size_t i = 0; i < grid.points.size(); ++i) {
                const double X = grid.points[i];
                Jet jet = deflection_jet(w, ce, X);
                const double direct = residual(X, jet[2], jet[3], jet[4], cfg);
                double row_scale = std::abs(b(static_cast<long>(i)));
                for (long k = 0; k < A.cols(); ++k) {
                    row_scale += std::abs(A(static_cast<long>(i), k) * wv(k));
                }
                const double bound = 1e-11 * std::max(1.0, row_scale);
                CHECK(std::abs(direct - predicted(static_cast<long>(i))) <= bound);
            }
        }
    }
}

TEST_CASE("solid uniform beam matches the closed-form midpoint values") {
    const double refs[3] = {1.3021, 0.6448, 0.3661};
    const double kps[3] = {0.0, 10.0, 25.0};
    ConstrainedExpression ce = build_ce(BcKind::SS);
    for (int i = 0; i < 3; ++i) {
        auto r = dfl_tfc_solve(solid_uniform(kps[i]));
        CHECK(r.rank == 12);  // four leading columns die inside the expression
        CHECK(r.final_loss <= 1e-8);
        CHECK(std::abs(deflection(r, ce, 0.5) - refs[i]) <= 5e-4);
    }
}

TEST_CASE("collocation loss is tiny on a fully featured configuration") {
    for (BcKind bc : {BcKind::SS, BcKind::CS}) {
        auto r = dfl_tfc_solve(full_featured(bc));
        CHECK(r.final_loss <= 1e-8);
        CHECK(r.wall_time >= 0.0);
        CHECK(r.method == SolveMethod::DflTfcLs);
    }
}

TEST_CASE("zero load gives a zero deflection") {
    BeamConfig cfg(0.5, 2, 0.3, 0.2, 1.0, 0.0, 10.0, BcKind::CS);
    auto r = dfl_tfc_solve(cfg);
    ConstrainedExpression ce = build_ce(BcKind::CS);
    for (double X : {0.0, 0.3, 0.5, 0.8, 1.0}) {
        CHECK(std::abs(deflection(r, ce, X)) <= 1e-12);
    }
}

TEST_CASE("solved deflection satisfies its boundary conditions bitwise") {
    for (BcKind bc : {BcKind::SS, BcKind::CS}) {
        auto r = dfl_tfc_solve(full_featured(bc));
        ConstrainedExpression ce = build_ce(bc);
        for (const auto& f : ce.functionals) {
            Jet jet = deflection_jet(r.weights, ce, f.location);
            CHECK(jet[static_cast<size_t>(f.derivative_order)] == 0.0);
        }
    }
}

TEST_CASE("least-squares solution is a local minimum of the grid loss") {
    BeamConfig cfg = perforated(BcKind::SS);
    auto grid = CollocationGrid::uniform();
    auto r = dfl_tfc_solve(cfg, 15, grid);
    const double base = residual_mse(cfg, grid, r.weights);
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> w = r.weights;
        for (double& v : w) v += 1e-4 * dist(rng);
        CHECK(residual_mse(cfg, grid, w) >= base - 1e-12);
    }
}

TEST_CASE("iterative mode lands on the least-squares answer") {
    BeamConfig cfg = solid_uniform(10.0);
    ConstrainedExpression ce = build_ce(BcKind::SS);
    auto direct = dfl_tfc_solve(cfg, 15, CollocationGrid::uniform(),
                                DflMode::LeastSquares);
    auto iterative = dfl_tfc_solve(cfg, 15, CollocationGrid::uniform(),
                                   DflMode::Lbfgs);
    CHECK(iterative.method == SolveMethod::DflTfcLbfgs);
    CHECK_FALSE(iterative.trace.empty());
    // The direct solve is the exact minimizer, so iterating the same convex
    // quadratic can never do better.
    CHECK(iterative.final_loss >= direct.final_loss - 1e-15);
    if (!iterative.line_search_failed) {
        for (double X : {0.1, 0.5, 0.9}) {
            CHECK(std::abs(deflection(direct, ce, X) -
                           deflection(iterative, ce, X)) <= 1e-4);
        }
    }
}

TEST_CASE("raising the order never hurts the loss") {
    struct Case { double alpha; int n; double phi, psi, gamma, q0, kp; };
    const Case cases[] = {
        {0.7, 1, 0.5, 0.5, 3.0, 2.0, 10.0},
        {0.8, 2, 0.3, 0.3, 4.0, 1.0, 5.0},
        {0.2, 1, 0.2, 0.2, 5.0, 4.0, 8.0},
    };
    for (const auto& c : cases) {
        for (BcKind bc : {BcKind::SS, BcKind::CS}) {
            BeamConfig cfg(c.alpha, c.n, c.phi, c.psi, c.gamma, c.q0, c.kp, bc);
            auto lo = dfl_tfc_solve(cfg, 13);
            auto hi = dfl_tfc_solve(cfg, 15);
            CHECK(lo.rank == 10);
            CHECK(hi.rank == 12);
            CHECK(hi.final_loss <= lo.final_loss);
            CHECK(hi.final_loss <= 1e-8);
        }
    }
}

TEST_CASE("reported loss is the grid mean squared residual, not a proxy") {
    BeamConfig cfg = full_featured(BcKind::CS);
    auto grid = CollocationGrid::uniform();
    auto r = dfl_tfc_solve(cfg, 15, grid);
    CHECK(r.final_loss == residual_mse(cfg, grid, r.weights));
}

TEST_CASE("clustered collocation grid solves just as well") {
    auto r = dfl_tfc_solve(solid_uniform(10.0), 15,
                           CollocationGrid::chebyshev_gauss_lobatto());
    CHECK(r.final_loss <= 1e-8);
    ConstrainedExpression ce = build_ce(BcKind::SS);
    CHECK(std::abs(deflection(r, ce, 0.5) - 0.6448) <= 5e-4);
}

}  // TEST_SUITE
