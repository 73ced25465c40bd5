#include "taperbeam/constrained_expression.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace taperbeam {

double SwitchingPoly::coeff(int k) const {
    return static_cast<double>(num[k]) / static_cast<double>(den);
}

double SwitchingPoly::eval(double X, int d) const {
    if (d > 3) return 0.0;
    // Differentiate the integer numerator symbolically, then Horner. The
    // numerator of every derivative stays integral, so endpoint values come
    // out as exact small rationals.
    long long c[4] = {num[0], num[1], num[2], num[3]};
    for (int pass = 0; pass < d; ++pass) {
        for (int k = 0; k < 3; ++k) c[k] = (k + 1) * c[k + 1];
        c[3] = 0;
    }
    double v = static_cast<double>(c[3]);
    v = v * X + static_cast<double>(c[2]);
    v = v * X + static_cast<double>(c[1]);
    v = v * X + static_cast<double>(c[0]);
    return v / static_cast<double>(den);
}

ConstrainedExpression build_ce(BcKind bc) {
    ConstrainedExpression ce;
    ce.bc = bc;
    if (bc == BcKind::SS) {
        // Constraints: value at both ends, curvature at both ends.
        ce.functionals = {BoundaryFunctional{0.0, 0}, BoundaryFunctional{1.0, 0},
                          BoundaryFunctional{0.0, 2}, BoundaryFunctional{1.0, 2}};
        ce.switching_polys = {SwitchingPoly{{1, -1, 0, 0}, 1},
                              SwitchingPoly{{0, 1, 0, 0}, 1},
                              SwitchingPoly{{0, -2, 3, -1}, 6},
                              SwitchingPoly{{0, -1, 0, 1}, 6}};
    } else {
        // Clamped left end (value and slope), simply supported right end
        // (value and curvature).
        ce.functionals = {BoundaryFunctional{0.0, 0}, BoundaryFunctional{0.0, 1},
                          BoundaryFunctional{1.0, 0}, BoundaryFunctional{1.0, 2}};
        ce.switching_polys = {SwitchingPoly{{2, 0, -3, 1}, 2},
                              SwitchingPoly{{0, 2, -3, 1}, 2},
                              SwitchingPoly{{0, 0, 3, -1}, 2},
                              SwitchingPoly{{0, 0, -1, 1}, 4}};
    }
    return ce;
}

namespace {

// functional applied to the monomial X^p.
double functional_on_monomial(const BoundaryFunctional& f, int p) {
    int d = f.derivative_order;
    if (p < d) return 0.0;
    double fac = 1.0;
    for (int k = 0; k < d; ++k) fac *= static_cast<double>(p - k);
    if (p - d == 0) return fac;
    return fac * std::pow(f.location, static_cast<double>(p - d));
}

}  // namespace

std::array<std::array<double, 4>, 4> build_ce_generic(BcKind bc) {
    const ConstrainedExpression ce = build_ce(bc);
    Eigen::Matrix4d M;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            M(i, j) = functional_on_monomial(ce.functionals[i], j);
        }
    }
    Eigen::FullPivLU<Eigen::Matrix4d> lu(M);
    if (!lu.isInvertible()) {
        throw std::runtime_error(
            "boundary functionals are linearly dependent; cannot build "
            "switching functions");
    }
    const Eigen::Matrix4d Minv = lu.inverse();
    // psi_i = sum_j (M^{-1})_{j i} X^j satisfies functional_k[psi_i] =
    // (M M^{-1})_{k i} = delta_{k i}.
    std::array<std::array<double, 4>, 4> polys{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) polys[i][j] = Minv(j, i);
    }
    return polys;
}

Jet ce_eval(const ConstrainedExpression& ce, double X,
            const FreeFunctionData& h) {
    Jet w = h.at_x;
    for (int j = 0; j < 4; ++j) {
        const double c = h.boundary[j];
        for (int d = 0; d <= 3; ++d) {
            w[d] -= ce.switching_polys[j].eval(X, d) * c;
        }
        // degree <= 3, so the fourth derivative of the correction vanishes
    }
    return w;
}

std::array<double, 4> boundary_functionals(const ConstrainedExpression& ce,
                                           const std::vector<double>& weights) {
    const Jet h0 = free_function(weights, 0.0);
    const Jet h1 = free_function(weights, 1.0);
    std::array<double, 4> c{};
    for (int j = 0; j < 4; ++j) {
        const BoundaryFunctional& f = ce.functionals[j];
        c[j] = (f.location == 0.0 ? h0 : h1)[f.derivative_order];
    }
    return c;
}

Jet ce_eval_weights(const ConstrainedExpression& ce,
                    const std::vector<double>& weights, double X) {
    FreeFunctionData data{free_function(weights, X),
                          boundary_functionals(ce, weights)};
    return ce_eval(ce, X, data);
}

}  // namespace taperbeam
