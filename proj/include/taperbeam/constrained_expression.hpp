#pragma once

#include <array>
#include <vector>

#include "taperbeam/beam.hpp"
#include "taperbeam/chebyshev.hpp"

namespace taperbeam {

// Boundary functional c[h] = h^{(derivative_order)}(location).
struct BoundaryFunctional {
    double location;        // 0 or 1
    int derivative_order;   // 0, 1, or 2
};

// Polynomial of degree <= 3 with rational coefficients stored as integer
// numerators over a common integer denominator. Horner evaluation on the
// numerators keeps endpoint values exact, which is what makes the boundary
// residuals of a constrained expression vanish identically in floating point.
struct SwitchingPoly {
    std::array<long long, 4> num;  // ascending monomial order
    long long den;

    double coeff(int k) const;
    // d-th derivative value at X, d in 0..4 (identically zero for d >= 4).
    double eval(double X, int d) const;
};

// Switching functions for one boundary kind. They satisfy the Kronecker
// property functional_i[psi_j] = delta_ij, so
//   W(X) = h(X) - sum_j psi_j(X) c_j(h)
// satisfies every listed boundary condition exactly for any smooth h.
struct ConstrainedExpression {
    BcKind bc;
    std::array<BoundaryFunctional, 4> functionals;
    std::array<SwitchingPoly, 4> switching_polys;
};

// Closed-form switching polynomials. Production path.
ConstrainedExpression build_ce(BcKind bc);

// Generic construction: assemble M_ij = functional_i[X^j], invert, and read
// each switching function's monomial coefficients off a column of M^{-1}.
// Kept as an independent cross-check of the closed forms; throws
// std::runtime_error if the functionals are linearly dependent.
std::array<std::array<double, 4>, 4> build_ce_generic(BcKind bc);

// Free-function data consumed by ce_eval: the jet of h at the evaluation
// point plus the four boundary functionals of h in ce.functionals order.
struct FreeFunctionData {
    Jet at_x;
    std::array<double, 4> boundary;
};

// W^{(d)}(X) = h^{(d)}(X) - sum_j psi_j^{(d)}(X) c_j(h) for d = 0..4.
Jet ce_eval(const ConstrainedExpression& ce, double X, const FreeFunctionData& h);

// Boundary functionals of the Chebyshev free function with these weights.
std::array<double, 4> boundary_functionals(const ConstrainedExpression& ce,
                                           const std::vector<double>& weights);

// Convenience: evaluate the constrained expression for a Chebyshev free
// function directly from its weights.
Jet ce_eval_weights(const ConstrainedExpression& ce,
                    const std::vector<double>& weights, double X);

}  // namespace taperbeam
