#pragma once

#include <Eigen/Dense>
#include <vector>

#include "taperbeam/beam.hpp"
#include "taperbeam/dfl_tfc.hpp"

namespace taperbeam {

// Boundary-characteristic orthonormal polynomial basis: the (n-4)-dimensional
// space of polynomials of degree <= n-1 whose members satisfy all four
// boundary conditions of the given kind, orthonormal in L2([0,1]).
//
// Internally each basis function is carried as its coordinate vector in the
// orthonormal shifted-Legendre frame; that representation keeps both the
// Gram matrix and the boundary functionals accurate at machine precision,
// whereas raw monomial coefficients of an orthonormal degree-14 polynomial
// are of order 1e9 and lose eight digits to cancellation. The monomial form
// is still exported for inspection via an exact integer change of basis.
struct GalerkinBasis {
    BcKind bc;
    int n;                          // total index; basis has n - 4 functions
    Eigen::MatrixXd frame_coords;   // n x (n-4), orthonormal columns
    std::vector<std::vector<double>> polys;  // monomial coefficients, size n

    int size() const { return n - 4; }

    // theta_i(X) and its first four derivatives.
    Jet eval(int i, double X) const;

    // Boundary functional h^{(d)}(loc) of theta_i, d <= 2, loc in {0,1},
    // computed from closed-form endpoint values of the Legendre frame (no
    // numerical differentiation or monomial evaluation involved).
    double boundary_value(int i, double location, int derivative_order) const;
};

// Null space of the 4 x n boundary-constraint matrix, refined and
// re-orthonormalized. Throws std::invalid_argument unless 5 <= n <= 20.
GalerkinBasis build_basis(BcKind bc, int n);

// Weighted-residual solve: K_ij = int [(e2 t_j'' + 2 e1 t_j''' + e0 t_j'''')
// - kp t_j''] t_i dX and f_i = int q0 e^{gamma X} t_i dX over [0,1] by
// 64-point Gauss-Legendre quadrature, then K eta = f. The weight functions
// are the basis functions themselves.
SolveResult galerkin_solve(const BeamConfig& cfg, int n = 15);

// Reported deflection 100 * sum_i eta_i theta_i(X).
double galerkin_deflection(const GalerkinBasis& basis,
                           const std::vector<double>& eta, double X);

// Nodes and weights of the 64-point Gauss-Legendre rule on [0,1], computed
// once by Newton iteration on the degree-64 Legendre polynomial.
const std::vector<double>& gauss_legendre_nodes();
const std::vector<double>& gauss_legendre_weights();

}  // namespace taperbeam
