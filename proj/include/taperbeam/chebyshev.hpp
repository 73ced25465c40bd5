#pragma once

#include <array>
#include <vector>

namespace taperbeam {

// Value and first four derivatives of a scalar quantity with respect to X.
using Jet = std::array<double, 5>;

// Chebyshev expansion on [0,1] through the affine map x = 2X - 1.
struct BasisSet {
    int order;  // highest degree; the set spans T_0 .. T_order
    static constexpr double map_scale = 2.0;

    explicit BasisSet(int order);  // throws std::invalid_argument if order < 4
};

// Rows k = 0..order. Row k holds T_k(2X-1) and its first four derivatives
// with respect to X (each derivative order picks up a factor 2 from the map).
// Computed by the three-term recurrence and its differentiated forms.
std::vector<Jet> eval_basis(double X, int order);

// Free function h(X) = sum_k w_k T_k(2X-1) and derivatives through order 4.
// Linear in the weights.
Jet free_function(const std::vector<double>& weights, double X);

}  // namespace taperbeam
