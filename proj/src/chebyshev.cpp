#include "taperbeam/chebyshev.hpp"

#include <stdexcept>

namespace taperbeam {

BasisSet::BasisSet(int order) : order(order) {
    // A fourth-order operator needs nonvanishing fourth derivatives in the
    // span, so anything below degree 4 cannot represent a solution.
    if (order < 4) throw std::invalid_argument("basis order must be >= 4");
}

std::vector<Jet> eval_basis(double X, int order) {
    if (order < 0) throw std::invalid_argument("basis order must be >= 0");
    std::vector<Jet> T(static_cast<size_t>(order) + 1);
    const double x = 2.0 * X - 1.0;
    T[0] = {1.0, 0.0, 0.0, 0.0, 0.0};
    if (order >= 1) T[1] = {x, 2.0, 0.0, 0.0, 0.0};
    // Differentiated recurrence, stated directly for X-derivatives: with
    // S_k[d] = d^d/dX^d T_k(2X-1),
    //   S_{k+1}[d] = 2x S_k[d] + 4d S_k[d-1] - S_{k-1}[d].
    for (int k = 1; k < order; ++k) {
        for (int d = 0; d <= 4; ++d) {
            double v = 2.0 * x * T[k][d] - T[k - 1][d];
            if (d > 0) v += 4.0 * d * T[k][d - 1];
            T[k + 1][d] = v;
        }
    }
    return T;
}

Jet free_function(const std::vector<double>& weights, double X) {
    if (weights.empty()) throw std::invalid_argument("empty weight vector");
    const int order = static_cast<int>(weights.size()) - 1;
    const std::vector<Jet> T = eval_basis(X, order);
    Jet h{0.0, 0.0, 0.0, 0.0, 0.0};
    for (int k = 0; k <= order; ++k) {
        for (int d = 0; d <= 4; ++d) h[d] += weights[k] * T[k][d];
    }
    return h;
}

}  // namespace taperbeam
