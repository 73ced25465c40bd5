#include "taperbeam/beam.hpp"

#include <cmath>
#include <stdexcept>

namespace taperbeam {

const char* to_string(BcKind bc) {
    return bc == BcKind::SS ? "ss" : "cs";
}

BcKind bc_from_string(const std::string& name) {
    if (name == "ss" || name == "SS") return BcKind::SS;
    if (name == "cs" || name == "CS") return BcKind::CS;
    throw std::invalid_argument("unknown boundary kind '" + name +
                                "' (expected ss or cs)");
}

namespace {

// g(X) = 1 + phi X + psi X^2 must stay positive on [0,1]; the minimum is at
// an endpoint or at the parabola vertex when it falls inside the interval.
void check_taper_positive(double phi, double psi) {
    auto g = [&](double X) { return 1.0 + phi * X + psi * X * X; };
    double min_g = std::min(g(0.0), g(1.0));
    if (psi > 0.0) {
        double vertex = -phi / (2.0 * psi);
        if (vertex > 0.0 && vertex < 1.0) min_g = std::min(min_g, g(vertex));
    }
    if (!(min_g > 0.0)) {
        throw std::domain_error(
            "taper profile 1 + phi X + psi X^2 must stay positive on [0,1]");
    }
}

}  // namespace

BeamConfig::BeamConfig(double alpha, int n_holes, double phi, double psi,
                       double gamma, double q0, double kp, BcKind bc)
    : alpha(alpha),
      n_holes(n_holes),
      phi(phi),
      psi(psi),
      gamma(gamma),
      q0(q0),
      kp(kp),
      bc(bc) {
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw std::domain_error("alpha must lie in (0, 1]");
    }
    if (n_holes < 0) throw std::domain_error("n_holes must be >= 0");
    if (!(q0 >= 0.0)) throw std::domain_error("q0 must be >= 0");
    if (!(kp >= 0.0)) throw std::domain_error("kp must be >= 0");
    if (!std::isfinite(phi) || !std::isfinite(psi) || !std::isfinite(gamma)) {
        throw std::domain_error("taper and load parameters must be finite");
    }
    check_taper_positive(phi, psi);
}

double stiffness_factor(double alpha, int n_holes) {
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw std::domain_error("alpha must lie in (0, 1]");
    }
    if (n_holes < 0) throw std::domain_error("n_holes must be >= 0");
    const double a = alpha;
    const double N = static_cast<double>(n_holes);
    const double a2 = a * a;
    const double a3 = a2 * a;
    const double num = a * (N + 1.0) * (N * N + 2.0 * N + a2);
    const double den = (1.0 - a2 + a3) * N * N * N + 3.0 * a * N * N +
                       (3.0 + 2.0 * a - 3.0 * a2 + a3) * a2 * N + a3;
    return num / den;
}

StiffnessProfile StiffnessProfile::from_config(const BeamConfig& cfg) {
    return StiffnessProfile{stiffness_factor(cfg.alpha, cfg.n_holes), cfg.phi,
                            cfg.psi};
}

double StiffnessProfile::eval(double X) const {
    const double g = 1.0 + phi * X + psi * X * X;
    return s_factor * g * g * g;
}

EiDerivs ei_eq(double X, const StiffnessProfile& profile) {
    const double g = 1.0 + profile.phi * X + profile.psi * X * X;
    const double gp = profile.phi + 2.0 * profile.psi * X;
    const double gpp = 2.0 * profile.psi;
    const double S = profile.s_factor;
    EiDerivs d;
    d.e0 = S * g * g * g;
    d.e1 = 3.0 * S * g * g * gp;
    d.e2 = S * (6.0 * g * gp * gp + 3.0 * g * g * gpp);
    return d;
}

double load(double X, double q0, double gamma) {
    return q0 * std::exp(gamma * X);
}

double residual(double X, double w2, double w3, double w4,
                const BeamConfig& cfg) {
    const EiDerivs e = ei_eq(X, StiffnessProfile::from_config(cfg));
    return e.e2 * w2 + 2.0 * e.e1 * w3 + e.e0 * w4 -
           load(X, cfg.q0, cfg.gamma) - cfg.kp * w2;
}

}  // namespace taperbeam
