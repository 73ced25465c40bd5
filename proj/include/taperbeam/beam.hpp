#pragma once

#include <string>

namespace taperbeam {

enum class BcKind { SS, CS };

const char* to_string(BcKind bc);
BcKind bc_from_string(const std::string& name);

// Non-dimensional description of the problem. Instances are validated on
// construction and treated as immutable afterwards.
//
// alpha   filling ratio, must lie in (0, 1]; alpha = 1 is a solid beam
// n_holes rows of holes along the length, >= 0
// phi     linear taper coefficient of g(X) = 1 + phi X + psi X^2
// psi     quadratic taper coefficient
// gamma   exponent of the load q(X) = q0 exp(gamma X)
// q0      load amplitude, >= 0
// kp      foundation shear parameter, >= 0 (enters as -kp W'')
// bc      boundary kind: simply supported both ends (SS) or clamped left,
//         simply supported right (CS)
struct BeamConfig {
    double alpha;
    int n_holes;
    double phi;
    double psi;
    double gamma;
    double q0;
    double kp;
    BcKind bc;

    BeamConfig(double alpha, int n_holes, double phi, double psi,
               double gamma, double q0, double kp, BcKind bc);
};

// Stiffness knockdown S(alpha, N) of the perforation pattern. Equals 1 for a
// solid beam (alpha = 1) at every N. Throws std::domain_error outside (0, 1].
double stiffness_factor(double alpha, int n_holes);

// Bending stiffness profile E(X) = S * g(X)^3 with g quadratic in X.
struct StiffnessProfile {
    double s_factor;
    double phi;
    double psi;

    static StiffnessProfile from_config(const BeamConfig& cfg);

    double eval(double X) const;
};

struct EiDerivs {
    double e0;  // E(X)
    double e1;  // E'(X)
    double e2;  // E''(X)
};

// Closed-form value and first two derivatives of the stiffness profile:
// e0 = S g^3, e1 = 3 S g^2 g', e2 = S (6 g g'^2 + 3 g^2 g'').
EiDerivs ei_eq(double X, const StiffnessProfile& profile);

// Load term q0 * exp(gamma * X).
double load(double X, double q0, double gamma);

// Strong-form residual with the stiffness product rule expanded:
//   e2 w2 + 2 e1 w3 + e0 w4 - q0 e^{gamma X} - kp w2
// where w2..w4 are the 2nd..4th derivatives of a candidate deflection at X.
double residual(double X, double w2, double w3, double w4,
                const BeamConfig& cfg);

}  // namespace taperbeam
