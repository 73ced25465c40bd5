#pragma once

#include <Eigen/Dense>
#include <vector>

#include "taperbeam/beam.hpp"
#include "taperbeam/dfl_tfc.hpp"
#include "taperbeam/linalg.hpp"

namespace taperbeam {

// Small tanh multilayer perceptron mapping the scalar X to a scalar output.
// Parameters are flattened layer by layer as [W row-major, b] so one vector
// feeds the optimizer.
struct MlpParams {
    std::vector<int> layer_sizes;  // e.g. {1, 5, 5, 5, 1}
    Eigen::VectorXd theta;
    unsigned seed = 0;

    static int param_count(const std::vector<int>& layer_sizes);

    // Glorot uniform weights, zero biases, reproducible across platforms
    // (mt19937_64 with an explicit 53-bit mapping to [0,1)).
    static MlpParams init_glorot(const std::vector<int>& layer_sizes,
                                 unsigned seed);

    static MlpParams from_theta(const std::vector<int>& layer_sizes,
                                const Eigen::VectorXd& theta, unsigned seed);
};

// Default architecture: three hidden layers of five tanh units.
std::vector<int> mlp_layer_sizes(int hidden_layers);

// Network output and first four derivatives with respect to the input,
// propagated through every layer as a degree-4 Taylor jet. tanh of a jet
// uses the closed-form derivative tower of tanh.
Jet mlp_forward_jet(const MlpParams& params, double X);

// Mean squared strong-form residual over the grid plus one quarter of the
// sum of squared boundary terms at X = 0 and X = 1. The gradient with
// respect to theta is exact: the jet computation is differentiated in
// reverse, layer by layer.
double pinn_loss_and_grad(const MlpParams& params, const BeamConfig& cfg,
                          const CollocationGrid& grid,
                          Eigen::VectorXd& grad);

double pinn_loss(const MlpParams& params, const BeamConfig& cfg,
                 const CollocationGrid& grid);

// Seed used when the caller does not supply one: TAPERBEAM_SEED from the
// environment if set, otherwise 42.
unsigned default_pinn_seed();

LbfgsSettings pinn_training_settings();

// Minimizes pinn_loss_and_grad from a seeded Glorot initialization.
// SolveResult::weights holds the trained parameter vector and trace the loss
// after each outer optimization step.
SolveResult train_pinn(const BeamConfig& cfg,
                       const LbfgsSettings& settings = pinn_training_settings(),
                       unsigned seed = default_pinn_seed(),
                       const CollocationGrid& grid = CollocationGrid::uniform(),
                       int hidden_layers = 3);

// Reported deflection 100 * u(X).
double pinn_deflection(const MlpParams& params, double X);

}  // namespace taperbeam
