#include "taperbeam/pinn.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>

namespace taperbeam {

std::vector<int> mlp_layer_sizes(int hidden_layers) {
    if (hidden_layers < 1 || hidden_layers > 8) {
        throw std::invalid_argument("hidden layer count must be in 1..8");
    }
    std::vector<int> sizes;
    sizes.push_back(1);
    for (int i = 0; i < hidden_layers; ++i) sizes.push_back(5);
    sizes.push_back(1);
    return sizes;
}

int MlpParams::param_count(const std::vector<int>& layer_sizes) {
    int count = 0;
    for (size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        count += layer_sizes[l] * layer_sizes[l + 1] + layer_sizes[l + 1];
    }
    return count;
}

MlpParams MlpParams::init_glorot(const std::vector<int>& layer_sizes,
                                 unsigned seed) {
    MlpParams p;
    p.layer_sizes = layer_sizes;
    p.seed = seed;
    p.theta.resize(param_count(layer_sizes));
    // 64-bit engine with an explicit 53-bit mapping to [0,1); the standard
    // distribution adapters are implementation-defined, this is not.
    std::mt19937_64 rng(seed);
    auto uniform01 = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    int at = 0;
    for (size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const int fan_in = layer_sizes[l];
        const int fan_out = layer_sizes[l + 1];
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        for (int k = 0; k < fan_in * fan_out; ++k) {
            p.theta(at++) = (2.0 * uniform01() - 1.0) * limit;
        }
        for (int k = 0; k < fan_out; ++k) p.theta(at++) = 0.0;  // biases
    }
    return p;
}

MlpParams MlpParams::from_theta(const std::vector<int>& layer_sizes,
                                const Eigen::VectorXd& theta, unsigned seed) {
    if (theta.size() != param_count(layer_sizes)) {
        throw std::invalid_argument("parameter vector length mismatch");
    }
    MlpParams p;
    p.layer_sizes = layer_sizes;
    p.theta = theta;
    p.seed = seed;
    return p;
}

namespace {

using Jet5 = std::array<double, 5>;

// tanh and its first five derivatives expressed in t = tanh(z).
struct TanhTower {
    double t, f1, f2, f3, f4, f5;
};

TanhTower tanh_tower(double z) {
    TanhTower T;
    const double t = std::tanh(z);
    const double t2 = t * t;
    T.t = t;
    T.f1 = 1.0 - t2;
    T.f2 = -2.0 * t * T.f1;
    T.f3 = -2.0 + 8.0 * t2 - 6.0 * t2 * t2;
    T.f4 = t * (16.0 - 40.0 * t2 + 24.0 * t2 * t2);
    T.f5 = 16.0 - 136.0 * t2 + 240.0 * t2 * t2 - 120.0 * t2 * t2 * t2;
    return T;
}

// y = tanh(z) as degree-4 jets (Faa di Bruno through order four).
void tanh_apply(const Jet5& z, Jet5& y) {
    const TanhTower T = tanh_tower(z[0]);
    const double z1 = z[1], z2 = z[2], z3 = z[3], z4 = z[4];
    const double z1sq = z1 * z1;
    y[0] = T.t;
    y[1] = T.f1 * z1;
    y[2] = T.f2 * z1sq + T.f1 * z2;
    y[3] = T.f3 * z1sq * z1 + 3.0 * T.f2 * z1 * z2 + T.f1 * z3;
    y[4] = T.f4 * z1sq * z1sq + 6.0 * T.f3 * z1sq * z2 + 3.0 * T.f2 * z2 * z2 +
           4.0 * T.f2 * z1 * z3 + T.f1 * z4;
}

// Adjoint of tanh_apply: lz += (d y / d z)^T ly, written out per entry.
void tanh_back(const Jet5& z, const Jet5& ly, Jet5& lz) {
    const TanhTower T = tanh_tower(z[0]);
    const double z1 = z[1], z2 = z[2], z3 = z[3], z4 = z[4];
    const double z1sq = z1 * z1;
    lz[4] = ly[4] * T.f1;
    lz[3] = ly[3] * T.f1 + ly[4] * 4.0 * T.f2 * z1;
    lz[2] = ly[2] * T.f1 + ly[3] * 3.0 * T.f2 * z1 +
            ly[4] * (6.0 * T.f3 * z1sq + 6.0 * T.f2 * z2);
    lz[1] = ly[1] * T.f1 + ly[2] * 2.0 * T.f2 * z1 +
            ly[3] * (3.0 * T.f3 * z1sq + 3.0 * T.f2 * z2) +
            ly[4] * (4.0 * T.f4 * z1sq * z1 + 12.0 * T.f3 * z1 * z2 +
                     4.0 * T.f2 * z3);
    // every f_k depends on z[0] through t, with d f_k / d z0 = f_{k+1}
    lz[0] = ly[0] * T.f1 + ly[1] * T.f2 * z1 +
            ly[2] * (T.f3 * z1sq + T.f2 * z2) +
            ly[3] * (T.f4 * z1sq * z1 + 3.0 * T.f3 * z1 * z2 + T.f2 * z3) +
            ly[4] * (T.f5 * z1sq * z1sq + 6.0 * T.f4 * z1sq * z2 +
                     3.0 * T.f3 * z2 * z2 + 4.0 * T.f3 * z1 * z3 +
                     T.f2 * z4);
}

struct Workspace {
    // a[l]: activations entering layer l+1 (a[0] is the input jet);
    // z[l]: pre-activations of layer l, l = 1..L
    std::vector<std::vector<Jet5>> a;
    std::vector<std::vector<Jet5>> z;
    std::vector<std::vector<Jet5>> la;
    std::vector<std::vector<Jet5>> lz;

    void resize(const std::vector<int>& sizes) {
        const size_t L = sizes.size();
        a.resize(L);
        z.resize(L);
        la.resize(L);
        lz.resize(L);
        for (size_t l = 0; l < L; ++l) {
            a[l].resize(static_cast<size_t>(sizes[l]));
            z[l].resize(static_cast<size_t>(sizes[l]));
            la[l].resize(static_cast<size_t>(sizes[l]));
            lz[l].resize(static_cast<size_t>(sizes[l]));
        }
    }
};

// Offset of layer l's weight block inside theta.
int layer_offset(const std::vector<int>& sizes, size_t l) {
    int at = 0;
    for (size_t k = 0; k < l; ++k) {
        at += sizes[k] * sizes[k + 1] + sizes[k + 1];
    }
    return at;
}

const Jet5& forward(const std::vector<int>& sizes,
                    const Eigen::VectorXd& theta, double X, Workspace& ws) {
    const size_t L = sizes.size();
    ws.a[0][0] = {X, 1.0, 0.0, 0.0, 0.0};
    int at = 0;
    for (size_t l = 1; l < L; ++l) {
        const int in = sizes[l - 1];
        const int out = sizes[l];
        const int wofs = at;
        const int bofs = at + in * out;
        for (int j = 0; j < out; ++j) {
            Jet5& zj = ws.z[l][static_cast<size_t>(j)];
            zj = {theta(bofs + j), 0.0, 0.0, 0.0, 0.0};
            for (int i = 0; i < in; ++i) {
                const double w = theta(wofs + j * in + i);
                const Jet5& ai = ws.a[l - 1][static_cast<size_t>(i)];
                for (int d = 0; d < 5; ++d) zj[static_cast<size_t>(d)] += w * ai[static_cast<size_t>(d)];
            }
            if (l + 1 < L) {
                tanh_apply(zj, ws.a[l][static_cast<size_t>(j)]);
            } else {
                ws.a[l][static_cast<size_t>(j)] = zj;  // linear output
            }
        }
        at = bofs + out;
    }
    return ws.a[L - 1][0];
}

// Reverse sweep from the adjoint of the output jet; accumulates into grad.
void backward(const std::vector<int>& sizes, const Eigen::VectorXd& theta,
              Workspace& ws, const Jet5& lu, Eigen::VectorXd& grad) {
    const size_t L = sizes.size();
    ws.lz[L - 1][0] = lu;  // output layer is linear, la == lz there
    for (size_t l = L - 1; l >= 1; --l) {
        const int in = sizes[l - 1];
        const int out = sizes[l];
        const int wofs = layer_offset(sizes, l - 1);
        const int bofs = wofs + in * out;
        for (int i = 0; i < in; ++i) {
            ws.la[l - 1][static_cast<size_t>(i)] = {0.0, 0.0, 0.0, 0.0, 0.0};
        }
        for (int j = 0; j < out; ++j) {
            const Jet5& lzj = ws.lz[l][static_cast<size_t>(j)];
            grad(bofs + j) += lzj[0];
            for (int i = 0; i < in; ++i) {
                const Jet5& ai = ws.a[l - 1][static_cast<size_t>(i)];
                double gw = 0.0;
                const double w = theta(wofs + j * in + i);
                Jet5& lai = ws.la[l - 1][static_cast<size_t>(i)];
                for (int d = 0; d < 5; ++d) {
                    gw += lzj[static_cast<size_t>(d)] * ai[static_cast<size_t>(d)];
                    lai[static_cast<size_t>(d)] += w * lzj[static_cast<size_t>(d)];
                }
                grad(wofs + j * in + i) += gw;
            }
        }
        if (l - 1 >= 1) {
            for (int i = 0; i < in; ++i) {
                tanh_back(ws.z[l - 1][static_cast<size_t>(i)],
                          ws.la[l - 1][static_cast<size_t>(i)],
                          ws.lz[l - 1][static_cast<size_t>(i)]);
            }
        }
    }
}

struct LossTerms {
    const BeamConfig& cfg;
    const StiffnessProfile profile;

    explicit LossTerms(const BeamConfig& c)
        : cfg(c), profile(StiffnessProfile::from_config(c)) {}

    // residual value and the adjoint seed of the output jet at one point
    double residual_at(double X, const Jet5& u, Jet5& seed,
                       double inv_count) const {
        const EiDerivs e = ei_eq(X, profile);
        const double c2 = e.e2 - cfg.kp;
        const double r = c2 * u[2] + 2.0 * e.e1 * u[3] + e.e0 * u[4] -
                         load(X, cfg.q0, cfg.gamma);
        const double s = 2.0 * r * inv_count;
        seed = {0.0, 0.0, s * c2, s * 2.0 * e.e1, s * e.e0};
        return r;
    }
};

}  // namespace

Jet mlp_forward_jet(const MlpParams& params, double X) {
    Workspace ws;
    ws.resize(params.layer_sizes);
    const Jet5& u = forward(params.layer_sizes, params.theta, X, ws);
    return Jet{u[0], u[1], u[2], u[3], u[4]};
}

double pinn_loss_and_grad(const MlpParams& params, const BeamConfig& cfg,
                          const CollocationGrid& grid, Eigen::VectorXd& grad) {
    grid.validate();
    const std::vector<int>& sizes = params.layer_sizes;
    grad.setZero(params.theta.size());
    Workspace ws;
    ws.resize(sizes);
    const LossTerms terms(cfg);

    const double count = static_cast<double>(grid.points.size());
    const double inv_count = 1.0 / count;
    double residual_ss = 0.0;
    Jet5 seed;
    for (double X : grid.points) {
        const Jet5& u = forward(sizes, params.theta, X, ws);
        const double r = terms.residual_at(X, u, seed, inv_count);
        residual_ss += r * r;
        backward(sizes, params.theta, ws, seed, grad);
    }
    double loss = residual_ss / count;

    // boundary penalties, weight 1/4 per squared term
    for (int end = 0; end < 2; ++end) {
        const double X = static_cast<double>(end);
        const Jet5& u = forward(sizes, params.theta, X, ws);
        seed = {0.0, 0.0, 0.0, 0.0, 0.0};
        if (cfg.bc == BcKind::SS || end == 1) {
            // value and curvature
            loss += 0.25 * (u[0] * u[0] + u[2] * u[2]);
            seed[0] = 0.5 * u[0];
            seed[2] = 0.5 * u[2];
        } else {
            // clamped left end: value and slope
            loss += 0.25 * (u[0] * u[0] + u[1] * u[1]);
            seed[0] = 0.5 * u[0];
            seed[1] = 0.5 * u[1];
        }
        backward(sizes, params.theta, ws, seed, grad);
    }
    return loss;
}

double pinn_loss(const MlpParams& params, const BeamConfig& cfg,
                 const CollocationGrid& grid) {
    grid.validate();
    const std::vector<int>& sizes = params.layer_sizes;
    Workspace ws;
    ws.resize(sizes);
    const LossTerms terms(cfg);
    const double count = static_cast<double>(grid.points.size());
    const double inv_count = 1.0 / count;
    double residual_ss = 0.0;
    Jet5 seed;
    for (double X : grid.points) {
        const Jet5& u = forward(sizes, params.theta, X, ws);
        const double r = terms.residual_at(X, u, seed, inv_count);
        residual_ss += r * r;
    }
    double loss = residual_ss / count;
    for (int end = 0; end < 2; ++end) {
        const double X = static_cast<double>(end);
        const Jet5& u = forward(sizes, params.theta, X, ws);
        if (cfg.bc == BcKind::SS || end == 1) {
            loss += 0.25 * (u[0] * u[0] + u[2] * u[2]);
        } else {
            loss += 0.25 * (u[0] * u[0] + u[1] * u[1]);
        }
    }
    return loss;
}

unsigned default_pinn_seed() {
    if (const char* env = std::getenv("TAPERBEAM_SEED")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0') return static_cast<unsigned>(v);
        throw std::invalid_argument("TAPERBEAM_SEED must be a nonnegative integer");
    }
    return 42u;
}

LbfgsSettings pinn_training_settings() {
    LbfgsSettings s;
    s.outer_steps = 50;
    s.max_inner_iterations = 50;
    // the training protocol runs as one continuous optimization, so a deep
    // curvature memory pays for itself
    s.history_size = 100;
    return s;
}

SolveResult train_pinn(const BeamConfig& cfg, const LbfgsSettings& settings,
                       unsigned seed, const CollocationGrid& grid,
                       int hidden_layers) {
    const auto start = std::chrono::steady_clock::now();
    grid.validate();
    const std::vector<int> sizes = mlp_layer_sizes(hidden_layers);
    const MlpParams init = MlpParams::init_glorot(sizes, seed);

    Objective objective = [&](const Eigen::VectorXd& theta,
                              Eigen::VectorXd& grad) {
        const MlpParams p = MlpParams::from_theta(sizes, theta, seed);
        return pinn_loss_and_grad(p, cfg, grid, grad);
    };

    const LbfgsResult opt = lbfgs_minimize(objective, init.theta, settings);

    SolveResult result;
    result.method = SolveMethod::Pinn;
    result.weights.assign(opt.x.data(), opt.x.data() + opt.x.size());
    result.final_loss =
        pinn_loss(MlpParams::from_theta(sizes, opt.x, seed), cfg, grid);
    result.trace = opt.trace;
    result.line_search_failed = opt.line_search_failed;
    result.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return result;
}

double pinn_deflection(const MlpParams& params, double X) {
    return 100.0 * mlp_forward_jet(params, X)[0];
}

}  // namespace taperbeam
