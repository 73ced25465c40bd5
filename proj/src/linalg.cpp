#include "taperbeam/linalg.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace taperbeam {

LeastSquaresResult solve_least_squares(const Eigen::MatrixXd& A,
                                       const Eigen::VectorXd& b) {
    if (A.rows() < A.cols()) {
        throw std::invalid_argument(
            "least squares expects at least as many rows as columns");
    }
    if (A.rows() != b.size()) {
        throw std::invalid_argument("matrix and right-hand side sizes differ");
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    LeastSquaresResult out;
    out.x = cod.solve(b);
    out.residual = A * out.x - b;
    out.rank = static_cast<int>(cod.rank());
    return out;
}

namespace {

struct ProbeResult {
    double f;
    double slope;  // gradient dotted with the search direction
};

class LineProbe {
  public:
    LineProbe(const Objective& obj, const Eigen::VectorXd& x,
              const Eigen::VectorXd& d)
        : obj_(obj), x_(x), d_(d), g_(x.size()) {}

    ProbeResult at(double alpha) {
        xt_ = x_ + alpha * d_;
        const double f = obj_(xt_, g_);
        return ProbeResult{f, g_.dot(d_)};
    }

    const Eigen::VectorXd& last_point() const { return xt_; }
    const Eigen::VectorXd& last_grad() const { return g_; }

  private:
    const Objective& obj_;
    const Eigen::VectorXd& x_;
    const Eigen::VectorXd& d_;
    Eigen::VectorXd xt_;
    Eigen::VectorXd g_;
};

// Cubic minimizer of an interpolant through (a, fa, da) and (b, fb, db).
// Falls back to the midpoint when the formula degenerates.
double cubic_min(double a, double fa, double da, double b, double fb,
                 double db) {
    const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
    const double disc = d1 * d1 - da * db;
    if (disc < 0.0 || !std::isfinite(disc)) return 0.5 * (a + b);
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double t = b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
    if (!std::isfinite(t)) return 0.5 * (a + b);
    return t;
}

struct WolfeOutcome {
    double alpha = 0.0;
    double f = 0.0;
    bool ok = false;
};

// Strong-Wolfe line search, bracketing phase plus zoom. On success the
// probe's last evaluation holds the accepted point and gradient.
WolfeOutcome wolfe_search(LineProbe& probe, double f0, double slope0,
                          double alpha_init, double c1, double c2) {
    WolfeOutcome out;
    if (!(slope0 < 0.0)) return out;  // not a descent direction

    const int kMaxBracket = 20;
    const int kMaxZoom = 40;
    const double alpha_max = 1e10;

    double a_prev = 0.0, f_prev = f0, d_prev = slope0;
    double a = alpha_init;

    double lo = 0.0, f_lo = 0.0, d_lo = 0.0;
    double hi = 0.0, f_hi = 0.0, d_hi = 0.0;
    bool bracketed = false;

    for (int i = 0; i < kMaxBracket; ++i) {
        ProbeResult p = probe.at(a);
        if (!std::isfinite(p.f)) {
            // step into bad territory: shrink toward the last good point
            a = 0.5 * (a_prev + a);
            continue;
        }
        if (p.f > f0 + c1 * a * slope0 || (i > 0 && p.f >= f_prev)) {
            lo = a_prev; f_lo = f_prev; d_lo = d_prev;
            hi = a; f_hi = p.f; d_hi = p.slope;
            bracketed = true;
            break;
        }
        if (std::abs(p.slope) <= -c2 * slope0) {
            out.alpha = a;
            out.f = p.f;
            out.ok = true;
            return out;
        }
        if (p.slope >= 0.0) {
            lo = a; f_lo = p.f; d_lo = p.slope;
            hi = a_prev; f_hi = f_prev; d_hi = d_prev;
            bracketed = true;
            break;
        }
        a_prev = a; f_prev = p.f; d_prev = p.slope;
        a = std::min(2.0 * a, alpha_max);
        if (a_prev >= alpha_max) return out;
    }
    if (!bracketed) return out;

    for (int j = 0; j < kMaxZoom; ++j) {
        const double span = std::abs(hi - lo);
        if (span < 1e-18 * std::max(1.0, std::abs(lo))) break;
        double aj = cubic_min(lo, f_lo, d_lo, hi, f_hi, d_hi);
        const double left = std::min(lo, hi), right = std::max(lo, hi);
        const double margin = 0.1 * (right - left);
        if (!(aj > left + margin) || !(aj < right - margin)) {
            aj = 0.5 * (left + right);
        }
        ProbeResult p = probe.at(aj);
        if (!std::isfinite(p.f) || p.f > f0 + c1 * aj * slope0 || p.f >= f_lo) {
            hi = aj; f_hi = p.f; d_hi = p.slope;
        } else {
            if (std::abs(p.slope) <= -c2 * slope0) {
                out.alpha = aj;
                out.f = p.f;
                out.ok = true;
                return out;
            }
            if (p.slope * (hi - lo) >= 0.0) {
                hi = lo; f_hi = f_lo; d_hi = d_lo;
            }
            lo = aj; f_lo = p.f; d_lo = p.slope;
        }
    }
    // Zoom collapsed without meeting the curvature condition. Accept the
    // best Armijo point if it is a real decrease, otherwise report failure.
    if (lo > 0.0 && f_lo < f0) {
        ProbeResult p = probe.at(lo);
        out.alpha = lo;
        out.f = p.f;
        out.ok = true;
    }
    return out;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& f_and_grad,
                           const Eigen::VectorXd& x0,
                           const LbfgsSettings& settings) {
    if (!(settings.wolfe_c1 > 0.0 && settings.wolfe_c1 < settings.wolfe_c2 &&
          settings.wolfe_c2 < 1.0)) {
        throw std::invalid_argument("need 0 < wolfe_c1 < wolfe_c2 < 1");
    }
    if (settings.history_size < 1) {
        throw std::invalid_argument("history_size must be >= 1");
    }
    if (settings.outer_steps < 1 || settings.max_inner_iterations < 1) {
        throw std::invalid_argument("step counts must be >= 1");
    }

    const auto n = x0.size();
    Eigen::VectorXd x = x0;
    Eigen::VectorXd g(n);
    double f = f_and_grad(x, g);

    LbfgsResult result;
    result.x = x;
    result.loss = f;

    struct Pair {
        Eigen::VectorXd s;
        Eigen::VectorXd y;
        double rho;
    };
    std::deque<Pair> memory;  // persists across outer steps

    Eigen::VectorXd q(n), r(n), d(n);
    std::vector<double> alpha_buf;

    bool done = false;
    bool first_step = true;

    for (int outer = 0; outer < settings.outer_steps && !done; ++outer) {
        for (int inner = 0; inner < settings.max_inner_iterations; ++inner) {
            if (g.lpNorm<Eigen::Infinity>() <= settings.gradient_tolerance) {
                done = true;
                break;
            }

            // two-loop recursion
            q = g;
            alpha_buf.assign(memory.size(), 0.0);
            for (int i = static_cast<int>(memory.size()) - 1; i >= 0; --i) {
                alpha_buf[i] = memory[i].rho * memory[i].s.dot(q);
                q -= alpha_buf[i] * memory[i].y;
            }
            if (!memory.empty()) {
                const Pair& last = memory.back();
                const double gamma = last.s.dot(last.y) / last.y.squaredNorm();
                r = gamma * q;
            } else {
                r = q;
            }
            for (size_t i = 0; i < memory.size(); ++i) {
                const double beta = memory[i].rho * memory[i].y.dot(r);
                r += (alpha_buf[i] - beta) * memory[i].s;
            }
            d = -r;

            double slope = d.dot(g);
            if (!(slope < 0.0)) {
                // curvature memory produced a non-descent direction; fall
                // back to steepest descent and drop the stale pairs
                memory.clear();
                d = -g;
                slope = d.dot(g);
            }

            const double alpha_init =
                first_step ? std::min(1.0, 1.0 / g.lpNorm<1>()) : 1.0;
            LineProbe probe(f_and_grad, x, d);
            WolfeOutcome ls = wolfe_search(probe, f, slope, alpha_init,
                                           settings.wolfe_c1, settings.wolfe_c2);
            if (!ls.ok) {
                result.line_search_failed = true;
                done = true;
                break;
            }

            if (settings.iteration_observer) settings.iteration_observer(d, g);

            Eigen::VectorXd step = ls.alpha * d;
            Eigen::VectorXd y = probe.last_grad() - g;
            x += step;
            f = ls.f;
            g = probe.last_grad();
            ++result.iterations;
            first_step = false;

            if (f < result.loss) {
                result.loss = f;
                result.x = x;
            }

            const double sy = step.dot(y);
            if (sy > 1e-10 * step.norm() * y.norm()) {
                memory.push_back(Pair{std::move(step), std::move(y), 1.0 / sy});
                while (static_cast<int>(memory.size()) > settings.history_size) {
                    memory.pop_front();
                }
            }
        }
        result.trace.push_back(result.loss);
    }
    return result;
}

}  // namespace taperbeam
