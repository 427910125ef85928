#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "types.hpp"

namespace phishkit {

struct MlpGradients {
    std::vector<double> W1, b1, W2;
    double b2 = 0.0;
};

// Mean binary cross-entropy over the batch plus 0.5 * alpha * ||W||^2 / batch
// (weights only, biases unpenalized), with the analytic gradients of that
// exact objective. Training consumes this; the finite-difference checks
// differentiate the returned loss value independently.
inline double mlp_loss_and_gradients(const MlpModel& m,
                                     const std::vector<std::vector<double>>& X,
                                     const std::vector<int>& y, double alpha,
                                     MlpGradients* grads = nullptr) {
    const std::size_t n = X.size();
    const std::size_t in = static_cast<std::size_t>(m.in_dim);
    const std::size_t hid = static_cast<std::size_t>(m.hidden);
    const double inv_n = 1.0 / static_cast<double>(n);

    if (grads) {
        grads->W1.assign(hid * in, 0.0);
        grads->b1.assign(hid, 0.0);
        grads->W2.assign(hid, 0.0);
        grads->b2 = 0.0;
    }

    double loss = 0.0;
    std::vector<double> a1(hid);
    for (std::size_t s = 0; s < n; ++s) {
        const auto& x = X[s];
        double z2 = m.b2;
        for (std::size_t h = 0; h < hid; ++h) {
            double z1 = m.b1[h];
            const double* row = &m.W1[h * in];
            for (std::size_t i = 0; i < in; ++i) z1 += row[i] * x[i];
            a1[h] = z1 > 0.0 ? z1 : 0.0;
            z2 += m.W2[h] * a1[h];
        }
        const double p = detail::sigmoid(z2);
        const double target = static_cast<double>(y[s]);
        const double pc = std::clamp(p, 1e-12, 1.0 - 1e-12);
        loss += -(target * std::log(pc) + (1.0 - target) * std::log(1.0 - pc)) * inv_n;

        if (grads) {
            const double dz2 = (p - target) * inv_n;
            grads->b2 += dz2;
            for (std::size_t h = 0; h < hid; ++h) {
                grads->W2[h] += dz2 * a1[h];
                if (a1[h] > 0.0) {
                    const double dz1 = dz2 * m.W2[h];
                    grads->b1[h] += dz1;
                    double* grow = &grads->W1[h * in];
                    for (std::size_t i = 0; i < in; ++i) grow[i] += dz1 * x[i];
                }
            }
        }
    }

    double penalty = 0.0;
    for (const double w : m.W1) penalty += w * w;
    for (const double w : m.W2) penalty += w * w;
    loss += 0.5 * alpha * penalty * inv_n;
    if (grads) {
        for (std::size_t i = 0; i < grads->W1.size(); ++i) grads->W1[i] += alpha * m.W1[i] * inv_n;
        for (std::size_t i = 0; i < grads->W2.size(); ++i) grads->W2[i] += alpha * m.W2[i] * inv_n;
    }
    return loss;
}

// Weights start from a seeded Glorot-uniform draw; a zero start is refused
// because identical hidden units would receive identical gradients and the
// layer could never de-symmetrize.
inline MlpModel init_mlp(std::size_t in_dim, int hidden, std::uint64_t seed) {
    if (hidden < 1) throw std::invalid_argument("mlp hidden size must be >= 1");
    MlpModel m;
    m.in_dim = static_cast<int>(in_dim);
    m.hidden = hidden;
    std::mt19937_64 rng(seed);
    const double limit1 = std::sqrt(6.0 / static_cast<double>(in_dim + static_cast<std::size_t>(hidden)));
    const double limit2 = std::sqrt(6.0 / static_cast<double>(hidden + 1));
    std::uniform_real_distribution<double> u1(-limit1, limit1), u2(-limit2, limit2);
    m.W1.resize(static_cast<std::size_t>(hidden) * in_dim);
    for (auto& w : m.W1) w = u1(rng);
    m.b1.assign(static_cast<std::size_t>(hidden), 0.0);
    m.W2.resize(static_cast<std::size_t>(hidden));
    for (auto& w : m.W2) w = u2(rng);
    m.b2 = 0.0;
    return m;
}

namespace detail {

struct AdamState {
    std::vector<double> m, v;
    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grad, double lr, long t) {
        constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
        const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
            params[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        }
    }
};

}  // namespace detail

// One hidden ReLU layer, sigmoid output, Adam over shuffled mini-batches,
// early stop when the full-data loss stops improving.
inline TrainedModel train_mlp(const std::vector<FeatureVector>& X, const std::vector<int>& y,
                              const TrainConfig& cfg) {
    detail::check_training_input(X, y, true);
    const auto rows = detail::densify(X);
    const std::size_t n = rows.size();

    MlpModel m = init_mlp(rows[0].size(), cfg.mlp_hidden, cfg.seed);
    detail::AdamState adam_W1(m.W1.size()), adam_b1(m.b1.size()), adam_W2(m.W2.size());
    double adam_b2_m = 0.0, adam_b2_v = 0.0;

    std::mt19937_64 rng(cfg.seed ^ 0xda3e39cb94b95bdbull);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    const std::size_t batch_size =
        std::min<std::size_t>(n, static_cast<std::size_t>(std::max(cfg.mlp_batch, 1)));
    double best_loss = std::numeric_limits<double>::infinity();
    int stale = 0;
    long t = 0;
    MlpGradients g;

    for (int epoch = 0; epoch < cfg.mlp_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < n; start += batch_size) {
            const std::size_t stop = std::min(n, start + batch_size);
            std::vector<std::vector<double>> bx;
            std::vector<int> by;
            bx.reserve(stop - start);
            by.reserve(stop - start);
            for (std::size_t k = start; k < stop; ++k) {
                bx.push_back(rows[order[k]]);
                by.push_back(y[order[k]]);
            }
            mlp_loss_and_gradients(m, bx, by, cfg.mlp_alpha, &g);
            ++t;
            adam_W1.step(m.W1, g.W1, cfg.mlp_learning_rate, t);
            adam_b1.step(m.b1, g.b1, cfg.mlp_learning_rate, t);
            adam_W2.step(m.W2, g.W2, cfg.mlp_learning_rate, t);
            {
                constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
                adam_b2_m = beta1 * adam_b2_m + (1.0 - beta1) * g.b2;
                adam_b2_v = beta2 * adam_b2_v + (1.0 - beta2) * g.b2 * g.b2;
                const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
                const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
                m.b2 -= cfg.mlp_learning_rate * (adam_b2_m / c1) / (std::sqrt(adam_b2_v / c2) + eps);
            }
        }
        const double loss = mlp_loss_and_gradients(m, rows, y, cfg.mlp_alpha, nullptr);
        if (!std::isfinite(loss)) throw std::runtime_error("mlp: training diverged (loss is not finite)");
        if (loss < best_loss - cfg.mlp_tol) {
            best_loss = loss;
            stale = 0;
        } else if (++stale >= cfg.mlp_patience) {
            break;
        }
    }

    TrainedModel out;
    out.impl = std::move(m);
    out.feature_dim = rows[0].size();
    return out;
}

}  // namespace phishkit
