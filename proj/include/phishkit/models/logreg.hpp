#pragma once

#include <cmath>
#include <vector>

#include "types.hpp"

namespace phishkit {

// Full-batch gradient descent on mean binary cross-entropy with an L2 term of
// strength 1/C on the weights (never the bias). The objective is convex, so
// the solver choice only affects how fast the shared optimum is reached.
inline TrainedModel train_logreg(const std::vector<FeatureVector>& X, const std::vector<int>& y,
                                 const TrainConfig& cfg) {
    detail::check_training_input(X, y, true);
    const auto rows = detail::densify(X);
    const std::size_t n = rows.size();
    const std::size_t dim = rows[0].size();
    const double inv_n = 1.0 / static_cast<double>(n);
    const double reg = 1.0 / (cfg.lr_C * static_cast<double>(n));

    LogRegModel m;
    m.w.assign(dim, 0.0);

    std::vector<double> grad_w(dim);
    for (int epoch = 0; epoch < cfg.lr_epochs; ++epoch) {
        std::fill(grad_w.begin(), grad_w.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double err = detail::sigmoid(m.decision(rows[i])) - static_cast<double>(y[i]);
            for (std::size_t d = 0; d < dim; ++d) grad_w[d] += err * rows[i][d];
            grad_b += err;
        }
        double norm2 = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            grad_w[d] = grad_w[d] * inv_n + reg * m.w[d];
            norm2 += grad_w[d] * grad_w[d];
        }
        grad_b *= inv_n;
        norm2 += grad_b * grad_b;

        for (std::size_t d = 0; d < dim; ++d) m.w[d] -= cfg.lr_learning_rate * grad_w[d];
        m.b -= cfg.lr_learning_rate * grad_b;

        if (std::sqrt(norm2) < cfg.lr_tol) break;
    }

    TrainedModel out;
    out.impl = std::move(m);
    out.feature_dim = dim;
    return out;
}

}  // namespace phishkit
