#pragma once

#include <stdexcept>
#include <vector>

#include "types.hpp"

namespace phishkit {

// Instance store; all work happens at prediction time (Euclidean ranking,
// uniform or inverse-distance voting).
inline TrainedModel train_knn(const std::vector<FeatureVector>& X, const std::vector<int>& y,
                              const TrainConfig& cfg) {
    detail::check_training_input(X, y, false);
    if (cfg.knn_k < 1) throw std::invalid_argument("knn: k must be >= 1");
    if (static_cast<std::size_t>(cfg.knn_k) > X.size())
        throw std::invalid_argument("knn: k exceeds the number of stored samples");

    KnnModel m;
    m.X = detail::densify(X);
    m.y = y;
    m.k = cfg.knn_k;
    m.weights = cfg.knn_weights;

    TrainedModel out;
    out.feature_dim = m.X[0].size();
    out.impl = std::move(m);
    return out;
}

}  // namespace phishkit
