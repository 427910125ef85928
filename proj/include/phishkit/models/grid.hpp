#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "../corpus.hpp"
#include "../metrics.hpp"
#include "forest.hpp"
#include "knn.hpp"
#include "logreg.hpp"
#include "mlp.hpp"
#include "svm.hpp"

namespace phishkit {

inline TrainedModel train_model(ModelVariant variant, const std::vector<FeatureVector>& X,
                                const std::vector<int>& y, const TrainConfig& cfg) {
    switch (variant) {
        case ModelVariant::logreg: return train_logreg(X, y, cfg);
        case ModelVariant::random_forest: return train_random_forest(X, y, cfg);
        case ModelVariant::svm: return train_svm(X, y, cfg);
        case ModelVariant::mlp: return train_mlp(X, y, cfg);
        case ModelVariant::knn: return train_knn(X, y, cfg);
    }
    throw std::invalid_argument("unknown model variant");
}

using ParamValue = std::variant<double, std::string>;
using ParamGrid = std::map<std::string, std::vector<ParamValue>>;

inline std::string to_string(const ParamValue& v) {
    if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::get<double>(v));
    return buf;
}

// Applies one named hyperparameter to the variant's config slot.
inline void apply_param(TrainConfig& cfg, ModelVariant variant, const std::string& key,
                        const ParamValue& value) {
    const auto num = [&]() -> double {
        if (!std::holds_alternative<double>(value))
            throw std::invalid_argument("hyperparameter '" + key + "' expects a number");
        return std::get<double>(value);
    };
    const auto str = [&]() -> std::string {
        if (!std::holds_alternative<std::string>(value))
            throw std::invalid_argument("hyperparameter '" + key + "' expects a string");
        return std::get<std::string>(value);
    };

    if (key == "C") {
        if (variant == ModelVariant::svm)
            cfg.svm_C = num();
        else
            cfg.lr_C = num();
    } else if (key == "learning_rate") {
        if (variant == ModelVariant::mlp)
            cfg.mlp_learning_rate = num();
        else
            cfg.lr_learning_rate = num();
    } else if (key == "epochs") {
        if (variant == ModelVariant::mlp)
            cfg.mlp_epochs = static_cast<int>(num());
        else
            cfg.lr_epochs = static_cast<int>(num());
    } else if (key == "trees") {
        cfg.rf_trees = static_cast<int>(num());
    } else if (key == "max_features") {
        cfg.rf_max_features =
            str() == "all" ? RfMaxFeatures::all_features : RfMaxFeatures::sqrt_features;
    } else if (key == "min_samples_split") {
        cfg.rf_min_samples_split = static_cast<int>(num());
    } else if (key == "min_samples_leaf") {
        cfg.rf_min_samples_leaf = static_cast<int>(num());
    } else if (key == "bootstrap") {
        cfg.rf_bootstrap = str() == "true";
    } else if (key == "kernel") {
        cfg.svm_kernel = str() == "linear" ? SvmKernel::linear : SvmKernel::rbf;
    } else if (key == "gamma") {
        if (std::holds_alternative<std::string>(value)) {
            if (std::get<std::string>(value) != "scale")
                throw std::invalid_argument("gamma accepts a number or \"scale\"");
            cfg.svm_gamma = -1.0;
        } else {
            cfg.svm_gamma = num();
        }
    } else if (key == "alpha") {
        cfg.mlp_alpha = num();
    } else if (key == "hidden") {
        cfg.mlp_hidden = static_cast<int>(num());
    } else if (key == "batch") {
        cfg.mlp_batch = static_cast<int>(num());
    } else if (key == "k" || key == "n_neighbors") {
        cfg.knn_k = static_cast<int>(num());
    } else if (key == "weights") {
        cfg.knn_weights =
            str() == "uniform" ? KnnWeighting::uniform : KnnWeighting::inverse_distance;
    } else {
        throw std::invalid_argument("unknown hyperparameter: " + key);
    }
}

struct GridCell {
    std::map<std::string, ParamValue> params;
    double mean_f1 = -std::numeric_limits<double>::infinity();
    bool trained_ok = true;
    std::string error;
};

struct GridSearchResult {
    TrainConfig best_config;
    std::map<std::string, ParamValue> best_params;
    std::vector<GridCell> cells;
    TrainedModel best_model;
};

// Exhaustive Cartesian product over the grid; each cell is scored by mean
// validation F1 over stratified folds (an undefined F1 counts as 0, a
// training error scores the cell -inf without failing the search), and the
// best cell is retrained on the full set. Deterministic for a fixed seed.
inline GridSearchResult grid_search_cv(ModelVariant variant, const ParamGrid& grid,
                                       const std::vector<FeatureVector>& X,
                                       const std::vector<int>& y, int folds,
                                       const TrainConfig& base, std::uint64_t seed) {
    if (grid.empty()) throw std::invalid_argument("grid search requires a non-empty grid");
    for (const auto& [key, values] : grid)
        if (values.empty())
            throw std::invalid_argument("grid key '" + key + "' has no candidate values");

    const auto fold_indices = stratified_kfold_labels(y, folds, seed);

    std::vector<std::string> keys;
    for (const auto& [key, values] : grid) keys.push_back(key);

    GridSearchResult result;
    std::vector<std::size_t> cursor(keys.size(), 0);
    bool done = false;
    while (!done) {
        GridCell cell;
        TrainConfig cfg = base;
        for (std::size_t i = 0; i < keys.size(); ++i) {
            const ParamValue& v = grid.at(keys[i])[cursor[i]];
            cell.params[keys[i]] = v;
            apply_param(cfg, variant, keys[i], v);
        }

        double f1_sum = 0.0;
        cell.trained_ok = true;
        for (const auto& fold : fold_indices) {
            std::vector<FeatureVector> tx, vx;
            std::vector<int> ty, vy;
            for (const auto i : fold.train) {
                tx.push_back(X[i]);
                ty.push_back(y[i]);
            }
            for (const auto i : fold.validation) {
                vx.push_back(X[i]);
                vy.push_back(y[i]);
            }
            try {
                const TrainedModel m = train_model(variant, tx, ty, cfg);
                std::vector<int> pred;
                pred.reserve(vx.size());
                for (const auto& v : vx) pred.push_back(predict_label(m, v));
                const auto score = f1(confusion(vy, pred));
                f1_sum += score.value_or(0.0);
            } catch (const std::exception& e) {
                cell.trained_ok = false;
                cell.error = e.what();
                break;
            }
        }
        if (cell.trained_ok)
            cell.mean_f1 = f1_sum / static_cast<double>(fold_indices.size());
        result.cells.push_back(cell);

        for (std::size_t i = keys.size(); i-- > 0;) {
            if (++cursor[i] < grid.at(keys[i]).size()) break;
            cursor[i] = 0;
            if (i == 0) done = true;
        }
    }

    std::size_t best = 0;
    for (std::size_t c = 1; c < result.cells.size(); ++c)
        if (result.cells[c].mean_f1 > result.cells[best].mean_f1) best = c;
    if (!result.cells[best].trained_ok)
        throw std::runtime_error("grid search: every cell failed to train; first error: " +
                                 result.cells[best].error);

    result.best_params = result.cells[best].params;
    result.best_config = base;
    for (const auto& [key, value] : result.best_params)
        apply_param(result.best_config, variant, key, value);
    result.best_model = train_model(variant, X, y, result.best_config);
    return result;
}

}  // namespace phishkit
