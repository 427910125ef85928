#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "types.hpp"

namespace phishkit {

namespace detail {

struct TreeBuilder {
    const std::vector<std::vector<double>>& rows;
    const std::vector<int>& labels;
    const TrainConfig& cfg;
    std::mt19937_64& rng;
    std::vector<TreeNode> nodes;

    static double gini(std::size_t c0, std::size_t c1) {
        const double n = static_cast<double>(c0 + c1);
        if (n == 0.0) return 0.0;
        const double p0 = static_cast<double>(c0) / n;
        const double p1 = static_cast<double>(c1) / n;
        return 1.0 - p0 * p0 - p1 * p1;
    }

    int make_leaf(std::size_t c0, std::size_t c1) {
        TreeNode leaf;
        leaf.label = c1 > c0 ? 1 : 0;  // exact tie resolves to legitimate
        nodes.push_back(leaf);
        return static_cast<int>(nodes.size() - 1);
    }

    int build(std::vector<std::size_t>& idx, int depth) {
        std::size_t c0 = 0, c1 = 0;
        for (const auto i : idx) ++(labels[i] == 1 ? c1 : c0);
        const bool pure = c0 == 0 || c1 == 0;
        const bool too_small = idx.size() < static_cast<std::size_t>(cfg.rf_min_samples_split);
        const bool too_deep = cfg.rf_max_depth >= 0 && depth >= cfg.rf_max_depth;
        if (pure || too_small || too_deep) return make_leaf(c0, c1);

        const std::size_t dim = rows[0].size();
        std::vector<std::size_t> features(dim);
        std::iota(features.begin(), features.end(), 0);
        std::size_t mtry = dim;
        if (cfg.rf_max_features == RfMaxFeatures::sqrt_features) {
            mtry = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::sqrt(static_cast<double>(dim))));
            std::shuffle(features.begin(), features.end(), rng);
        }

        const double parent_impurity = gini(c0, c1) * static_cast<double>(idx.size());
        int best_feature = -1;
        double best_threshold = 0.0, best_score = parent_impurity - 1e-12;

        std::vector<std::pair<double, int>> column(idx.size());
        for (std::size_t fi = 0; fi < mtry; ++fi) {
            const std::size_t f = features[fi];
            for (std::size_t k = 0; k < idx.size(); ++k)
                column[k] = {rows[idx[k]][f], labels[idx[k]]};
            std::sort(column.begin(), column.end());

            std::size_t l0 = 0, l1 = 0;
            for (std::size_t k = 0; k + 1 < column.size(); ++k) {
                ++(column[k].second == 1 ? l1 : l0);
                if (column[k].first == column[k + 1].first) continue;
                const std::size_t left_n = k + 1, right_n = column.size() - left_n;
                if (left_n < static_cast<std::size_t>(cfg.rf_min_samples_leaf) ||
                    right_n < static_cast<std::size_t>(cfg.rf_min_samples_leaf))
                    continue;
                const double score = gini(l0, l1) * static_cast<double>(left_n) +
                                     gini(c0 - l0, c1 - l1) * static_cast<double>(right_n);
                if (score < best_score) {
                    best_score = score;
                    best_feature = static_cast<int>(f);
                    best_threshold = (column[k].first + column[k + 1].first) / 2.0;
                }
            }
        }
        if (best_feature < 0) return make_leaf(c0, c1);

        std::vector<std::size_t> left, right;
        for (const auto i : idx)
            (rows[i][static_cast<std::size_t>(best_feature)] <= best_threshold ? left : right)
                .push_back(i);

        TreeNode node;
        node.feature = best_feature;
        node.threshold = best_threshold;
        nodes.push_back(node);
        const int self = static_cast<int>(nodes.size() - 1);
        nodes[static_cast<std::size_t>(self)].left = build(left, depth + 1);
        nodes[static_cast<std::size_t>(self)].right = build(right, depth + 1);
        return self;
    }
};

}  // namespace detail

inline DecisionTree train_decision_tree(const std::vector<std::vector<double>>& rows,
                                        const std::vector<int>& labels, const TrainConfig& cfg,
                                        std::mt19937_64& rng) {
    detail::TreeBuilder builder{rows, labels, cfg, rng, {}};
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), 0);
    builder.build(idx, 0);  // parent precedes children, so the root is node 0

    DecisionTree tree;
    tree.nodes = std::move(builder.nodes);
    return tree;
}

// Majority vote over d trees, each grown on a bootstrap resample with
// sqrt-of-features split search; votes tie toward legitimate.
inline TrainedModel train_random_forest(const std::vector<FeatureVector>& X,
                                        const std::vector<int>& y, const TrainConfig& cfg) {
    detail::check_training_input(X, y, true);
    if (cfg.rf_trees < 1) throw std::invalid_argument("rf_trees must be >= 1");
    const auto rows = detail::densify(X);

    std::mt19937_64 rng(cfg.seed);
    RandomForestModel forest;
    forest.trees.reserve(static_cast<std::size_t>(cfg.rf_trees));
    std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);

    for (int t = 0; t < cfg.rf_trees; ++t) {
        std::vector<std::vector<double>> sample_rows;
        std::vector<int> sample_labels;
        if (cfg.rf_bootstrap) {
            sample_rows.reserve(rows.size());
            sample_labels.reserve(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const auto j = pick(rng);
                sample_rows.push_back(rows[j]);
                sample_labels.push_back(y[j]);
            }
            forest.trees.push_back(train_decision_tree(sample_rows, sample_labels, cfg, rng));
        } else {
            forest.trees.push_back(train_decision_tree(rows, y, cfg, rng));
        }
    }

    TrainedModel out;
    out.impl = std::move(forest);
    out.feature_dim = rows[0].size();
    return out;
}

}  // namespace phishkit
