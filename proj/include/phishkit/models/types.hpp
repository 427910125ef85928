#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "../features.hpp"

namespace phishkit {

enum class ModelVariant { logreg, random_forest, svm, mlp, knn };

inline std::string to_string(ModelVariant v) {
    switch (v) {
        case ModelVariant::logreg: return "logreg";
        case ModelVariant::random_forest: return "random_forest";
        case ModelVariant::svm: return "svm";
        case ModelVariant::mlp: return "mlp";
        case ModelVariant::knn: return "knn";
    }
    return "logreg";
}

inline ModelVariant model_variant_from_string(const std::string& s) {
    if (s == "logreg") return ModelVariant::logreg;
    if (s == "random_forest") return ModelVariant::random_forest;
    if (s == "svm") return ModelVariant::svm;
    if (s == "mlp") return ModelVariant::mlp;
    if (s == "knn") return ModelVariant::knn;
    throw std::invalid_argument("unknown model variant: " + s);
}

enum class SvmKernel { rbf, linear };
enum class RfMaxFeatures { sqrt_features, all_features };
enum class KnnWeighting { uniform, inverse_distance };

// Hyperparameters for every variant; each trainer reads its own fields.
struct TrainConfig {
    std::uint64_t seed = 0;

    // logistic regression: full-batch gradient descent on cross-entropy +
    // L2 with inverse strength C (bias unpenalized)
    double lr_learning_rate = 0.5;
    int lr_epochs = 2000;
    double lr_C = 1.0;
    double lr_tol = 1e-7;

    // random forest
    int rf_trees = 100;
    bool rf_bootstrap = true;
    RfMaxFeatures rf_max_features = RfMaxFeatures::sqrt_features;
    int rf_min_samples_split = 2;
    int rf_min_samples_leaf = 1;
    int rf_max_depth = -1;  // unlimited

    // svm (SMO dual)
    double svm_C = 10.0;
    SvmKernel svm_kernel = SvmKernel::rbf;
    double svm_gamma = -1.0;  // <= 0 means "scale": 1/(dim * mean feature variance)
    double svm_tol = 1e-3;
    std::uint64_t svm_max_iterations = 200000;

    // mlp: one hidden ReLU layer, sigmoid output, Adam
    int mlp_hidden = 100;
    double mlp_alpha = 1e-4;
    double mlp_learning_rate = 1e-3;
    int mlp_epochs = 300;
    int mlp_batch = 32;
    int mlp_patience = 12;
    double mlp_tol = 1e-6;

    // knn
    int knn_k = 3;
    KnnWeighting knn_weights = KnnWeighting::inverse_distance;
};

namespace detail {

inline double sigmoid(double z) {
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace detail

struct LogRegModel {
    std::vector<double> w;
    double b = 0.0;

    double decision(const std::vector<double>& x) const { return detail::dot(w, x) + b; }
    double proba(const std::vector<double>& x) const { return detail::sigmoid(decision(x)); }
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    int label = 0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    int predict(const std::vector<double>& x) const {
        int i = 0;
        while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
            const auto& n = nodes[static_cast<std::size_t>(i)];
            i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
        }
        return nodes[static_cast<std::size_t>(i)].label;
    }
};

struct RandomForestModel {
    std::vector<DecisionTree> trees;

    // fraction of trees voting phishing
    double proba(const std::vector<double>& x) const {
        std::uint64_t ones = 0;
        for (const auto& t : trees) ones += static_cast<std::uint64_t>(t.predict(x));
        return static_cast<double>(ones) / static_cast<double>(trees.size());
    }
};

inline double kernel_value(SvmKernel kernel, double gamma, const std::vector<double>& a,
                           const std::vector<double>& b) {
    if (kernel == SvmKernel::linear) return detail::dot(a, b);
    return std::exp(-gamma * detail::squared_distance(a, b));
}

struct SvmModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> alpha_y;  // alpha_i * y_i per support vector
    double b = 0.0;
    SvmKernel kernel = SvmKernel::rbf;
    double gamma = 1.0;
    double C = 1.0;

    double decision(const std::vector<double>& x) const {
        double f = b;
        for (std::size_t i = 0; i < support_vectors.size(); ++i)
            f += alpha_y[i] * kernel_value(kernel, gamma, support_vectors[i], x);
        return f;
    }

    // monotone score surrogate; no probability calibration
    double proba(const std::vector<double>& x) const { return detail::sigmoid(decision(x)); }
};

struct MlpModel {
    int in_dim = 0;
    int hidden = 0;
    std::vector<double> W1;  // hidden x in_dim, row-major
    std::vector<double> b1;  // hidden
    std::vector<double> W2;  // hidden
    double b2 = 0.0;

    double logit(const std::vector<double>& x) const {
        double z2 = b2;
        for (int h = 0; h < hidden; ++h) {
            double z1 = b1[static_cast<std::size_t>(h)];
            const double* row = &W1[static_cast<std::size_t>(h) * static_cast<std::size_t>(in_dim)];
            for (int i = 0; i < in_dim; ++i) z1 += row[i] * x[static_cast<std::size_t>(i)];
            if (z1 > 0.0) z2 += W2[static_cast<std::size_t>(h)] * z1;
        }
        return z2;
    }

    double proba(const std::vector<double>& x) const { return detail::sigmoid(logit(x)); }
};

struct KnnModel {
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    int k = 3;
    KnnWeighting weights = KnnWeighting::inverse_distance;

    // weighted phishing vote fraction over the k nearest neighbors; an exact
    // match short-circuits in distance mode
    double proba(const std::vector<double>& x) const {
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(X.size());
        for (std::size_t i = 0; i < X.size(); ++i)
            dist.emplace_back(std::sqrt(detail::squared_distance(X[i], x)), i);
        std::sort(dist.begin(), dist.end());
        const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), dist.size());

        if (weights == KnnWeighting::inverse_distance && !dist.empty() && dist[0].first == 0.0) {
            std::uint64_t zeros = 0, ones = 0;
            for (const auto& [d, i] : dist) {
                if (d != 0.0) break;
                ++(y[i] == 1 ? ones : zeros);
            }
            return static_cast<double>(ones) / static_cast<double>(zeros + ones);
        }

        double w0 = 0.0, w1 = 0.0;
        for (std::size_t n = 0; n < kk; ++n) {
            const auto& [d, i] = dist[n];
            const double w =
                weights == KnnWeighting::uniform ? 1.0 : 1.0 / std::max(d, 1e-12);
            (y[i] == 1 ? w1 : w0) += w;
        }
        return w1 / (w0 + w1);
    }
};

struct TrainedModel {
    std::variant<LogRegModel, RandomForestModel, SvmModel, MlpModel, KnnModel> impl;
    std::size_t feature_dim = 0;
    double threshold = 0.5;

    ModelVariant variant() const {
        return static_cast<ModelVariant>(impl.index());
    }
};

// (p_legitimate, p_phishing); the pair sums to 1.
inline std::pair<double, double> predict_proba(const TrainedModel& m, const FeatureVector& x) {
    if (x.dim() != m.feature_dim)
        throw std::invalid_argument("feature dimension mismatch: expected " +
                                    std::to_string(m.feature_dim) + ", got " +
                                    std::to_string(x.dim()));
    const auto dense = x.to_dense();
    const double p1 = std::visit([&](const auto& model) { return model.proba(dense); }, m.impl);
    return {1.0 - p1, p1};
}

// Sigmoid-scored models classify phishing on p1 >= threshold (the decision
// boundary is inclusive); vote-based models (forest, knn) break exact ties
// toward legitimate, i.e. phishing only on p1 > threshold.
inline int label_from_proba(const TrainedModel& m, double p1) {
    const bool vote_based =
        m.variant() == ModelVariant::random_forest || m.variant() == ModelVariant::knn;
    return (vote_based ? p1 > m.threshold : p1 >= m.threshold) ? 1 : 0;
}

inline int predict_label(const TrainedModel& m, const FeatureVector& x) {
    return label_from_proba(m, predict_proba(m, x).second);
}

namespace detail {

inline std::vector<std::vector<double>> densify(const std::vector<FeatureVector>& X) {
    std::vector<std::vector<double>> rows;
    rows.reserve(X.size());
    for (const auto& v : X) rows.push_back(v.to_dense());
    return rows;
}

inline void check_training_input(const std::vector<FeatureVector>& X, const std::vector<int>& y,
                                 bool require_both_classes) {
    if (X.empty() || X.size() != y.size())
        throw std::invalid_argument("training set empty or labels mismatched");
    for (std::size_t i = 1; i < X.size(); ++i)
        if (X[i].dim() != X[0].dim())
            throw std::invalid_argument("inconsistent feature dimensions in training set");
    if (require_both_classes) {
        const bool has0 = std::find(y.begin(), y.end(), 0) != y.end();
        const bool has1 = std::find(y.begin(), y.end(), 1) != y.end();
        if (!has0 || !has1)
            throw std::invalid_argument("training set contains a single class");
    }
}

}  // namespace detail

}  // namespace phishkit
