#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "types.hpp"

namespace phishkit {

constexpr int kModelFormatVersion = 1;

struct ModelIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace detail {

inline nlohmann::json tree_to_json(const DecisionTree& t) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : t.nodes)
        nodes.push_back({n.feature, n.threshold, n.left, n.right, n.label});
    return nodes;
}

inline DecisionTree tree_from_json(const nlohmann::json& j) {
    DecisionTree t;
    for (const auto& row : j) {
        TreeNode n;
        n.feature = row.at(0).get<int>();
        n.threshold = row.at(1).get<double>();
        n.left = row.at(2).get<int>();
        n.right = row.at(3).get<int>();
        n.label = row.at(4).get<int>();
        t.nodes.push_back(n);
    }
    if (t.nodes.empty()) throw ModelIoError("decision tree payload has no nodes");
    return t;
}

inline nlohmann::json payload_to_json(const TrainedModel& m) {
    nlohmann::json p;
    switch (m.variant()) {
        case ModelVariant::logreg: {
            const auto& lm = std::get<LogRegModel>(m.impl);
            p["w"] = lm.w;
            p["b"] = lm.b;
            break;
        }
        case ModelVariant::random_forest: {
            const auto& rf = std::get<RandomForestModel>(m.impl);
            nlohmann::json trees = nlohmann::json::array();
            for (const auto& t : rf.trees) trees.push_back(tree_to_json(t));
            p["trees"] = std::move(trees);
            break;
        }
        case ModelVariant::svm: {
            const auto& sm = std::get<SvmModel>(m.impl);
            p["support_vectors"] = sm.support_vectors;
            p["alpha_y"] = sm.alpha_y;
            p["b"] = sm.b;
            p["kernel"] = sm.kernel == SvmKernel::rbf ? "rbf" : "linear";
            p["gamma"] = sm.gamma;
            p["C"] = sm.C;
            break;
        }
        case ModelVariant::mlp: {
            const auto& mm = std::get<MlpModel>(m.impl);
            p["in_dim"] = mm.in_dim;
            p["hidden"] = mm.hidden;
            p["W1"] = mm.W1;
            p["b1"] = mm.b1;
            p["W2"] = mm.W2;
            p["b2"] = mm.b2;
            break;
        }
        case ModelVariant::knn: {
            const auto& km = std::get<KnnModel>(m.impl);
            p["X"] = km.X;
            p["y"] = km.y;
            p["k"] = km.k;
            p["weights"] = km.weights == KnnWeighting::uniform ? "uniform" : "distance";
            break;
        }
    }
    return p;
}

inline void payload_from_json(const std::string& variant, const nlohmann::json& p,
                              TrainedModel& out) {
    if (variant == "logreg") {
        LogRegModel lm;
        lm.w = p.at("w").get<std::vector<double>>();
        lm.b = p.at("b").get<double>();
        out.impl = std::move(lm);
    } else if (variant == "random_forest") {
        RandomForestModel rf;
        for (const auto& t : p.at("trees")) rf.trees.push_back(tree_from_json(t));
        if (rf.trees.empty()) throw ModelIoError("random forest payload has no trees");
        out.impl = std::move(rf);
    } else if (variant == "svm") {
        SvmModel sm;
        sm.support_vectors = p.at("support_vectors").get<std::vector<std::vector<double>>>();
        sm.alpha_y = p.at("alpha_y").get<std::vector<double>>();
        sm.b = p.at("b").get<double>();
        sm.kernel = p.at("kernel").get<std::string>() == "rbf" ? SvmKernel::rbf : SvmKernel::linear;
        sm.gamma = p.at("gamma").get<double>();
        sm.C = p.at("C").get<double>();
        out.impl = std::move(sm);
    } else if (variant == "mlp") {
        MlpModel mm;
        mm.in_dim = p.at("in_dim").get<int>();
        mm.hidden = p.at("hidden").get<int>();
        mm.W1 = p.at("W1").get<std::vector<double>>();
        mm.b1 = p.at("b1").get<std::vector<double>>();
        mm.W2 = p.at("W2").get<std::vector<double>>();
        mm.b2 = p.at("b2").get<double>();
        out.impl = std::move(mm);
    } else if (variant == "knn") {
        KnnModel km;
        km.X = p.at("X").get<std::vector<std::vector<double>>>();
        km.y = p.at("y").get<std::vector<int>>();
        km.k = p.at("k").get<int>();
        km.weights = p.at("weights").get<std::string>() == "uniform"
                         ? KnnWeighting::uniform
                         : KnnWeighting::inverse_distance;
        out.impl = std::move(km);
    } else {
        throw ModelIoError("unknown model variant in file: " + variant);
    }
}

}  // namespace detail

inline nlohmann::json model_to_json(const TrainedModel& m,
                                    const nlohmann::json& hyperparams = nlohmann::json::object()) {
    const nlohmann::json payload = detail::payload_to_json(m);
    nlohmann::json j;
    j["format_version"] = kModelFormatVersion;
    j["variant"] = to_string(m.variant());
    j["feature_dim"] = m.feature_dim;
    j["threshold"] = m.threshold;
    j["hyperparams"] = hyperparams;
    j["checksum"] = fnv1a_hex(payload.dump());
    j["payload"] = payload;
    return j;
}

inline TrainedModel model_from_json(const nlohmann::json& j) {
    if (!j.contains("format_version") || !j["format_version"].is_number_integer())
        throw ModelIoError("model file has no format_version field");
    const int version = j["format_version"].get<int>();
    if (version != kModelFormatVersion)
        throw ModelIoError("unsupported model format version " + std::to_string(version));
    if (!j.contains("payload") || !j.contains("checksum"))
        throw ModelIoError("model file is missing payload or checksum");
    const std::string checksum = fnv1a_hex(j["payload"].dump());
    if (checksum != j["checksum"].get<std::string>())
        throw ModelIoError("model payload checksum mismatch (corrupt file)");

    TrainedModel m;
    m.feature_dim = j.at("feature_dim").get<std::size_t>();
    m.threshold = j.at("threshold").get<double>();
    detail::payload_from_json(j.at("variant").get<std::string>(), j["payload"], m);
    return m;
}

inline void save_model(const TrainedModel& m, const std::string& path,
                       const nlohmann::json& hyperparams = nlohmann::json::object()) {
    std::ofstream out(path);
    if (!out) throw ModelIoError("cannot write model file: " + path);
    out << model_to_json(m, hyperparams).dump(2) << '\n';
}

inline TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelIoError("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ModelIoError(std::string("corrupt model file (unparseable): ") + e.what());
    }
    return model_from_json(j);
}

}  // namespace phishkit
