#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace phishkit {

// Positive class is phishing (label 1) throughout.
struct ConfusionMatrix {
    std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;
    std::uint64_t total() const { return tp + tn + fp + fn; }
};

inline ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("confusion: label vectors differ in length");
    if (y_true.empty()) throw std::invalid_argument("confusion: empty input");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 1)
            ++(y_pred[i] == 1 ? cm.tp : cm.fn);
        else
            ++(y_pred[i] == 1 ? cm.fp : cm.tn);
    }
    return cm;
}

inline double accuracy(const ConfusionMatrix& cm) {
    return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

// Undefined ratios are reported as null rather than 0 or an exception,
// mirroring the "--" convention of result tables.
inline std::optional<double> precision(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fp == 0) return std::nullopt;
    return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
}

inline std::optional<double> recall(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fn == 0) return std::nullopt;
    return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
}

inline std::optional<double> f1(const ConfusionMatrix& cm) {
    const auto p = precision(cm), r = recall(cm);
    if (!p || !r) return std::nullopt;
    if (*p + *r == 0.0) return 0.0;
    return 2.0 * (*p) * (*r) / (*p + *r);
}

struct RocPoint {
    double fpr = 0.0, tpr = 0.0;
    double threshold = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // fpr nondecreasing, (0,0) .. (1,1)
    double auc = 0.0;
};

// Threshold sweep over distinct scores descending, one point per distinct
// score; AUC by the trapezoidal rule.
inline RocCurve roc(const std::vector<int>& y_true, const std::vector<double>& scores) {
    if (y_true.size() != scores.size())
        throw std::invalid_argument("roc: label/score vectors differ in length");
    std::uint64_t pos = 0, neg = 0;
    for (const int y : y_true) (y == 1 ? pos : neg)++;
    if (pos == 0 || neg == 0)
        throw std::invalid_argument("roc: both classes must be present");

    std::vector<std::size_t> order(y_true.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
    });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
    std::uint64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            (y_true[order[i]] == 1 ? tp : fp)++;
            ++i;
        }
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                                static_cast<double>(tp) / static_cast<double>(pos), s});
    }

    double auc = 0.0;
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        const auto& a = curve.points[k - 1];
        const auto& b = curve.points[k];
        auc += (b.fpr - a.fpr) * (b.tpr + a.tpr) / 2.0;
    }
    curve.auc = auc;
    return curve;
}

inline void roc_to_csv(std::ostream& out, const RocCurve& curve) {
    out << "fpr,tpr,threshold\n";
    char buf[96];
    for (const auto& p : curve.points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", p.fpr, p.tpr, p.threshold);
        out << buf << '\n';
    }
}

// ---------------------------------------------------------------------------
// Adversarial attack metrics. All percentage fields are on a 0..100 scale and
// kept at full precision; rendering rounds to two decimals.

enum class AttackStatus { success, failed, skipped };

inline std::string to_string(AttackStatus s) {
    switch (s) {
        case AttackStatus::success: return "success";
        case AttackStatus::failed: return "failed";
        case AttackStatus::skipped: return "skipped";
    }
    return "failed";
}

struct OutcomeStats {
    AttackStatus status = AttackStatus::failed;
    std::uint64_t queries = 0;
    double perturbed_word_pct = 0.0;  // meaningful for successes
    std::size_t words_in_input = 0;
};

struct PostAttackCounts {
    std::uint64_t correct = 0;
    std::uint64_t incorrect = 0;

    std::optional<double> accuracy_pct() const {
        const auto total = correct + incorrect;
        if (total == 0) return std::nullopt;
        return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
    }
};

struct AttackReport {
    std::uint64_t successful = 0, failed = 0, skipped = 0;
    double original_accuracy_pct = 0.0;               // (successful+failed)/total
    double accuracy_under_attack_pct = 0.0;           // failed/total
    std::optional<double> attack_success_rate_pct;    // successful/(successful+failed)
    std::optional<double> avg_perturbed_word_pct;     // over successful attacks
    double avg_words_per_input = 0.0;                 // over every sampled input
    std::optional<double> avg_queries;                // over attempted (non-skipped)
    std::optional<PostAttackCounts> post_attack;

    std::uint64_t total() const { return successful + failed + skipped; }
};

inline AttackReport attack_report_from_counts(std::uint64_t successful, std::uint64_t failed,
                                              std::uint64_t skipped) {
    AttackReport r;
    r.successful = successful;
    r.failed = failed;
    r.skipped = skipped;
    const auto total = r.total();
    if (total == 0) throw std::invalid_argument("attack report over zero samples");
    r.original_accuracy_pct =
        100.0 * static_cast<double>(successful + failed) / static_cast<double>(total);
    r.accuracy_under_attack_pct =
        100.0 * static_cast<double>(failed) / static_cast<double>(total);
    if (successful + failed > 0)
        r.attack_success_rate_pct = 100.0 * static_cast<double>(successful) /
                                    static_cast<double>(successful + failed);
    return r;
}

inline AttackReport attack_report(const std::vector<OutcomeStats>& outcomes,
                                  std::optional<PostAttackCounts> post = std::nullopt) {
    if (outcomes.empty()) throw std::invalid_argument("attack report over zero samples");
    std::uint64_t s = 0, f = 0, k = 0;
    double pct_sum = 0.0, words_sum = 0.0, query_sum = 0.0;
    std::uint64_t attempted = 0;
    for (const auto& o : outcomes) {
        words_sum += static_cast<double>(o.words_in_input);
        switch (o.status) {
            case AttackStatus::success:
                ++s;
                pct_sum += o.perturbed_word_pct;
                break;
            case AttackStatus::failed: ++f; break;
            case AttackStatus::skipped: ++k; break;
        }
        if (o.status != AttackStatus::skipped) {
            ++attempted;
            query_sum += static_cast<double>(o.queries);
        }
    }
    AttackReport r = attack_report_from_counts(s, f, k);
    if (s > 0) r.avg_perturbed_word_pct = pct_sum / static_cast<double>(s);
    r.avg_words_per_input = words_sum / static_cast<double>(outcomes.size());
    if (attempted > 0) r.avg_queries = query_sum / static_cast<double>(attempted);
    r.post_attack = post;
    return r;
}

namespace detail {
inline nlohmann::json opt_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}
}  // namespace detail

inline nlohmann::json to_json(const AttackReport& r) {
    nlohmann::json j;
    j["successful"] = r.successful;
    j["failed"] = r.failed;
    j["skipped"] = r.skipped;
    j["original_accuracy_pct"] = r.original_accuracy_pct;
    j["accuracy_under_attack_pct"] = r.accuracy_under_attack_pct;
    j["attack_success_rate_pct"] = detail::opt_json(r.attack_success_rate_pct);
    j["avg_perturbed_word_pct"] = detail::opt_json(r.avg_perturbed_word_pct);
    j["avg_words_per_input"] = r.avg_words_per_input;
    j["avg_queries"] = detail::opt_json(r.avg_queries);
    if (r.post_attack) {
        j["post_attack"] = {
            {"correct", r.post_attack->correct},
            {"incorrect", r.post_attack->incorrect},
            {"post_attack_accuracy_pct", detail::opt_json(r.post_attack->accuracy_pct())}};
    } else {
        j["post_attack"] = nullptr;
    }
    return j;
}

inline AttackReport attack_report_from_json(const nlohmann::json& j) {
    AttackReport r = attack_report_from_counts(j.at("successful").get<std::uint64_t>(),
                                               j.at("failed").get<std::uint64_t>(),
                                               j.at("skipped").get<std::uint64_t>());
    if (!j.at("avg_perturbed_word_pct").is_null())
        r.avg_perturbed_word_pct = j["avg_perturbed_word_pct"].get<double>();
    r.avg_words_per_input = j.at("avg_words_per_input").get<double>();
    if (!j.at("avg_queries").is_null()) r.avg_queries = j["avg_queries"].get<double>();
    if (!j.at("post_attack").is_null()) {
        PostAttackCounts pc;
        pc.correct = j["post_attack"].at("correct").get<std::uint64_t>();
        pc.incorrect = j["post_attack"].at("incorrect").get<std::uint64_t>();
        r.post_attack = pc;
    }
    return r;
}

// Two-decimal rendering used by every human-readable table.
inline std::string pct2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string pct2(const std::optional<double>& v) { return v ? pct2(*v) : "--"; }

inline void attack_report_to_csv(std::ostream& out, const AttackReport& r) {
    out << "metric,value\n";
    out << "successful," << r.successful << '\n';
    out << "failed," << r.failed << '\n';
    out << "skipped," << r.skipped << '\n';
    out << "original_accuracy_pct," << pct2(r.original_accuracy_pct) << '\n';
    out << "accuracy_under_attack_pct," << pct2(r.accuracy_under_attack_pct) << '\n';
    out << "attack_success_rate_pct," << pct2(r.attack_success_rate_pct) << '\n';
    out << "avg_perturbed_word_pct," << pct2(r.avg_perturbed_word_pct) << '\n';
    out << "avg_words_per_input," << pct2(r.avg_words_per_input) << '\n';
    out << "avg_queries," << pct2(r.avg_queries) << '\n';
    if (r.post_attack) {
        out << "post_attack_correct," << r.post_attack->correct << '\n';
        out << "post_attack_incorrect," << r.post_attack->incorrect << '\n';
        out << "post_attack_accuracy_pct," << pct2(r.post_attack->accuracy_pct()) << '\n';
    }
}

}  // namespace phishkit
