#pragma once

#include <algorithm>
#include <fstream>
#include <random>
#include <thread>
#include <vector>

#include <json.hpp>

#include "../corpus.hpp"
#include "../metrics.hpp"
#include "search.hpp"

namespace phishkit {

struct AttackRunResult {
    AttackReport report;
    std::vector<AttackOutcome> outcomes;
};

// Attacks a deterministic sample of the phishing emails in `targets` (the
// attack phase goes after phishing only) and aggregates the per-sample
// outcomes. Each sample runs with its own rng derived from its row index,
// so results depend on neither sample order nor worker count: with
// workers > 1 the samples are sheared across threads, each thread owning a
// victim copy, and the query counters merge back by summation.
inline AttackRunResult run_attack(const AttackRecipe& recipe, VictimPipeline& v,
                                  const Dataset& targets, double sample_fraction,
                                  std::uint64_t seed, std::uint64_t query_budget = 5000,
                                  int workers = 1) {
    if (sample_fraction <= 0.0 || sample_fraction > 1.0)
        throw std::invalid_argument("sample_fraction must be in (0,1]");

    std::vector<std::size_t> phishing;
    for (std::size_t i = 0; i < targets.emails.size(); ++i)
        if (targets.emails[i].label == 1) phishing.push_back(i);
    if (phishing.empty()) throw std::invalid_argument("no phishing emails to attack");

    std::mt19937_64 sampler(seed);
    std::shuffle(phishing.begin(), phishing.end(), sampler);
    auto n = static_cast<std::size_t>(
        std::llround(sample_fraction * static_cast<double>(phishing.size())));
    n = std::clamp<std::size_t>(n, 1, phishing.size());
    phishing.resize(n);
    std::sort(phishing.begin(), phishing.end());

    AttackRunResult result;
    result.outcomes.assign(n, {});

    const auto attack_one = [&](VictimPipeline& victim, std::size_t slot) {
        const auto idx = phishing[slot];
        const Email& email = targets.emails[idx];
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * (idx + 1)));
        AttackOutcome outcome =
            run_search(victim, email.text(), recipe, rng, query_budget, email.label);
        outcome.id = email.id;
        result.outcomes[slot] = std::move(outcome);
    };

    if (workers <= 1) {
        for (std::size_t slot = 0; slot < n; ++slot) attack_one(v, slot);
    } else {
        const auto count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
        const std::uint64_t base = v.query_count();
        std::vector<VictimPipeline> victims(count, v);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < count; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t slot = w; slot < n; slot += count)
                    attack_one(victims[w], slot);
            });
        for (auto& t : pool) t.join();
        for (const auto& worker_victim : victims)
            v.add_queries(worker_victim.query_count() - base);
    }

    std::vector<OutcomeStats> stats;
    stats.reserve(n);
    for (const auto& o : result.outcomes) stats.push_back(o.stats());
    result.report = attack_report(stats);
    return result;
}

// Pushes perturbed texts back through the victim's configured preprocessing
// and counts how many are classified phishing again.
inline PostAttackCounts recover_and_reclassify(const std::vector<AttackOutcome>& adversarial,
                                               const VictimPipeline& v) {
    PostAttackCounts counts;
    for (const auto& outcome : adversarial) {
        const Prediction pred = v.score(outcome.perturbed_text);
        ++(pred.label == 1 ? counts.correct : counts.incorrect);
    }
    return counts;
}

inline std::vector<AttackOutcome> successful_outcomes(const std::vector<AttackOutcome>& all) {
    std::vector<AttackOutcome> out;
    for (const auto& o : all)
        if (o.status == AttackStatus::success) out.push_back(o);
    return out;
}

inline nlohmann::json outcome_to_json(const AttackOutcome& o) {
    nlohmann::json j;
    j["id"] = o.id;
    j["original"] = o.original_text;
    j["perturbed"] = o.perturbed_text;
    j["status"] = to_string(o.status);
    j["queries"] = o.queries;
    j["modified_positions"] = o.modified_positions;
    return j;
}

inline AttackOutcome outcome_from_json(const nlohmann::json& j) {
    AttackOutcome o;
    o.id = j.at("id").get<std::string>();
    o.original_text = j.at("original").get<std::string>();
    o.perturbed_text = j.at("perturbed").get<std::string>();
    const std::string status = j.at("status").get<std::string>();
    o.status = status == "success" ? AttackStatus::success
               : status == "skipped" ? AttackStatus::skipped
                                     : AttackStatus::failed;
    o.queries = j.at("queries").get<std::uint64_t>();
    o.modified_positions = j.at("modified_positions").get<std::vector<std::size_t>>();
    return o;
}

inline void write_outcomes_jsonl(std::ostream& out, const std::vector<AttackOutcome>& outcomes) {
    for (const auto& o : outcomes) out << outcome_to_json(o).dump() << '\n';
}

inline std::vector<AttackOutcome> read_outcomes_jsonl(std::istream& in) {
    std::vector<AttackOutcome> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        if (j.contains("meta")) continue;
        out.push_back(outcome_from_json(j));
    }
    return out;
}

}  // namespace phishkit
