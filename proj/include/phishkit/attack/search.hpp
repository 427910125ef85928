#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "../metrics.hpp"
#include "recipe.hpp"
#include "victim.hpp"

namespace phishkit {

struct AttackOutcome {
    AttackStatus status = AttackStatus::failed;
    std::string id;
    std::string original_text;
    std::string perturbed_text;
    std::uint64_t queries = 0;
    double perturbed_word_pct = 0.0;
    std::size_t words_in_input = 0;
    std::vector<std::size_t> modified_positions;

    OutcomeStats stats() const {
        return {status, queries, perturbed_word_pct, words_in_input};
    }
};

namespace detail {

// Probability the search drives down: the true label's for untargeted goals,
// the non-target side for targeted ones.
inline double goal_score(const GoalFunction& goal, const Prediction& p, int true_label) {
    if (goal.targeted) return goal.target_label == 1 ? p.p0 : p.p1;
    return true_label == 1 ? p.p1 : p.p0;
}

}  // namespace detail

// Importance of word i = p_target(original) - p_target(with word i deleted),
// ranked descending with ties toward the lower index. Costs exactly
// |tokens| + 1 queries.
inline std::vector<std::size_t> word_importance_ranking(const VictimPipeline& v,
                                                        const TokenStream& tokens,
                                                        int target_label = 1) {
    const auto pick = [&](const Prediction& p) { return target_label == 1 ? p.p1 : p.p0; };
    const double base = pick(v.score_raw(join_tokens(tokens)));

    std::vector<std::pair<double, std::size_t>> importance;
    importance.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        TokenStream reduced;
        reduced.reserve(tokens.size() - 1);
        for (std::size_t j = 0; j < tokens.size(); ++j)
            if (j != i) reduced.push_back(tokens[j]);
        importance.emplace_back(base - pick(v.score_raw(join_tokens(reduced))), i);
    }
    std::stable_sort(importance.begin(), importance.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    std::vector<std::size_t> order;
    order.reserve(importance.size());
    for (const auto& [score, i] : importance) order.push_back(i);
    return order;
}

namespace detail {

struct SearchState {
    TokenStream original;
    TokenStream current;
    std::set<std::size_t> history;
    double current_score = 0.0;
    std::uint64_t spent = 0;
    std::uint64_t budget = 0;
    int true_label = 1;
};

// Best constraint-passing candidate at one position, scored against the
// victim. Returns nullopt when nothing passes or the budget runs dry.
struct ScoredCandidate {
    TokenStream tokens;
    Prediction pred;
    double score = 0.0;
};

inline std::optional<ScoredCandidate> best_candidate_at(VictimPipeline& v,
                                                        const AttackRecipe& recipe,
                                                        SearchState& st, std::size_t pos,
                                                        std::mt19937_64& rng) {
    const TransformContext ctx = recipe.transform_context();
    std::optional<ScoredCandidate> best;
    std::unordered_set<std::string> tried;
    for (const auto kind : recipe.transformations) {
        for (auto& word : transform_candidates(st.current[pos], kind, rng, ctx)) {
            if (!tried.insert(word).second) continue;
            TokenStream cand = st.current;
            cand[pos] = std::move(word);
            if (!check_constraints(st.original, cand, st.history, recipe, pos)) continue;
            if (st.spent >= st.budget) return best;
            const Prediction pred = v.score_raw(join_tokens(cand));
            ++st.spent;
            const double score = goal_score(recipe.goal, pred, st.true_label);
            if (!best || score < best->score)
                best = ScoredCandidate{std::move(cand), pred, score};
        }
    }
    return best;
}

inline AttackOutcome finish(const SearchState& st, AttackStatus status,
                            const std::string& raw_text) {
    AttackOutcome out;
    out.status = status;
    out.original_text = raw_text;
    out.perturbed_text =
        status == AttackStatus::skipped ? raw_text : join_tokens(st.current);
    out.queries = st.spent;
    out.words_in_input = st.original.size();
    out.modified_positions.assign(st.history.begin(), st.history.end());
    if (!st.original.empty())
        out.perturbed_word_pct =
            100.0 * static_cast<double>(st.history.size()) / static_cast<double>(st.original.size());
    return out;
}

}  // namespace detail

// Greedy search over words in importance order: at each ranked position the
// best constraint-passing candidate is committed when it lowers the goal
// probability; the attack stops the moment the goal label flips. Inputs the
// victim already mislabels are skipped, per-sample query budget exhausts to
// a failure.
inline AttackOutcome greedy_swap_wir(VictimPipeline& v, const std::string& text,
                                     const AttackRecipe& recipe, std::mt19937_64& rng,
                                     std::uint64_t query_budget = 5000, int true_label = 1) {
    detail::SearchState st;
    st.original = attack_tokens(text);
    st.current = st.original;
    st.budget = query_budget;
    st.true_label = true_label;

    if (st.budget == 0) return detail::finish(st, AttackStatus::failed, text);
    const Prediction first = v.score_raw(text);
    ++st.spent;
    if (first.label != true_label) return detail::finish(st, AttackStatus::skipped, text);
    st.current_score = detail::goal_score(recipe.goal, first, true_label);
    if (recipe.goal.reached(first.label, true_label))
        return detail::finish(st, AttackStatus::success, text);

    if (st.budget - st.spent < st.original.size() + 1)
        return detail::finish(st, AttackStatus::failed, text);
    const auto order = word_importance_ranking(v, st.original, true_label);
    st.spent += st.original.size() + 1;

    for (const auto pos : order) {
        auto best = detail::best_candidate_at(v, recipe, st, pos, rng);
        if (!best) {
            if (st.spent >= st.budget) break;
            continue;
        }
        if (best->score < st.current_score) {
            st.current = best->tokens;
            st.history.insert(pos);
            st.current_score = best->score;
            if (recipe.goal.reached(best->pred.label, true_label))
                return detail::finish(st, AttackStatus::success, text);
        }
        if (st.spent >= st.budget) break;
    }
    return detail::finish(st, AttackStatus::failed, text);
}

// Ranking-free greedy search: every iteration scores the best single-word
// candidate over all eligible positions and commits it. More queries than
// the ranked variant, same contract otherwise.
inline AttackOutcome greedy_swap(VictimPipeline& v, const std::string& text,
                                 const AttackRecipe& recipe, std::mt19937_64& rng,
                                 std::uint64_t query_budget = 5000, int true_label = 1) {
    detail::SearchState st;
    st.original = attack_tokens(text);
    st.current = st.original;
    st.budget = query_budget;
    st.true_label = true_label;

    if (st.budget == 0) return detail::finish(st, AttackStatus::failed, text);
    const Prediction first = v.score_raw(text);
    ++st.spent;
    if (first.label != true_label) return detail::finish(st, AttackStatus::skipped, text);
    st.current_score = detail::goal_score(recipe.goal, first, true_label);
    if (recipe.goal.reached(first.label, true_label))
        return detail::finish(st, AttackStatus::success, text);

    while (st.spent < st.budget) {
        std::optional<detail::ScoredCandidate> best;
        std::optional<std::size_t> best_pos;
        for (std::size_t pos = 0; pos < st.current.size(); ++pos) {
            if (st.history.count(pos)) continue;
            auto cand = detail::best_candidate_at(v, recipe, st, pos, rng);
            if (cand && (!best || cand->score < best->score)) {
                best = std::move(cand);
                best_pos = pos;
            }
            if (st.spent >= st.budget) break;
        }
        if (!best || best->score >= st.current_score) break;  // no improving move left
        st.current = best->tokens;
        st.history.insert(*best_pos);
        st.current_score = best->score;
        if (recipe.goal.reached(best->pred.label, true_label))
            return detail::finish(st, AttackStatus::success, text);
    }
    return detail::finish(st, AttackStatus::failed, text);
}

inline AttackOutcome run_search(VictimPipeline& v, const std::string& text,
                                const AttackRecipe& recipe, std::mt19937_64& rng,
                                std::uint64_t query_budget = 5000, int true_label = 1) {
    return recipe.search == SearchMethod::greedy_swap
               ? greedy_swap(v, text, recipe, rng, query_budget, true_label)
               : greedy_swap_wir(v, text, recipe, rng, query_budget, true_label);
}

}  // namespace phishkit
