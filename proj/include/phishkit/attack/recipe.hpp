#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "../embeddings.hpp"
#include "../preprocess.hpp"
#include "tables.hpp"
#include "transformations.hpp"

namespace phishkit {

enum class SearchMethod { greedy_swap, greedy_swap_wir };

enum class RecipeName { deepwordbug, pruthi, textbugger, custom };

inline std::string to_string(RecipeName n) {
    switch (n) {
        case RecipeName::deepwordbug: return "deepwordbug";
        case RecipeName::pruthi: return "pruthi";
        case RecipeName::textbugger: return "textbugger";
        case RecipeName::custom: return "custom";
    }
    return "custom";
}

inline RecipeName recipe_name_from_string(const std::string& s) {
    if (s == "deepwordbug") return RecipeName::deepwordbug;
    if (s == "pruthi") return RecipeName::pruthi;
    if (s == "textbugger") return RecipeName::textbugger;
    if (s == "custom") return RecipeName::custom;
    throw std::invalid_argument("unknown attack recipe: " + s);
}

// Untargeted: success once the victim leaves the true label. Targeted:
// success once the victim emits the target label.
struct GoalFunction {
    bool targeted = false;
    int target_label = 0;

    bool reached(int predicted, int true_label) const {
        return targeted ? predicted == target_label : predicted != true_label;
    }
};

struct ConstraintSet {
    bool stopword_protect = true;
    bool repeat_protect = true;
    std::optional<int> max_levenshtein;        // between full original and candidate text
    std::optional<int> min_word_length;        // eligibility of the original word
    std::optional<int> max_words_perturbed;
    std::optional<double> min_semantic_cosine; // averaged-embedding document cosine
};

struct AttackRecipe {
    RecipeName name = RecipeName::custom;
    GoalFunction goal;
    ConstraintSet constraints;
    std::vector<Transform> transformations;
    SearchMethod search = SearchMethod::greedy_swap_wir;

    std::shared_ptr<const std::unordered_set<std::string>> stopwords;
    std::shared_ptr<const HomoglyphTable> homoglyphs;
    std::shared_ptr<const KeyboardMap> keyboard;
    std::shared_ptr<const EmbeddingTable> semantic_table;  // for min_semantic_cosine

    TransformContext transform_context() const {
        TransformContext ctx;
        ctx.homoglyphs = homoglyphs.get();
        ctx.keyboard = keyboard.get();
        return ctx;
    }
};

using StopwordSet = std::shared_ptr<const std::unordered_set<std::string>>;

inline AttackRecipe make_deepwordbug(StopwordSet stopwords, bool targeted = false,
                                     int target_label = 0) {
    AttackRecipe r;
    r.name = RecipeName::deepwordbug;
    r.goal = {targeted, target_label};
    r.constraints.max_levenshtein = 30;
    r.transformations = {Transform::insert_char, Transform::delete_char,
                         Transform::swap_neighbors, Transform::substitute_char};
    r.search = SearchMethod::greedy_swap_wir;
    r.stopwords = std::move(stopwords);
    return r;
}

inline AttackRecipe make_pruthi(StopwordSet stopwords, int max_words_perturbed = 3,
                                std::shared_ptr<const KeyboardMap> keyboard = nullptr) {
    AttackRecipe r;
    r.name = RecipeName::pruthi;
    r.goal = {false, 0};
    r.constraints.min_word_length = 4;
    r.constraints.max_words_perturbed = max_words_perturbed;
    r.transformations = {Transform::insert_char, Transform::delete_char,
                         Transform::swap_neighbors, Transform::keyboard};
    r.search = SearchMethod::greedy_swap;
    r.stopwords = std::move(stopwords);
    r.keyboard = keyboard ? std::move(keyboard) : std::make_shared<const KeyboardMap>();
    return r;
}

inline AttackRecipe make_textbugger(StopwordSet stopwords,
                                    std::shared_ptr<const EmbeddingTable> semantic_table,
                                    int target_label = 0, double min_cosine = 0.8) {
    AttackRecipe r;
    r.name = RecipeName::textbugger;
    r.goal = {true, target_label};
    r.constraints.min_semantic_cosine = min_cosine;
    r.transformations = {Transform::insert_char, Transform::delete_char,
                         Transform::swap_neighbors, Transform::substitute_char,
                         Transform::homoglyph};
    r.search = SearchMethod::greedy_swap_wir;
    r.stopwords = std::move(stopwords);
    r.homoglyphs = std::make_shared<const HomoglyphTable>();
    r.semantic_table = std::move(semantic_table);
    return r;
}

inline AttackRecipe make_custom_attack(StopwordSet stopwords) {
    AttackRecipe r;
    r.name = RecipeName::custom;
    r.goal = {false, 0};
    r.constraints.max_levenshtein = 16;
    r.transformations = {Transform::homoglyph, Transform::insert_char, Transform::delete_char,
                         Transform::substitute_char};
    r.search = SearchMethod::greedy_swap_wir;
    r.stopwords = std::move(stopwords);
    r.homoglyphs = std::make_shared<const HomoglyphTable>();
    return r;
}

// Attack-space tokenization: lowercase, split on whitespace. Deliberately
// *not* the Level-1/2 pipeline, which sits downstream of the attack.
inline TokenStream attack_tokens(const std::string& text) {
    TokenStream out;
    std::istringstream iss(ascii_lower(text));
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

inline std::string join_tokens(const TokenStream& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

// Cosine of averaged-embedding document vectors; two zero vectors count as
// identical, one zero vector as orthogonal.
inline double semantic_cosine(const TokenStream& a, const TokenStream& b,
                              const EmbeddingTable& table) {
    const auto va = embed_document(a, table).to_dense();
    const auto vb = embed_document(b, table).to_dense();
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        dot += va[i] * vb[i];
        na += va[i] * va[i];
        nb += vb[i] * vb[i];
    }
    if (na == 0.0 && nb == 0.0) return 1.0;
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// True iff every active constraint admits the candidate. Token lists are
// positionally aligned (transformations preserve word count);
// `changed_position` names the position modified this step when the caller
// knows it, otherwise the diff against the original outside the committed
// history is used.
inline bool check_constraints(const TokenStream& original_tokens,
                              const TokenStream& candidate_tokens,
                              const std::set<std::size_t>& modified_history,
                              const AttackRecipe& recipe,
                              std::optional<std::size_t> changed_position = std::nullopt) {
    if (original_tokens.size() != candidate_tokens.size()) return false;

    std::vector<std::size_t> changed;
    if (changed_position) {
        changed.push_back(*changed_position);
    } else {
        for (std::size_t i = 0; i < original_tokens.size(); ++i)
            if (original_tokens[i] != candidate_tokens[i] && !modified_history.count(i))
                changed.push_back(i);
    }

    const auto& c = recipe.constraints;
    for (const auto pos : changed) {
        if (pos >= original_tokens.size()) return false;
        if (candidate_tokens[pos] == original_tokens[pos] && !modified_history.count(pos))
            continue;
        if (c.repeat_protect && modified_history.count(pos)) return false;
        if (c.stopword_protect && recipe.stopwords && recipe.stopwords->count(original_tokens[pos]))
            return false;
        if (c.min_word_length &&
            original_tokens[pos].size() < static_cast<std::size_t>(*c.min_word_length))
            return false;
    }

    if (c.max_words_perturbed) {
        std::set<std::size_t> all = modified_history;
        for (const auto pos : changed) all.insert(pos);
        if (all.size() > static_cast<std::size_t>(*c.max_words_perturbed)) return false;
    }

    if (c.max_levenshtein) {
        const int limit = *c.max_levenshtein;
        if (levenshtein_bounded(join_tokens(original_tokens), join_tokens(candidate_tokens),
                                limit) > limit)
            return false;
    }

    if (c.min_semantic_cosine) {
        if (!recipe.semantic_table)
            throw std::invalid_argument(
                "recipe has a semantic constraint but no embedding table");
        if (semantic_cosine(original_tokens, candidate_tokens, *recipe.semantic_table) <
            *c.min_semantic_cosine)
            return false;
    }
    return true;
}

// Declarative recipe config mirroring the recipe comparison table: name,
// goal, constraints, transformations, search method.
inline nlohmann::json recipe_to_json(const AttackRecipe& r) {
    nlohmann::json j;
    j["name"] = to_string(r.name);
    j["goal"] = {{"targeted", r.goal.targeted}, {"target_label", r.goal.target_label}};
    nlohmann::json c;
    c["stopword_protect"] = r.constraints.stopword_protect;
    c["repeat_protect"] = r.constraints.repeat_protect;
    c["max_levenshtein"] =
        r.constraints.max_levenshtein ? nlohmann::json(*r.constraints.max_levenshtein) : nullptr;
    c["min_word_length"] =
        r.constraints.min_word_length ? nlohmann::json(*r.constraints.min_word_length) : nullptr;
    c["max_words_perturbed"] = r.constraints.max_words_perturbed
                                   ? nlohmann::json(*r.constraints.max_words_perturbed)
                                   : nullptr;
    c["min_semantic_cosine"] = r.constraints.min_semantic_cosine
                                   ? nlohmann::json(*r.constraints.min_semantic_cosine)
                                   : nullptr;
    j["constraints"] = c;
    nlohmann::json t = nlohmann::json::array();
    for (const auto tr : r.transformations) t.push_back(to_string(tr));
    j["transformations"] = t;
    j["search"] = r.search == SearchMethod::greedy_swap ? "greedy" : "greedy_wir";
    return j;
}

inline AttackRecipe recipe_from_json(const nlohmann::json& j, StopwordSet stopwords,
                                     std::shared_ptr<const EmbeddingTable> semantic_table = nullptr) {
    AttackRecipe r;
    r.name = recipe_name_from_string(j.at("name").get<std::string>());
    if (j.contains("goal")) {
        r.goal.targeted = j["goal"].value("targeted", false);
        r.goal.target_label = j["goal"].value("target_label", 0);
    }
    if (j.contains("constraints")) {
        const auto& c = j["constraints"];
        r.constraints.stopword_protect = c.value("stopword_protect", true);
        r.constraints.repeat_protect = c.value("repeat_protect", true);
        if (c.contains("max_levenshtein") && !c["max_levenshtein"].is_null())
            r.constraints.max_levenshtein = c["max_levenshtein"].get<int>();
        if (c.contains("min_word_length") && !c["min_word_length"].is_null())
            r.constraints.min_word_length = c["min_word_length"].get<int>();
        if (c.contains("max_words_perturbed") && !c["max_words_perturbed"].is_null())
            r.constraints.max_words_perturbed = c["max_words_perturbed"].get<int>();
        if (c.contains("min_semantic_cosine") && !c["min_semantic_cosine"].is_null())
            r.constraints.min_semantic_cosine = c["min_semantic_cosine"].get<double>();
    }
    for (const auto& t : j.at("transformations"))
        r.transformations.push_back(transform_from_string(t.get<std::string>()));
    const std::string search = j.value("search", "greedy_wir");
    r.search = search == "greedy" ? SearchMethod::greedy_swap : SearchMethod::greedy_swap_wir;
    r.stopwords = std::move(stopwords);
    r.homoglyphs = std::make_shared<const HomoglyphTable>();
    r.keyboard = std::make_shared<const KeyboardMap>();
    r.semantic_table = std::move(semantic_table);
    return r;
}

}  // namespace phishkit
