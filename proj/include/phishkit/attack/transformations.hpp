#pragma once

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "tables.hpp"

namespace phishkit {

enum class Transform {
    insert_char,      // one random char at an interior position
    delete_char,      // one char removed (words of length >= 2 only)
    swap_neighbors,   // adjacent pair exchanged
    substitute_char,  // one char replaced by a random different char
    homoglyph,        // one char replaced via the homoglyph table
    keyboard          // one char replaced by a QWERTY-adjacent key
};

inline std::string to_string(Transform t) {
    switch (t) {
        case Transform::insert_char: return "insert";
        case Transform::delete_char: return "delete";
        case Transform::swap_neighbors: return "swap";
        case Transform::substitute_char: return "substitute";
        case Transform::homoglyph: return "homoglyph";
        case Transform::keyboard: return "keyboard";
    }
    return "insert";
}

inline Transform transform_from_string(const std::string& s) {
    if (s == "insert") return Transform::insert_char;
    if (s == "delete") return Transform::delete_char;
    if (s == "swap") return Transform::swap_neighbors;
    if (s == "substitute") return Transform::substitute_char;
    if (s == "homoglyph") return Transform::homoglyph;
    if (s == "keyboard") return Transform::keyboard;
    throw std::invalid_argument("unknown transformation: " + s);
}

struct TransformContext {
    const HomoglyphTable* homoglyphs = nullptr;
    const KeyboardMap* keyboard = nullptr;
    // alphanumerics survive Level-1 stripping and so genuinely stress the
    // downstream defenses
    std::string charset = "abcdefghijklmnopqrstuvwxyz0123456789";
};

// All single-edit variants of `word` under one transformation kind. Random
// kinds (insert, substitute) draw one character per position from the
// charset; candidates never equal the input and are deduplicated.
inline std::vector<std::string> transform_candidates(const std::string& word, Transform kind,
                                                     std::mt19937_64& rng,
                                                     const TransformContext& ctx) {
    if (word.empty()) throw std::invalid_argument("cannot transform an empty word");
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    const auto emit = [&](std::string cand) {
        if (cand != word && seen.insert(cand).second) out.push_back(std::move(cand));
    };
    std::uniform_int_distribution<std::size_t> pick_char(0, ctx.charset.size() - 1);

    switch (kind) {
        case Transform::insert_char:
            for (std::size_t pos = 1; pos < word.size(); ++pos) {
                std::string cand = word;
                cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(pos),
                            ctx.charset[pick_char(rng)]);
                emit(std::move(cand));
            }
            break;
        case Transform::delete_char:
            if (word.size() >= 2) {
                for (std::size_t pos = 0; pos < word.size(); ++pos) {
                    std::string cand = word;
                    cand.erase(pos, 1);
                    emit(std::move(cand));
                }
            }
            break;
        case Transform::swap_neighbors:
            for (std::size_t pos = 0; pos + 1 < word.size(); ++pos) {
                if (word[pos] == word[pos + 1]) continue;
                std::string cand = word;
                std::swap(cand[pos], cand[pos + 1]);
                emit(std::move(cand));
            }
            break;
        case Transform::substitute_char:
            for (std::size_t pos = 0; pos < word.size(); ++pos) {
                char c = ctx.charset[pick_char(rng)];
                if (c == word[pos]) c = ctx.charset[pick_char(rng)];
                if (c == word[pos]) continue;
                std::string cand = word;
                cand[pos] = c;
                emit(std::move(cand));
            }
            break;
        case Transform::homoglyph: {
            if (!ctx.homoglyphs) break;
            for (std::size_t pos = 0; pos < word.size(); ++pos) {
                const auto* subs = ctx.homoglyphs->candidates(word[pos]);
                if (!subs) continue;
                for (const auto& sub : *subs) {
                    std::string cand = word.substr(0, pos) + sub + word.substr(pos + 1);
                    emit(std::move(cand));
                }
            }
            break;
        }
        case Transform::keyboard: {
            if (!ctx.keyboard) break;
            for (std::size_t pos = 0; pos < word.size(); ++pos) {
                const auto* adj = ctx.keyboard->neighbors(word[pos]);
                if (!adj) continue;
                for (const char c : *adj) {
                    std::string cand = word;
                    cand[pos] = c;
                    emit(std::move(cand));
                }
            }
            break;
        }
    }
    return out;
}

}  // namespace phishkit
