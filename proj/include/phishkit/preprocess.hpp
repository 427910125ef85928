#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

// Two-level email text normalization: Level 1 cleans and tokenizes, Level 2
// repairs adversarial noise (concatenated words, misspellings) against a
// frequency lexicon.

namespace phishkit {

using TokenStream = std::vector<std::string>;

enum class Level { level1, level1_and_2 };

struct PlaceholderTokens {
    std::string url = "url";
    std::string email = "email";
    std::string phone = "phone";
};

struct PreprocessConfig {
    Level level = Level::level1;
    int max_edit_distance = 2;
    std::unordered_set<std::string> stopwords;
    PlaceholderTokens placeholders;
};

struct PreprocessStats {
    std::uint64_t url_placeholders = 0;
    std::uint64_t email_placeholders = 0;
    std::uint64_t phone_placeholders = 0;
    std::uint64_t word_splits = 0;
    std::uint64_t corrections = 0;
    std::uint64_t non_ascii_chars = 0;

    PreprocessStats& operator+=(const PreprocessStats& o) {
        url_placeholders += o.url_placeholders;
        email_placeholders += o.email_placeholders;
        phone_placeholders += o.phone_placeholders;
        word_splits += o.word_splits;
        corrections += o.corrections;
        non_ascii_chars += o.non_ascii_chars;
        return *this;
    }
};

inline std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

inline bool is_lower_alpha(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

// Minimum insert/delete/substitute edits between two strings.
inline int levenshtein(std::string_view a, std::string_view b) {
    if (a.size() > b.size()) std::swap(a, b);
    const std::size_t n = a.size(), m = b.size();
    std::vector<int> prev(n + 1), cur(n + 1);
    for (std::size_t i = 0; i <= n; ++i) prev[i] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
        cur[0] = static_cast<int>(j);
        for (std::size_t i = 1; i <= n; ++i) {
            const int sub = prev[i - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[i] = std::min({prev[i] + 1, cur[i - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

// Banded variant: returns limit+1 as soon as the distance provably exceeds
// `limit`. Agrees with levenshtein() whenever the true distance is <= limit.
inline int levenshtein_bounded(std::string_view a, std::string_view b, int limit) {
    if (limit < 0) return 0;
    if (a.size() > b.size()) std::swap(a, b);
    const std::size_t n = a.size(), m = b.size();
    if (m - n > static_cast<std::size_t>(limit)) return limit + 1;
    const int big = limit + 1;
    std::vector<int> prev(n + 1, big), cur(n + 1, big);
    for (std::size_t i = 0; i <= n; ++i)
        prev[i] = static_cast<int>(i) <= limit ? static_cast<int>(i) : big;
    for (std::size_t j = 1; j <= m; ++j) {
        cur[0] = static_cast<int>(j) <= limit ? static_cast<int>(j) : big;
        int row_min = cur[0];
        for (std::size_t i = 1; i <= n; ++i) {
            const int sub = prev[i - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[i] = std::min({std::min(prev[i], cur[i - 1]) + 1, sub});
            if (cur[i] > big) cur[i] = big;
            row_min = std::min(row_min, cur[i]);
        }
        if (row_min > limit) return big;
        std::swap(prev, cur);
    }
    return std::min(prev[n], big);
}

// Word-frequency lexicon backing spelling correction and word segmentation.
// Correction candidates come from a precomputed deletion-neighborhood index:
// two strings within edit distance d share at least one common form obtained
// by deleting at most d characters from each.
class Lexicon {
public:
    Lexicon() = default;

    static Lexicon from_counts(const std::vector<std::pair<std::string, std::uint64_t>>& entries,
                               int index_depth = 2) {
        Lexicon lex;
        lex.index_depth_ = index_depth;
        for (const auto& [word, count] : entries) {
            if (!is_lower_alpha(word))
                throw std::invalid_argument("lexicon word not lowercase alphabetic: " + word);
            lex.counts_[word] += count;
            lex.total_ += count;
        }
        lex.build_ranks();
        lex.build_delete_index();
        return lex;
    }

    // File layout: one "word<TAB>count" per line, descending count.
    static Lexicon from_file(const std::string& path, int index_depth = 2) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open lexicon file: " + path);
        std::vector<std::pair<std::string, std::uint64_t>> entries;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos)
                throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                                         ": expected word<TAB>count");
            const std::string word = line.substr(0, tab);
            std::uint64_t count = 0;
            try {
                count = std::stoull(line.substr(tab + 1));
            } catch (const std::exception&) {
                throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                                         ": bad count field");
            }
            entries.emplace_back(word, count);
        }
        if (entries.empty()) throw std::runtime_error("lexicon file is empty: " + path);
        return from_counts(entries, index_depth);
    }

    bool contains(const std::string& w) const { return counts_.count(w) > 0; }

    std::uint64_t frequency(const std::string& w) const {
        const auto it = counts_.find(w);
        return it == counts_.end() ? 0 : it->second;
    }

    // 1-based rank by descending frequency, ties broken lexicographically.
    std::size_t rank(const std::string& w) const {
        const auto it = ranks_.find(w);
        return it == ranks_.end() ? 0 : it->second;
    }

    std::size_t size() const { return counts_.size(); }
    std::uint64_t total() const { return total_; }
    int index_depth() const { return index_depth_; }

    // All lexicon words possibly within edit distance <= max_edit of token,
    // deterministic rank order. Callers verify with levenshtein().
    std::vector<std::string> correction_candidates(const std::string& token, int max_edit) const {
        std::vector<std::uint32_t> ids;
        if (max_edit <= index_depth_) {
            std::unordered_set<std::string> forms;
            collect_deletes(token, max_edit, forms);
            std::unordered_set<std::uint32_t> seen;
            for (const auto& form : forms) {
                const auto it = deletes_.find(form);
                if (it == deletes_.end()) continue;
                for (std::uint32_t id : it->second)
                    if (seen.insert(id).second) ids.push_back(id);
            }
        } else {
            for (std::uint32_t id = 0; id < words_by_rank_.size(); ++id) {
                const auto& w = words_by_rank_[id];
                const auto diff = w.size() > token.size() ? w.size() - token.size()
                                                          : token.size() - w.size();
                if (diff <= static_cast<std::size_t>(max_edit)) ids.push_back(id);
            }
        }
        std::sort(ids.begin(), ids.end());
        std::vector<std::string> out;
        out.reserve(ids.size());
        for (std::uint32_t id : ids) out.push_back(words_by_rank_[id]);
        return out;
    }

private:
    void build_ranks() {
        words_by_rank_.assign(counts_.size(), {});
        std::size_t i = 0;
        for (const auto& [w, c] : counts_) words_by_rank_[i++] = w;
        std::sort(words_by_rank_.begin(), words_by_rank_.end(),
                  [this](const std::string& a, const std::string& b) {
                      const auto ca = counts_.at(a), cb = counts_.at(b);
                      return ca != cb ? ca > cb : a < b;
                  });
        for (std::size_t r = 0; r < words_by_rank_.size(); ++r)
            ranks_[words_by_rank_[r]] = r + 1;
    }

    static void collect_deletes(const std::string& s, int depth,
                                std::unordered_set<std::string>& out) {
        if (!out.insert(s).second) return;
        if (depth == 0 || s.size() <= 1) return;
        std::string shorter;
        shorter.reserve(s.size() - 1);
        for (std::size_t i = 0; i < s.size(); ++i) {
            shorter.assign(s);
            shorter.erase(i, 1);
            collect_deletes(shorter, depth - 1, out);
        }
    }

    void build_delete_index() {
        for (std::uint32_t id = 0; id < words_by_rank_.size(); ++id) {
            std::unordered_set<std::string> forms;
            collect_deletes(words_by_rank_[id], index_depth_, forms);
            for (const auto& form : forms) deletes_[form].push_back(id);
        }
    }

    std::unordered_map<std::string, std::uint64_t> counts_;
    std::unordered_map<std::string, std::size_t> ranks_;
    std::vector<std::string> words_by_rank_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> deletes_;
    std::uint64_t total_ = 0;
    int index_depth_ = 2;
};

inline std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stopword file: " + path);
    std::unordered_set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) out.insert(line);
    }
    return out;
}

namespace detail {

inline const std::regex& url_regex() {
    static const std::regex re(R"((?:https?|ftp)://[^\s]+|www\.[^\s]+)",
                               std::regex::optimize);
    return re;
}

inline const std::regex& email_regex() {
    static const std::regex re(R"([a-z0-9._%+\-]+@[a-z0-9.\-]+\.[a-z]{2,})",
                               std::regex::optimize);
    return re;
}

// Runs of >= 7 digits with optional single separators.
inline const std::regex& phone_regex() {
    static const std::regex re(R"([0-9](?:[\s().\-]?[0-9]){6,})", std::regex::optimize);
    return re;
}

inline std::string substitute(const std::string& s, const std::regex& re,
                              const std::string& token, std::uint64_t* hits) {
    if (hits) {
        const auto begin = std::sregex_iterator(s.begin(), s.end(), re);
        *hits += static_cast<std::uint64_t>(std::distance(begin, std::sregex_iterator()));
    }
    return std::regex_replace(s, re, " " + token + " ");
}

}  // namespace detail

// Level 1: lowercase, placeholder substitution of URLs/emails/phone numbers,
// removal of every character outside [a-z] and whitespace, tokenization,
// stopword drop. Idempotent.
inline TokenStream normalize_level1(const std::string& text, const PreprocessConfig& cfg,
                                    PreprocessStats* stats = nullptr) {
    std::string s = ascii_lower(text);
    s = detail::substitute(s, detail::url_regex(), cfg.placeholders.url,
                           stats ? &stats->url_placeholders : nullptr);
    s = detail::substitute(s, detail::email_regex(), cfg.placeholders.email,
                           stats ? &stats->email_placeholders : nullptr);
    s = detail::substitute(s, detail::phone_regex(), cfg.placeholders.phone,
                           stats ? &stats->phone_placeholders : nullptr);

    std::string cleaned;
    cleaned.reserve(s.size());
    for (const char c : s) {
        if (c >= 'a' && c <= 'z')
            cleaned.push_back(c);
        else if (std::isspace(static_cast<unsigned char>(c)))
            cleaned.push_back(' ');
        else if (stats && static_cast<unsigned char>(c) >= 0x80)
            ++stats->non_ascii_chars;
        // every other character is deleted in place
    }

    TokenStream out;
    std::istringstream iss(cleaned);
    std::string tok;
    while (iss >> tok)
        if (!cfg.stopwords.count(tok)) out.push_back(tok);
    return out;
}

namespace detail {
inline const std::unordered_set<std::string>& default_placeholder_set() {
    static const std::unordered_set<std::string> s = {"url", "email", "phone"};
    return s;
}
}  // namespace detail

// Returns the in-lexicon word within edit distance <= max_edit with the
// highest frequency (ties: smaller distance, then lexicographic order).
// In-lexicon and placeholder tokens pass through unchanged, as does a token
// with no candidate in range.
inline std::string correct_spelling(const std::string& token, const Lexicon& lex, int max_edit,
                                    const std::unordered_set<std::string>* placeholder_tokens = nullptr) {
    const auto& placeholders =
        placeholder_tokens ? *placeholder_tokens : detail::default_placeholder_set();
    if (placeholders.count(token)) return token;
    if (lex.contains(token)) return token;
    if (max_edit <= 0) return token;

    std::string best;
    std::uint64_t best_freq = 0;
    int best_dist = max_edit + 1;
    for (const auto& cand : lex.correction_candidates(token, max_edit)) {
        const int d = levenshtein_bounded(token, cand, max_edit);
        if (d > max_edit) continue;
        const std::uint64_t f = lex.frequency(cand);
        const bool better = f > best_freq ||
                            (f == best_freq && (d < best_dist || (d == best_dist && cand < best)));
        if (best.empty() || better) {
            best = cand;
            best_freq = f;
            best_dist = d;
        }
    }
    return best.empty() ? token : best;
}

namespace detail {

// Piece costs for the segmentation DP. In-lexicon words cost
// log(rank * log(N+1)), capped at the unknown price so a rare word is never
// worth fragmenting. Unknown pieces pay a per-character unit plus a small
// flat charge: the unit sits below the cost of short dictionary words, so
// the DP cannot pay for carving incidental short words out of an unknown
// span (misspellings must reach the corrector whole), while the flat charge
// makes merged unknown runs strictly cheaper than any fragmentation of them,
// which keeps the optimum unique.
constexpr double kOovUnitCost = 1.8;
constexpr double kOovPieceCost = 0.25;

// a split must beat the unsplit cost by this much; marginal carvings of tiny
// frequent words ("be", "of") off the edge of one misspelling never do
constexpr double kSplitMargin = 1.0;

inline double segment_piece_cost(const std::string& piece, const Lexicon& lex) {
    const double oov = static_cast<double>(piece.size()) * kOovUnitCost + kOovPieceCost;
    const auto r = lex.rank(piece);
    if (r == 0) return oov;
    return std::min(
        std::log(static_cast<double>(r) * std::log(static_cast<double>(lex.size()) + 1.0)), oov);
}

}  // namespace detail

// Minimum-cost split of a concatenated token. Returns {token} when no split
// beats leaving the token whole.
inline std::vector<std::string> segment_word(const std::string& token, const Lexicon& lex) {
    const std::size_t n = token.size();
    if (n <= 1) return {token};

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> best(n + 1, kInf);
    std::vector<std::size_t> back(n + 1, 0);
    best[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double c = best[j] + detail::segment_piece_cost(token.substr(j, i - j), lex);
            if (c < best[i]) {
                best[i] = c;
                back[i] = j;
            }
        }
    }

    const double unsplit = detail::segment_piece_cost(token, lex);
    if (best[n] + detail::kSplitMargin >= unsplit) return {token};

    std::vector<std::string> pieces;
    for (std::size_t i = n; i > 0; i = back[i])
        pieces.push_back(token.substr(back[i], i - back[i]));
    std::reverse(pieces.begin(), pieces.end());
    return pieces;
}

// Full pipeline. Level 1 normalizes; Level 2 then segments out-of-lexicon
// tokens and spell-corrects the remaining unknown pieces. Stopwords uncovered
// by segmentation or correction are dropped.
inline TokenStream preprocess(const std::string& text, const PreprocessConfig& cfg,
                              const Lexicon* lex = nullptr, PreprocessStats* stats = nullptr) {
    TokenStream level1 = normalize_level1(text, cfg, stats);
    if (cfg.level == Level::level1) return level1;
    if (!lex) throw std::invalid_argument("level1_and_2 preprocessing requires a lexicon");

    const std::unordered_set<std::string> placeholders = {
        cfg.placeholders.url, cfg.placeholders.email, cfg.placeholders.phone};

    TokenStream out;
    for (const auto& tok : level1) {
        if (placeholders.count(tok) || lex->contains(tok)) {
            out.push_back(tok);
            continue;
        }
        const auto pieces = segment_word(tok, *lex);
        if (pieces.size() > 1 && stats) ++stats->word_splits;
        for (const auto& piece : pieces) {
            std::string word = piece;
            if (!lex->contains(word)) {
                word = correct_spelling(word, *lex, cfg.max_edit_distance, &placeholders);
                if (word != piece && stats) ++stats->corrections;
            }
            if (cfg.stopwords.count(word)) continue;
            out.push_back(word);
        }
    }
    return out;
}

}  // namespace phishkit
