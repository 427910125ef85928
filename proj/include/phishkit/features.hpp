#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "preprocess.hpp"

namespace phishkit {

// Dense or sparse numeric representation of one document. Sparse entries are
// (index, value) pairs with strictly increasing indices; all values finite.
class FeatureVector {
public:
    FeatureVector() = default;

    static FeatureVector dense(std::vector<double> values) {
        FeatureVector v;
        v.dim_ = values.size();
        v.dense_ = std::move(values);
        for (double x : v.dense_)
            if (!std::isfinite(x)) throw std::invalid_argument("non-finite feature value");
        return v;
    }

    static FeatureVector sparse(std::size_t dim,
                                std::vector<std::pair<std::size_t, double>> entries) {
        FeatureVector v;
        v.dim_ = dim;
        v.sparse_ = true;
        std::size_t prev = 0;
        bool first = true;
        for (const auto& [i, x] : entries) {
            if (i >= dim) throw std::invalid_argument("sparse index out of range");
            if (!first && i <= prev) throw std::invalid_argument("sparse indices not increasing");
            if (!std::isfinite(x)) throw std::invalid_argument("non-finite feature value");
            prev = i;
            first = false;
        }
        v.entries_ = std::move(entries);
        return v;
    }

    std::size_t dim() const { return dim_; }
    bool is_sparse() const { return sparse_; }

    double at(std::size_t i) const {
        if (i >= dim_) throw std::out_of_range("feature index out of range");
        if (!sparse_) return dense_[i];
        const auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                                         [](const auto& e, std::size_t k) { return e.first < k; });
        return it != entries_.end() && it->first == i ? it->second : 0.0;
    }

    std::vector<double> to_dense() const {
        if (!sparse_) return dense_;
        std::vector<double> out(dim_, 0.0);
        for (const auto& [i, x] : entries_) out[i] = x;
        return out;
    }

    const std::vector<std::pair<std::size_t, double>>& entries() const {
        if (!sparse_) throw std::logic_error("entries() called on a dense vector");
        return entries_;
    }

private:
    std::size_t dim_ = 0;
    bool sparse_ = false;
    std::vector<double> dense_;
    std::vector<std::pair<std::size_t, double>> entries_;
};

// Fitted TF-IDF vectorizer over contiguous token n-grams. The vocabulary is
// the top max_features n-grams by total corpus occurrences (ties broken
// lexicographically); columns are assigned in lexicographic n-gram order.
struct TfidfModel {
    std::map<std::string, std::size_t> vocabulary;  // n-gram -> column
    std::vector<double> idf;                        // natural log |E| / df
    int ngram_min = 1;
    int ngram_max = 3;
    std::size_t max_features = 100;
    std::size_t trained_docs = 0;
};

namespace detail {

template <typename Fn>
inline void for_each_ngram(const TokenStream& doc, int nmin, int nmax, Fn&& fn) {
    for (int n = nmin; n <= nmax; ++n) {
        if (n <= 0 || doc.size() < static_cast<std::size_t>(n)) continue;
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= doc.size(); ++i) {
            std::string gram = doc[i];
            for (std::size_t j = 1; j < static_cast<std::size_t>(n); ++j) {
                gram += ' ';
                gram += doc[i + j];
            }
            fn(gram);
        }
    }
}

}  // namespace detail

inline TfidfModel fit_tfidf(const std::vector<TokenStream>& train, int ngram_min = 1,
                            int ngram_max = 3, std::size_t max_features = 100) {
    if (train.empty()) throw std::invalid_argument("cannot fit tf-idf on an empty corpus");
    if (ngram_min < 1 || ngram_max < ngram_min)
        throw std::invalid_argument("invalid ngram range");

    std::unordered_map<std::string, std::uint64_t> totals;
    std::unordered_map<std::string, std::uint64_t> df;
    for (const auto& doc : train) {
        std::unordered_set<std::string> seen;
        detail::for_each_ngram(doc, ngram_min, ngram_max, [&](const std::string& g) {
            ++totals[g];
            if (seen.insert(g).second) ++df[g];
        });
    }

    std::vector<std::pair<std::string, std::uint64_t>> ranked(totals.begin(), totals.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranked.size() > max_features) ranked.resize(max_features);

    TfidfModel m;
    m.ngram_min = ngram_min;
    m.ngram_max = ngram_max;
    m.max_features = max_features;
    m.trained_docs = train.size();
    for (const auto& [gram, count] : ranked) m.vocabulary[gram] = 0;
    std::size_t col = 0;
    for (auto& [gram, index] : m.vocabulary) index = col++;

    m.idf.assign(m.vocabulary.size(), 0.0);
    const double docs = static_cast<double>(train.size());
    for (const auto& [gram, index] : m.vocabulary) {
        const auto d = df.at(gram);  // vocabulary is built from the corpus, so df >= 1
        m.idf[index] = std::log(docs / static_cast<double>(d));
    }
    return m;
}

// TF-IDF(w,e,E) = log(1 + count(w in e)) * idf[w]; out-of-vocabulary n-grams
// are ignored. The same fitted model transforms train and test documents.
inline FeatureVector transform_tfidf(const TokenStream& doc, const TfidfModel& m) {
    std::vector<std::uint64_t> counts(m.vocabulary.size(), 0);
    detail::for_each_ngram(doc, m.ngram_min, m.ngram_max, [&](const std::string& g) {
        const auto it = m.vocabulary.find(g);
        if (it != m.vocabulary.end()) ++counts[it->second];
    });
    std::vector<std::pair<std::size_t, double>> entries;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        const double v = std::log(1.0 + static_cast<double>(counts[i])) * m.idf[i];
        if (v != 0.0) entries.emplace_back(i, v);
    }
    return FeatureVector::sparse(m.vocabulary.size(), std::move(entries));
}

inline nlohmann::json tfidf_to_json(const TfidfModel& m) {
    nlohmann::json j;
    j["vocabulary"] = m.vocabulary;
    j["idf"] = m.idf;
    j["ngram_min"] = m.ngram_min;
    j["ngram_max"] = m.ngram_max;
    j["max_features"] = m.max_features;
    j["trained_docs"] = m.trained_docs;
    return j;
}

inline TfidfModel tfidf_from_json(const nlohmann::json& j) {
    TfidfModel m;
    m.vocabulary = j.at("vocabulary").get<std::map<std::string, std::size_t>>();
    m.idf = j.at("idf").get<std::vector<double>>();
    m.ngram_min = j.at("ngram_min").get<int>();
    m.ngram_max = j.at("ngram_max").get<int>();
    m.max_features = j.at("max_features").get<std::size_t>();
    m.trained_docs = j.at("trained_docs").get<std::size_t>();
    if (m.idf.size() != m.vocabulary.size())
        throw std::runtime_error("tf-idf model: idf length does not match vocabulary");
    return m;
}

inline void write_matrix_csv(std::ostream& out, const std::vector<FeatureVector>& rows) {
    for (const auto& row : rows) {
        const auto dense = row.to_dense();
        for (std::size_t i = 0; i < dense.size(); ++i) {
            if (i) out << ',';
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", dense[i]);
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace phishkit
