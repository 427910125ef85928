#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "features.hpp"
#include "preprocess.hpp"

namespace phishkit {

enum class EmbeddingSource { word2vec_trained, glove_file };

struct EmbeddingTable {
    int dim = 0;
    std::unordered_map<std::string, std::vector<float>> vectors;
    EmbeddingSource source = EmbeddingSource::word2vec_trained;
};

struct Word2VecParams {
    int dim = 100;
    int window = 5;
    int min_count = 1;
    int negative_samples = 5;
    int epochs = 5;
    float initial_learning_rate = 0.025f;
    std::uint64_t seed = 1;
    // workers > 1 trains lock-free across threads; results are then not
    // reproducible run to run. Tests and experiment configs use 1.
    int workers = 1;
};

namespace detail {

struct W2VCorpus {
    std::vector<std::string> vocab;             // frequency order, ties lexicographic
    std::vector<std::uint64_t> counts;          // per vocab id
    std::vector<std::vector<int>> docs;         // token ids, OOV removed
    std::vector<double> neg_cdf;                // cumulative unigram^0.75
    std::uint64_t corpus_tokens = 0;
};

inline W2VCorpus build_w2v_corpus(const std::vector<TokenStream>& docs, int min_count) {
    std::unordered_map<std::string, std::uint64_t> freq;
    for (const auto& d : docs)
        for (const auto& t : d) ++freq[t];

    W2VCorpus c;
    for (const auto& [w, n] : freq)
        if (n >= static_cast<std::uint64_t>(min_count)) c.vocab.push_back(w);
    std::sort(c.vocab.begin(), c.vocab.end(), [&](const std::string& a, const std::string& b) {
        return freq[a] != freq[b] ? freq[a] > freq[b] : a < b;
    });
    if (c.vocab.empty())
        throw std::runtime_error("word2vec: no token meets the min_count threshold");

    std::unordered_map<std::string, int> ids;
    c.counts.reserve(c.vocab.size());
    for (std::size_t i = 0; i < c.vocab.size(); ++i) {
        ids[c.vocab[i]] = static_cast<int>(i);
        c.counts.push_back(freq[c.vocab[i]]);
    }

    for (const auto& d : docs) {
        std::vector<int> row;
        for (const auto& t : d) {
            const auto it = ids.find(t);
            if (it != ids.end()) row.push_back(it->second);
        }
        c.corpus_tokens += row.size();
        c.docs.push_back(std::move(row));
    }

    double acc = 0.0;
    c.neg_cdf.reserve(c.vocab.size());
    for (const auto n : c.counts) {
        acc += std::pow(static_cast<double>(n), 0.75);
        c.neg_cdf.push_back(acc);
    }
    return c;
}

inline int sample_negative(const std::vector<double>& cdf, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, cdf.back());
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u(rng));
    return static_cast<int>(it - cdf.begin());
}

inline float w2v_sigmoid(float x) {
    if (x > 30.0f) return 1.0f;
    if (x < -30.0f) return 0.0f;
    return 1.0f / (1.0f + std::exp(-x));
}

}  // namespace detail

// Skip-gram with negative sampling. Every token meeting min_count receives a
// vector; training is deterministic for a fixed seed with workers = 1.
inline EmbeddingTable train_word2vec(const std::vector<TokenStream>& docs,
                                     const Word2VecParams& p) {
    if (p.dim < 1 || p.window < 1 || p.min_count < 1)
        throw std::invalid_argument("word2vec: dim, window and min_count must be >= 1");
    const auto corpus = detail::build_w2v_corpus(docs, p.min_count);

    const std::size_t V = corpus.vocab.size();
    const std::size_t D = static_cast<std::size_t>(p.dim);
    std::vector<float> syn0(V * D);
    std::vector<float> syn1(V * D, 0.0f);
    {
        std::mt19937_64 rng(p.seed);
        std::uniform_real_distribution<float> u(-0.5f / static_cast<float>(p.dim),
                                                0.5f / static_cast<float>(p.dim));
        for (auto& x : syn0) x = u(rng);
    }

    const double total_words =
        static_cast<double>(corpus.corpus_tokens) * std::max(p.epochs, 1) + 1.0;

    const auto train_range = [&](std::size_t doc_begin, std::size_t doc_end,
                                 std::uint64_t seed, std::uint64_t words_before) {
        std::mt19937_64 rng(seed);
        std::vector<float> grad_in(D);
        std::uint64_t processed = words_before;
        for (int epoch = 0; epoch < p.epochs; ++epoch) {
            for (std::size_t di = doc_begin; di < doc_end; ++di) {
                const auto& sent = corpus.docs[di];
                for (std::size_t i = 0; i < sent.size(); ++i) {
                    ++processed;
                    const float lr = std::max(
                        p.initial_learning_rate *
                            static_cast<float>(1.0 - static_cast<double>(processed) / total_words),
                        p.initial_learning_rate * 1e-4f);
                    const int reduced =
                        1 + static_cast<int>(rng() % static_cast<std::uint64_t>(p.window));
                    const int center = sent[i];
                    for (int off = -reduced; off <= reduced; ++off) {
                        if (off == 0) continue;
                        const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + off;
                        if (j < 0 || j >= static_cast<std::ptrdiff_t>(sent.size())) continue;
                        const int context = sent[static_cast<std::size_t>(j)];
                        float* vin = &syn0[static_cast<std::size_t>(context) * D];
                        std::fill(grad_in.begin(), grad_in.end(), 0.0f);
                        for (int k = 0; k <= p.negative_samples; ++k) {
                            int target;
                            float label;
                            if (k == 0) {
                                target = center;
                                label = 1.0f;
                            } else {
                                target = detail::sample_negative(corpus.neg_cdf, rng);
                                if (target == center) continue;
                                label = 0.0f;
                            }
                            float* vout = &syn1[static_cast<std::size_t>(target) * D];
                            float dot = 0.0f;
                            for (std::size_t d = 0; d < D; ++d) dot += vin[d] * vout[d];
                            const float g = (label - detail::w2v_sigmoid(dot)) * lr;
                            for (std::size_t d = 0; d < D; ++d) {
                                grad_in[d] += g * vout[d];
                                vout[d] += g * vin[d];
                            }
                        }
                        for (std::size_t d = 0; d < D; ++d) vin[d] += grad_in[d];
                    }
                }
            }
        }
    };

    if (p.workers <= 1) {
        train_range(0, corpus.docs.size(), p.seed ^ 0x5bd1e995u, 0);
    } else {
        std::vector<std::thread> pool;
        const std::size_t per =
            (corpus.docs.size() + static_cast<std::size_t>(p.workers) - 1) /
            static_cast<std::size_t>(p.workers);
        std::uint64_t words_before = 0;
        for (int w = 0; w < p.workers; ++w) {
            const std::size_t begin = std::min(corpus.docs.size(), per * static_cast<std::size_t>(w));
            const std::size_t end = std::min(corpus.docs.size(), begin + per);
            if (begin >= end) break;
            pool.emplace_back(train_range, begin, end,
                              p.seed ^ (0x9e3779b97f4a7c15ull * (w + 1)), words_before);
            for (std::size_t di = begin; di < end; ++di) words_before += corpus.docs[di].size();
        }
        for (auto& t : pool) t.join();
    }

    EmbeddingTable table;
    table.dim = p.dim;
    table.source = EmbeddingSource::word2vec_trained;
    for (std::size_t i = 0; i < V; ++i) {
        const float* row = &syn0[i * D];
        table.vectors.emplace(corpus.vocab[i], std::vector<float>(row, row + D));
    }
    return table;
}

// Text layout: "token v1 v2 ... vd", one entry per line. The dimension is
// inferred from the first line and every line must agree with it.
inline EmbeddingTable load_glove(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embedding file: " + path);

    EmbeddingTable table;
    table.source = EmbeddingSource::glove_file;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream iss(line);
        std::string token;
        iss >> token;
        std::vector<float> vec;
        std::string value;
        while (iss >> value) {
            try {
                std::size_t used = 0;
                const float x = std::stof(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
                if (!std::isfinite(x)) throw std::invalid_argument(value);
                vec.push_back(x);
            } catch (const std::exception&) {
                throw std::runtime_error("embedding file line " + std::to_string(lineno) +
                                         ": non-numeric component '" + value + "'");
            }
        }
        if (vec.empty())
            throw std::runtime_error("embedding file line " + std::to_string(lineno) +
                                     ": no vector components");
        if (table.dim == 0) {
            table.dim = static_cast<int>(vec.size());
        } else if (static_cast<int>(vec.size()) != table.dim) {
            throw std::runtime_error("embedding file line " + std::to_string(lineno) +
                                     ": expected " + std::to_string(table.dim) +
                                     " components, found " + std::to_string(vec.size()));
        }
        table.vectors[token] = std::move(vec);
    }
    if (table.vectors.empty()) throw std::runtime_error(path + ": no vectors");
    return table;
}

// Writes the same text layout load_glove() reads, tokens in lexicographic
// order, floats with round-trip precision.
inline void save_embeddings(const EmbeddingTable& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write embedding file: " + path);
    std::vector<std::string> tokens;
    tokens.reserve(t.vectors.size());
    for (const auto& [tok, vec] : t.vectors) tokens.push_back(tok);
    std::sort(tokens.begin(), tokens.end());
    char buf[32];
    for (const auto& tok : tokens) {
        out << tok;
        for (const float x : t.vectors.at(tok)) {
            std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(x));
            out << ' ' << buf;
        }
        out << '\n';
    }
}

// Arithmetic mean of the vectors of in-table tokens; tokens without a vector
// are skipped and an empty or fully unknown document maps to the zero vector.
inline FeatureVector embed_document(const TokenStream& doc, const EmbeddingTable& t) {
    std::vector<double> acc(static_cast<std::size_t>(t.dim), 0.0);
    std::size_t known = 0;
    for (const auto& tok : doc) {
        const auto it = t.vectors.find(tok);
        if (it == t.vectors.end()) continue;
        ++known;
        for (std::size_t d = 0; d < acc.size(); ++d) acc[d] += static_cast<double>(it->second[d]);
    }
    if (known > 0)
        for (auto& x : acc) x /= static_cast<double>(known);
    return FeatureVector::dense(std::move(acc));
}

}  // namespace phishkit
