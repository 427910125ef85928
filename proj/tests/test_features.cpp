#include <catch2/catch.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include <phishkit/features.hpp>

#include "support/oracles.hpp"

using namespace phishkit;

TEST_CASE("fit computes document frequencies and idf by the book", "[features]") {
    const std::vector<TokenStream> corpus = {{"a", "b"}, {"a"}};
    const auto m = fit_tfidf(corpus, 1, 1, 10);
    REQUIRE(m.vocabulary.size() == 2);
    CHECK(m.idf[m.vocabulary.at("a")] == Approx(0.0));
    CHECK(m.idf[m.vocabulary.at("b")] == Approx(std::log(2.0)));
}

TEST_CASE("vocabulary keeps the most frequent terms", "[features]") {
    const std::vector<TokenStream> corpus = {{"a", "b"}, {"a"}};
    const auto m = fit_tfidf(corpus, 1, 1, 1);
    REQUIRE(m.vocabulary.size() == 1);
    CHECK(m.vocabulary.count("a") == 1);
}

TEST_CASE("ngram enumeration covers the configured range", "[features]") {
    const auto m = fit_tfidf({{"x", "y", "z"}}, 1, 3, 100);
    CHECK(m.vocabulary.count("x y") == 1);
    CHECK(m.vocabulary.count("x y z") == 1);
    CHECK(m.vocabulary.count("y z") == 1);
    CHECK(m.vocabulary.size() == 6);
}

TEST_CASE("transform applies tf * idf with zero cases", "[features]") {
    const std::vector<TokenStream> corpus = {{"a", "b"}, {"a", "c"}};
    const auto m = fit_tfidf(corpus, 1, 1, 10);

    // absent term -> log(1+0) = 0
    const auto v1 = transform_tfidf({"c"}, m).to_dense();
    CHECK(v1[m.vocabulary.at("b")] == 0.0);
    // ubiquitous term -> idf 0 regardless of count
    const auto v2 = transform_tfidf({"a", "a", "a"}, m).to_dense();
    CHECK(v2[m.vocabulary.at("a")] == 0.0);
    // out-of-vocabulary ngrams are ignored
    const auto v3 = transform_tfidf({"zzz"}, m).to_dense();
    CHECK(std::all_of(v3.begin(), v3.end(), [](double x) { return x == 0.0; }));
}

TEST_CASE("transform matches the direct-formula evaluator", "[features][oracle]") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> n_docs(2, 8), doc_len(1, 20), vocab_char(0, 3);
    for (int round = 0; round < 40; ++round) {
        std::vector<TokenStream> corpus(static_cast<std::size_t>(n_docs(rng)));
        for (auto& doc : corpus) {
            const int len = doc_len(rng);
            for (int i = 0; i < len; ++i)
                doc.push_back(std::string(1, static_cast<char>('a' + vocab_char(rng))));
        }
        const auto m = fit_tfidf(corpus, 1, 2, 100000);  // large cap: no truncation
        for (const auto& doc : corpus) {
            const auto got = transform_tfidf(doc, m).to_dense();
            const auto expected = oracle::tfidf_reference(corpus, doc, 1, 2);
            REQUIRE(expected.size() == m.vocabulary.size());
            for (const auto& [gram, value] : expected) {
                REQUIRE(m.vocabulary.count(gram) == 1);
                CHECK(std::abs(got[m.vocabulary.at(gram)] - value) < 1e-12);
            }
        }
    }
}

TEST_CASE("transform is monotone in term count", "[features][property]") {
    const std::vector<TokenStream> corpus = {{"a", "b"}, {"b", "c"}, {"c", "a"}};
    const auto m = fit_tfidf(corpus, 1, 1, 10);
    for (const auto& [gram, col] : m.vocabulary) {
        double prev = -1.0;
        for (int count = 0; count <= 4; ++count) {
            TokenStream doc(static_cast<std::size_t>(count), gram);
            const double v = transform_tfidf(doc, m).to_dense()[col];
            CHECK(v >= prev);
            prev = v;
        }
        CHECK(m.idf[col] >= 0.0);
    }
}

TEST_CASE("fitted models are stable across repeated transforms", "[features]") {
    const std::vector<TokenStream> corpus = {{"a", "b", "a"}, {"b"}, {"c", "a"}};
    const auto m = fit_tfidf(corpus, 1, 2, 50);
    for (const auto& doc : corpus) {
        const auto once = transform_tfidf(doc, m).to_dense();
        const auto twice = transform_tfidf(doc, m).to_dense();
        CHECK(once == twice);
    }
}

TEST_CASE("sparse and dense forms agree component-wise", "[features]") {
    const std::vector<TokenStream> corpus = {{"a", "b"}, {"b", "c"}, {"a"}};
    const auto m = fit_tfidf(corpus, 1, 1, 10);
    const auto sparse = transform_tfidf({"a", "b", "b", "zzz"}, m);
    REQUIRE(sparse.is_sparse());
    const auto dense = FeatureVector::dense(sparse.to_dense());
    REQUIRE(dense.dim() == sparse.dim());
    for (std::size_t i = 0; i < dense.dim(); ++i) CHECK(sparse.at(i) == dense.at(i));
}

TEST_CASE("feature vector validation", "[features]") {
    CHECK_THROWS_AS(FeatureVector::dense({1.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(FeatureVector::sparse(3, {{2, 1.0}, {1, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(FeatureVector::sparse(2, {{2, 1.0}}), std::invalid_argument);
    const auto v = FeatureVector::sparse(4, {{1, 2.0}, {3, -1.0}});
    CHECK(v.to_dense() == std::vector<double>{0.0, 2.0, 0.0, -1.0});
}

TEST_CASE("tf-idf model serializes to json and back", "[features]") {
    const std::vector<TokenStream> corpus = {{"a", "b", "c"}, {"a"}};
    const auto m = fit_tfidf(corpus, 1, 2, 10);
    const auto back = tfidf_from_json(tfidf_to_json(m));
    CHECK(back.vocabulary == m.vocabulary);
    CHECK(back.idf == m.idf);
    const auto doc = TokenStream{"a", "b", "b"};
    CHECK(transform_tfidf(doc, back).to_dense() == transform_tfidf(doc, m).to_dense());
}

TEST_CASE("feature matrices export as csv", "[features]") {
    const std::vector<TokenStream> corpus = {{"a", "b"}, {"b"}};
    const auto m = fit_tfidf(corpus, 1, 1, 10);
    std::ostringstream out;
    write_matrix_csv(out, {transform_tfidf(corpus[0], m), transform_tfidf(corpus[1], m)});
    const auto text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    CHECK(std::count(text.begin(), text.end(), ',') == 2);  // dim 2 per row
}

TEST_CASE("empty corpus is rejected", "[features]") {
    CHECK_THROWS_AS(fit_tfidf({}, 1, 3, 100), std::invalid_argument);
}
