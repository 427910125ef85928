#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include "../embeddings.hpp"
#include "../features.hpp"
#include "../models.hpp"
#include "../preprocess.hpp"
#include "recipe.hpp"

namespace phishkit {

using Featurizer = std::variant<TfidfModel, EmbeddingTable>;

inline FeatureVector featurize(const Featurizer& f, const TokenStream& doc) {
    if (std::holds_alternative<TfidfModel>(f))
        return transform_tfidf(doc, std::get<TfidfModel>(f));
    return embed_document(doc, std::get<EmbeddingTable>(f));
}

struct Prediction {
    double p0 = 0.0, p1 = 0.0;
    int label = 0;
};

// The attacked composite: preprocessing config + featurizer + classifier,
// exposed as a probability query with a monotone counter that increments
// exactly once per scoring call.
//
// score() runs the configured Level-1/2 preprocessing and is what evaluation
// and post-attack recovery use. score_raw() featurizes the bare
// lowercase/whitespace token stream; attack searches query through it so the
// preprocessing defense stays downstream of the attack, which is what makes
// recovery a meaningful second stage.
class VictimPipeline {
public:
    VictimPipeline(PreprocessConfig cfg, const Lexicon* lexicon, Featurizer featurizer,
                   TrainedModel model)
        : cfg_(std::move(cfg)),
          lexicon_(lexicon),
          featurizer_(std::move(featurizer)),
          model_(std::move(model)) {
        if (cfg_.level == Level::level1_and_2 && !lexicon_)
            throw std::invalid_argument("victim pipeline: level1_and_2 requires a lexicon");
    }

    Prediction score(const std::string& text) const {
        return classify(preprocess(text, cfg_, lexicon_));
    }

    Prediction score_raw(const std::string& text) const {
        return classify(attack_tokens(text));
    }

    std::uint64_t query_count() const { return queries_; }
    void reset_query_count() { queries_ = 0; }
    void add_queries(std::uint64_t n) { queries_ += n; }  // merges worker counters

    const TrainedModel& model() const { return model_; }
    const Featurizer& featurizer() const { return featurizer_; }
    const PreprocessConfig& preprocess_config() const { return cfg_; }
    const Lexicon* lexicon() const { return lexicon_; }

private:
    Prediction classify(const TokenStream& tokens) const {
        ++queries_;
        const FeatureVector x = featurize(featurizer_, tokens);
        const auto [p0, p1] = predict_proba(model_, x);
        return {p0, p1, label_from_proba(model_, p1)};
    }

    PreprocessConfig cfg_;
    const Lexicon* lexicon_ = nullptr;
    Featurizer featurizer_;
    TrainedModel model_;
    mutable std::uint64_t queries_ = 0;
};

}  // namespace phishkit
