#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "attack.hpp"
#include "corpus.hpp"
#include "embeddings.hpp"
#include "features.hpp"
#include "metrics.hpp"
#include "models.hpp"
#include "preprocess.hpp"

// Experiment orchestration: a declarative config drives preprocess, train,
// eval and attack commands, each persisting deterministic artifacts stamped
// with the hash of the config that produced them.

namespace phishkit {

// invalid configuration (exit code 1); runtime failures use std::runtime_error
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class FeaturizerKind { tfidf, word2vec, glove };

inline std::string to_string(FeaturizerKind k) {
    switch (k) {
        case FeaturizerKind::tfidf: return "tfidf";
        case FeaturizerKind::word2vec: return "word2vec";
        case FeaturizerKind::glove: return "glove";
    }
    return "tfidf";
}

struct ExperimentConfig {
    nlohmann::json raw;
    std::string config_hash;

    std::string train_path;
    DataFormat train_format = DataFormat::jsonl;
    std::optional<int> train_forced_label;
    bool has_eval = false;
    std::string eval_path;
    DataFormat eval_format = DataFormat::jsonl;
    std::optional<int> eval_forced_label;

    Level level = Level::level1;
    std::string stopwords_path;
    std::string lexicon_path;
    int max_edit_distance = 2;

    FeaturizerKind featurizer = FeaturizerKind::tfidf;
    int ngram_min = 1, ngram_max = 3;
    std::size_t max_features = 100;
    Word2VecParams w2v;
    std::string glove_path;

    ModelVariant variant = ModelVariant::logreg;
    TrainConfig base;
    ParamGrid grid;
    int folds = 10;
    double train_fraction = 0.8;

    std::vector<RecipeName> recipes = {RecipeName::deepwordbug, RecipeName::pruthi,
                                       RecipeName::textbugger, RecipeName::custom};
    std::vector<std::string> recipe_files;  // declarative recipe definitions
    double sample_fraction = 0.1;
    std::uint64_t query_budget = 5000;
    int pruthi_max_words = 3;
    int attack_workers = 1;

    std::uint64_t seed_split = 0, seed_folds = 0, seed_model = 0, seed_word2vec = 0,
                  seed_attack = 0;

    std::string output_dir = "out";
};

namespace detail {

inline DataFormat data_format_from_string(const std::string& s, const std::string& field) {
    if (s == "csv") return DataFormat::csv;
    if (s == "jsonl") return DataFormat::jsonl;
    throw ConfigError(field + ": unknown format '" + s + "' (expected csv or jsonl)");
}

inline void require_file(const std::string& path, const std::string& field) {
    if (!std::filesystem::exists(path))
        throw ConfigError(field + ": file not found: " + path);
}

inline std::uint64_t require_seed(const nlohmann::json& seeds, const char* name) {
    const std::string field = std::string("seeds.") + name;
    if (!seeds.contains(name))
        throw ConfigError(field + ": required (no wall-clock seed defaults)");
    if (!seeds[name].is_number_integer() && !seeds[name].is_number_unsigned())
        throw ConfigError(field + ": must be an integer");
    return seeds[name].get<std::uint64_t>();
}

inline ParamValue param_value_from_json(const nlohmann::json& v, const std::string& field) {
    if (v.is_number()) return ParamValue(v.get<double>());
    if (v.is_string()) return ParamValue(v.get<std::string>());
    if (v.is_boolean()) return ParamValue(std::string(v.get<bool>() ? "true" : "false"));
    throw ConfigError(field + ": grid values must be numbers or strings");
}

}  // namespace detail

// Hash of the canonical config with the output directory removed, so the
// identity of an experiment does not depend on where it writes.
inline std::string config_hash_of(const nlohmann::json& raw) {
    nlohmann::json j = raw;
    j.erase("output_dir");
    return fnv1a_hex(j.dump());
}

inline ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    ExperimentConfig cfg;
    cfg.raw = j;
    cfg.config_hash = config_hash_of(j);

    if (!j.contains("data") || !j["data"].is_object())
        throw ConfigError("data: required object");
    const auto& data = j["data"];
    if (!data.contains("train") || !data["train"].is_object())
        throw ConfigError("data.train: required object");
    {
        const auto& t = data["train"];
        if (!t.contains("path")) throw ConfigError("data.train.path: required");
        cfg.train_path = t["path"].get<std::string>();
        cfg.train_format =
            detail::data_format_from_string(t.value("format", "jsonl"), "data.train.format");
        if (t.contains("forced_label")) cfg.train_forced_label = t["forced_label"].get<int>();
        detail::require_file(cfg.train_path, "data.train.path");
    }
    if (data.contains("eval")) {
        const auto& e = data["eval"];
        if (!e.contains("path")) throw ConfigError("data.eval.path: required");
        cfg.has_eval = true;
        cfg.eval_path = e["path"].get<std::string>();
        cfg.eval_format =
            detail::data_format_from_string(e.value("format", "jsonl"), "data.eval.format");
        if (e.contains("forced_label")) cfg.eval_forced_label = e["forced_label"].get<int>();
        detail::require_file(cfg.eval_path, "data.eval.path");
    }

    if (!j.contains("preprocess") || !j["preprocess"].is_object())
        throw ConfigError("preprocess: required object");
    {
        const auto& p = j["preprocess"];
        const std::string level = p.value("level", "level1");
        if (level == "level1")
            cfg.level = Level::level1;
        else if (level == "level1_and_2")
            cfg.level = Level::level1_and_2;
        else
            throw ConfigError("preprocess.level: expected level1 or level1_and_2");
        if (!p.contains("stopwords")) throw ConfigError("preprocess.stopwords: required");
        cfg.stopwords_path = p["stopwords"].get<std::string>();
        detail::require_file(cfg.stopwords_path, "preprocess.stopwords");
        cfg.max_edit_distance = p.value("max_edit_distance", 2);
        if (cfg.max_edit_distance < 0)
            throw ConfigError("preprocess.max_edit_distance: must be >= 0");
        if (p.contains("lexicon")) {
            cfg.lexicon_path = p["lexicon"].get<std::string>();
            detail::require_file(cfg.lexicon_path, "preprocess.lexicon");
        } else if (cfg.level == Level::level1_and_2) {
            throw ConfigError("preprocess.lexicon: required when level is level1_and_2");
        }
    }

    if (j.contains("featurizer")) {
        const auto& f = j["featurizer"];
        const std::string kind = f.value("kind", "tfidf");
        if (kind == "tfidf")
            cfg.featurizer = FeaturizerKind::tfidf;
        else if (kind == "word2vec")
            cfg.featurizer = FeaturizerKind::word2vec;
        else if (kind == "glove")
            cfg.featurizer = FeaturizerKind::glove;
        else
            throw ConfigError("featurizer.kind: expected tfidf, word2vec or glove");
        if (f.contains("tfidf")) {
            const auto& t = f["tfidf"];
            cfg.ngram_min = t.value("ngram_min", 1);
            cfg.ngram_max = t.value("ngram_max", 3);
            cfg.max_features = t.value("max_features", std::size_t{100});
            if (cfg.ngram_min < 1 || cfg.ngram_max < cfg.ngram_min)
                throw ConfigError("featurizer.tfidf: invalid ngram range");
        }
        if (f.contains("word2vec")) {
            const auto& w = f["word2vec"];
            cfg.w2v.dim = w.value("dim", 100);
            cfg.w2v.window = w.value("window", 5);
            cfg.w2v.min_count = w.value("min_count", 1);
            cfg.w2v.negative_samples = w.value("negative_samples", 5);
            cfg.w2v.epochs = w.value("epochs", 5);
            cfg.w2v.initial_learning_rate = w.value("learning_rate", 0.025f);
            if (cfg.w2v.dim < 1 || cfg.w2v.window < 1 || cfg.w2v.min_count < 1)
                throw ConfigError("featurizer.word2vec: dim, window, min_count must be >= 1");
        }
        if (cfg.featurizer == FeaturizerKind::glove) {
            if (!f.contains("glove_path"))
                throw ConfigError("featurizer.glove_path: required for glove featurizer");
            cfg.glove_path = f["glove_path"].get<std::string>();
            detail::require_file(cfg.glove_path, "featurizer.glove_path");
        }
    }

    if (j.contains("model")) {
        const auto& m = j["model"];
        try {
            cfg.variant = model_variant_from_string(m.value("variant", "logreg"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("model.variant: ") + e.what());
        }
        if (m.contains("config")) {
            for (const auto& [key, value] : m["config"].items()) {
                try {
                    apply_param(cfg.base, cfg.variant,
                                key, detail::param_value_from_json(value, "model.config." + key));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("model.config: ") + e.what());
                }
            }
        }
        if (m.contains("grid")) {
            for (const auto& [key, values] : m["grid"].items()) {
                if (!values.is_array() || values.empty())
                    throw ConfigError("model.grid." + key + ": must be a non-empty array");
                std::vector<ParamValue> list;
                for (const auto& v : values)
                    list.push_back(detail::param_value_from_json(v, "model.grid." + key));
                cfg.grid[key] = std::move(list);
            }
        }
        cfg.folds = m.value("folds", 10);
        if (cfg.folds < 2) throw ConfigError("model.folds: must be >= 2");
    }

    if (j.contains("split")) {
        cfg.train_fraction = j["split"].value("train_fraction", 0.8);
        if (cfg.train_fraction <= 0.0 || cfg.train_fraction >= 1.0)
            throw ConfigError("split.train_fraction: must be in (0,1)");
    }

    if (j.contains("attack")) {
        const auto& a = j["attack"];
        if (a.contains("recipes")) {
            cfg.recipes.clear();
            for (const auto& r : a["recipes"]) {
                try {
                    cfg.recipes.push_back(recipe_name_from_string(r.get<std::string>()));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("attack.recipes: ") + e.what());
                }
            }
        }
        if (a.contains("recipe_files")) {
            for (const auto& f : a["recipe_files"]) {
                cfg.recipe_files.push_back(f.get<std::string>());
                detail::require_file(cfg.recipe_files.back(), "attack.recipe_files");
            }
        }
        if (cfg.recipes.empty() && cfg.recipe_files.empty())
            throw ConfigError("attack.recipes: must not be empty");
        cfg.sample_fraction = a.value("sample_fraction", 0.1);
        if (cfg.sample_fraction <= 0.0 || cfg.sample_fraction > 1.0)
            throw ConfigError("attack.sample_fraction: must be in (0,1]");
        cfg.query_budget = a.value("query_budget", std::uint64_t{5000});
        cfg.pruthi_max_words = a.value("pruthi_max_words", 3);
        cfg.attack_workers = a.value("workers", 1);
        if (cfg.attack_workers < 1) throw ConfigError("attack.workers: must be >= 1");
    }

    if (!j.contains("seeds") || !j["seeds"].is_object())
        throw ConfigError("seeds: required object (no wall-clock seed defaults)");
    const auto& seeds = j["seeds"];
    cfg.seed_split = detail::require_seed(seeds, "split");
    cfg.seed_folds = detail::require_seed(seeds, "folds");
    cfg.seed_model = detail::require_seed(seeds, "model");
    cfg.seed_word2vec = detail::require_seed(seeds, "word2vec");
    cfg.seed_attack = detail::require_seed(seeds, "attack");
    cfg.base.seed = cfg.seed_model;
    cfg.w2v.seed = cfg.seed_word2vec;

    cfg.output_dir = j.value("output_dir", "out");
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_experiment_config(j);
}

// ---------------------------------------------------------------------------
// shared command plumbing

namespace detail {

struct LoadedPipelineInputs {
    PreprocessConfig pcfg;
    std::optional<Lexicon> lexicon;

    const Lexicon* lexicon_ptr() const { return lexicon ? &*lexicon : nullptr; }
};

inline LoadedPipelineInputs load_pipeline_inputs(const ExperimentConfig& cfg) {
    LoadedPipelineInputs in;
    in.pcfg.level = cfg.level;
    in.pcfg.max_edit_distance = cfg.max_edit_distance;
    in.pcfg.stopwords = load_stopwords(cfg.stopwords_path);
    if (!cfg.lexicon_path.empty()) in.lexicon = Lexicon::from_file(cfg.lexicon_path);
    return in;
}

inline std::vector<TokenStream> preprocess_all(const Dataset& d, const PreprocessConfig& pcfg,
                                               const Lexicon* lex,
                                               PreprocessStats* stats = nullptr) {
    std::vector<TokenStream> docs;
    docs.reserve(d.emails.size());
    for (const auto& e : d.emails) {
        PreprocessStats s;
        docs.push_back(preprocess(e.text(), pcfg, lex, stats ? &s : nullptr));
        if (stats) *stats += s;
    }
    return docs;
}

inline std::vector<int> labels_of(const Dataset& d) {
    std::vector<int> y;
    y.reserve(d.emails.size());
    for (const auto& e : d.emails) y.push_back(e.label);
    return y;
}

inline std::vector<FeatureVector> featurize_all(const Featurizer& f,
                                                const std::vector<TokenStream>& docs) {
    std::vector<FeatureVector> X;
    X.reserve(docs.size());
    for (const auto& d : docs) X.push_back(featurize(f, d));
    return X;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output file: " + path.string());
    out << content;
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    nlohmann::json j;
    in >> j;
    return j;
}

inline nlohmann::json meta_line(const ExperimentConfig& cfg, const std::string& kind) {
    return nlohmann::json{{"meta", {{"config_hash", cfg.config_hash}, {"kind", kind}}}};
}

inline Dataset load_configured(const std::string& path, DataFormat format,
                               std::optional<int> forced, nlohmann::json* summary) {
    const LoadResult r = load_dataset(path, format, forced);
    if (summary) {
        (*summary)["path"] = path;
        (*summary)["records"] = r.dataset.size();
        (*summary)["dropped_empty"] = r.dropped_empty;
        (*summary)["skipped_rows"] = r.skipped.size();
        nlohmann::json counts = nlohmann::json::object();
        for (const auto& [label, n] : r.dataset.class_counts())
            counts[std::to_string(label)] = n;
        (*summary)["class_counts"] = counts;
    }
    return r.dataset;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// featurizer persistence: tf-idf inline, embedding tables in the text layout

inline void save_featurizer(const Featurizer& f, FeaturizerKind kind,
                            const std::filesystem::path& dir, const std::string& config_hash) {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["kind"] = to_string(kind);
    if (std::holds_alternative<TfidfModel>(f)) {
        j["model"] = tfidf_to_json(std::get<TfidfModel>(f));
    } else {
        const auto& table = std::get<EmbeddingTable>(f);
        save_embeddings(table, (dir / "embeddings.vec").string());
        j["file"] = "embeddings.vec";
        j["dim"] = table.dim;
    }
    detail::write_json_file(dir / "featurizer.json", j);
}

inline Featurizer load_featurizer(const std::filesystem::path& dir) {
    const auto j = detail::read_json_file(dir / "featurizer.json");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "tfidf") return tfidf_from_json(j.at("model"));
    EmbeddingTable t = load_glove((dir / j.at("file").get<std::string>()).string());
    t.source = kind == "word2vec" ? EmbeddingSource::word2vec_trained
                                  : EmbeddingSource::glove_file;
    return t;
}

// ---------------------------------------------------------------------------
// commands; each returns the report JSON it wrote

inline nlohmann::json cmd_preprocess(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    const auto inputs = detail::load_pipeline_inputs(cfg);

    nlohmann::json summary;
    summary["kind"] = "preprocess_summary";
    summary["config_hash"] = cfg.config_hash;
    summary["level"] = cfg.level == Level::level1 ? "level1" : "level1_and_2";

    const auto run_one = [&](const std::string& path, DataFormat format,
                             std::optional<int> forced, const std::string& tag) {
        nlohmann::json data_summary;
        const Dataset d = detail::load_configured(path, format, forced, &data_summary);
        PreprocessStats stats;
        std::ofstream out(fs::path(cfg.output_dir) / ("tokens_" + tag + ".jsonl"));
        out << detail::meta_line(cfg, "tokens").dump() << '\n';
        for (const auto& e : d.emails) {
            PreprocessStats s;
            const TokenStream tokens = preprocess(e.text(), inputs.pcfg, inputs.lexicon_ptr(), &s);
            stats += s;
            nlohmann::json line;
            line["id"] = e.id;
            line["label"] = e.label;
            line["tokens"] = tokens;
            out << line.dump() << '\n';
        }
        data_summary["placeholders"] = {{"url", stats.url_placeholders},
                                        {"email", stats.email_placeholders},
                                        {"phone", stats.phone_placeholders}};
        data_summary["word_splits"] = stats.word_splits;
        data_summary["corrections"] = stats.corrections;
        data_summary["non_ascii_chars"] = stats.non_ascii_chars;
        summary[tag] = data_summary;
        if (stats.non_ascii_chars > 0)
            summary["warnings"].push_back(tag + ": " + std::to_string(stats.non_ascii_chars) +
                                          " non-ascii characters passed through level 1");
    };

    run_one(cfg.train_path, cfg.train_format, cfg.train_forced_label, "train");
    if (cfg.has_eval) run_one(cfg.eval_path, cfg.eval_format, cfg.eval_forced_label, "eval");

    detail::write_json_file(fs::path(cfg.output_dir) / "preprocess_summary.json", summary);
    return summary;
}

namespace detail {

inline bool has_both_classes(const std::vector<int>& y) {
    bool has0 = false, has1 = false;
    for (const int v : y) (v == 1 ? has1 : has0) = true;
    return has0 && has1;
}

inline nlohmann::json classification_metrics(const std::vector<int>& y_true,
                                             const std::vector<int>& y_pred) {
    const auto cm = confusion(y_true, y_pred);
    nlohmann::json j;
    j["confusion"] = {{"tp", cm.tp}, {"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}};
    j["accuracy"] = accuracy(cm);
    j["precision"] = opt_json(precision(cm));
    j["recall"] = opt_json(recall(cm));
    j["f1"] = opt_json(f1(cm));
    return j;
}

inline Featurizer fit_featurizer(const ExperimentConfig& cfg,
                                 const std::vector<TokenStream>& train_docs) {
    switch (cfg.featurizer) {
        case FeaturizerKind::tfidf:
            return fit_tfidf(train_docs, cfg.ngram_min, cfg.ngram_max, cfg.max_features);
        case FeaturizerKind::word2vec: return train_word2vec(train_docs, cfg.w2v);
        case FeaturizerKind::glove: return load_glove(cfg.glove_path);
    }
    throw std::runtime_error("unreachable featurizer kind");
}

}  // namespace detail

// split -> fit featurizer on train only -> (grid search) -> final train ->
// test-set report with the development-table columns.
inline nlohmann::json cmd_train(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    const auto inputs = detail::load_pipeline_inputs(cfg);

    nlohmann::json report;
    report["kind"] = "train_report";
    report["config_hash"] = cfg.config_hash;

    nlohmann::json data_summary;
    const Dataset all = detail::load_configured(cfg.train_path, cfg.train_format,
                                                cfg.train_forced_label, &data_summary);
    report["data"] = data_summary;

    SplitSpec split_spec;
    split_spec.train_fraction = cfg.train_fraction;
    split_spec.seed = cfg.seed_split;
    const auto [train, test] = stratified_split(all, split_spec);

    const auto train_docs = detail::preprocess_all(train, inputs.pcfg, inputs.lexicon_ptr());
    const auto test_docs = detail::preprocess_all(test, inputs.pcfg, inputs.lexicon_ptr());

    const Featurizer featurizer = detail::fit_featurizer(cfg, train_docs);
    const auto train_X = detail::featurize_all(featurizer, train_docs);
    const auto test_X = detail::featurize_all(featurizer, test_docs);
    const auto train_y = detail::labels_of(train);
    const auto test_y = detail::labels_of(test);

    TrainedModel model;
    nlohmann::json hyperparams;
    hyperparams["variant"] = to_string(cfg.variant);
    hyperparams["config_hash"] = cfg.config_hash;
    if (!cfg.grid.empty()) {
        const auto result =
            grid_search_cv(cfg.variant, cfg.grid, train_X, train_y, cfg.folds, cfg.base,
                           cfg.seed_folds);
        model = result.best_model;
        nlohmann::json best = nlohmann::json::object();
        for (const auto& [key, value] : result.best_params)
            best[key] = std::holds_alternative<double>(value)
                            ? nlohmann::json(std::get<double>(value))
                            : nlohmann::json(std::get<std::string>(value));
        hyperparams["grid_best"] = best;
        nlohmann::json cells = nlohmann::json::array();
        for (const auto& cell : result.cells) {
            nlohmann::json c;
            for (const auto& [key, value] : cell.params)
                c["params"][key] = std::holds_alternative<double>(value)
                                       ? nlohmann::json(std::get<double>(value))
                                       : nlohmann::json(std::get<std::string>(value));
            c["mean_f1"] = cell.trained_ok ? nlohmann::json(cell.mean_f1) : nlohmann::json(nullptr);
            if (!cell.trained_ok) c["error"] = cell.error;
            cells.push_back(c);
        }
        report["grid"] = cells;
    } else {
        model = train_model(cfg.variant, train_X, train_y, cfg.base);
    }

    std::vector<int> train_pred, test_pred;
    std::vector<double> test_scores;
    for (const auto& x : train_X) train_pred.push_back(predict_label(model, x));
    for (const auto& x : test_X) {
        test_pred.push_back(predict_label(model, x));
        test_scores.push_back(predict_proba(model, x).second);
    }

    const auto train_cm = confusion(train_y, train_pred);
    nlohmann::json dev;
    dev["train_accuracy"] = accuracy(train_cm);
    const auto test_metrics = detail::classification_metrics(test_y, test_pred);
    dev["test_accuracy"] = test_metrics["accuracy"];
    dev["precision"] = test_metrics["precision"];
    dev["recall"] = test_metrics["recall"];
    dev["f1"] = test_metrics["f1"];
    report["development"] = dev;
    report["test_confusion"] = test_metrics["confusion"];

    const bool both_classes = detail::has_both_classes(test_y);
    if (both_classes) {
        const RocCurve curve = roc(test_y, test_scores);
        report["test_auc"] = curve.auc;
        std::ostringstream roc_csv;
        roc_csv << "# config " << cfg.config_hash << '\n';
        roc_to_csv(roc_csv, curve);
        detail::write_text_file(fs::path(cfg.output_dir) / "roc_test.csv", roc_csv.str());
    }

    save_model(model, (fs::path(cfg.output_dir) / "model.json").string(), hyperparams);
    save_featurizer(featurizer, cfg.featurizer, cfg.output_dir, cfg.config_hash);
    detail::write_json_file(fs::path(cfg.output_dir) / "train_report.json", report);

    std::ostringstream txt;
    txt << "# config " << cfg.config_hash << '\n';
    txt << "model: " << to_string(cfg.variant) << "  featurizer: " << to_string(cfg.featurizer)
        << '\n';
    const auto pctcell = [](const nlohmann::json& v) {
        return v.is_null() ? std::string("--") : pct2(v.get<double>() * 100.0);
    };
    txt << "train acc %   " << pctcell(dev["train_accuracy"]) << '\n';
    txt << "test acc %    " << pctcell(dev["test_accuracy"]) << '\n';
    txt << "precision %   " << pctcell(dev["precision"]) << '\n';
    txt << "recall %      " << pctcell(dev["recall"]) << '\n';
    txt << "f1 %          " << pctcell(dev["f1"]) << '\n';
    detail::write_text_file(fs::path(cfg.output_dir) / "train_report.txt", txt.str());
    return report;
}

// Deployment-style evaluation of a trained model on a labeled dataset;
// single-class sets report accuracy only.
inline nlohmann::json cmd_eval(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    if (!cfg.has_eval) throw ConfigError("data.eval: required for the eval command");
    fs::create_directories(cfg.output_dir);
    const auto inputs = detail::load_pipeline_inputs(cfg);

    const TrainedModel model = load_model((fs::path(cfg.output_dir) / "model.json").string());
    const Featurizer featurizer = load_featurizer(cfg.output_dir);

    nlohmann::json data_summary;
    const Dataset d = detail::load_configured(cfg.eval_path, cfg.eval_format,
                                              cfg.eval_forced_label, &data_summary);
    const auto docs = detail::preprocess_all(d, inputs.pcfg, inputs.lexicon_ptr());
    const auto X = detail::featurize_all(featurizer, docs);
    const auto y = detail::labels_of(d);

    std::vector<int> pred;
    std::vector<double> scores;
    for (const auto& x : X) {
        pred.push_back(predict_label(model, x));
        scores.push_back(predict_proba(model, x).second);
    }

    nlohmann::json report;
    report["kind"] = "eval_report";
    report["config_hash"] = cfg.config_hash;
    report["data"] = data_summary;

    std::ostringstream txt;
    txt << "# config " << cfg.config_hash << '\n';
    const bool single_class = !detail::has_both_classes(y);
    report["single_class"] = single_class;
    if (single_class) {
        // accuracy equals recall on an all-phishing set; precision is omitted
        std::size_t correct = 0;
        for (std::size_t i = 0; i < y.size(); ++i) correct += pred[i] == y[i];
        const double acc = static_cast<double>(correct) / static_cast<double>(y.size());
        report["metrics"] = {{"accuracy", acc}};
        txt << "samples       " << y.size() << '\n';
        txt << "accuracy %    " << pct2(acc * 100.0) << '\n';
    } else {
        const auto metrics = detail::classification_metrics(y, pred);
        report["metrics"] = metrics;
        const RocCurve curve = roc(y, scores);
        report["metrics"]["auc"] = curve.auc;
        const auto cell = [&](const char* key) {
            return metrics[key].is_null() ? std::string("--")
                                          : pct2(metrics[key].get<double>() * 100.0);
        };
        txt << "accuracy %    " << cell("accuracy") << '\n';
        txt << "precision %   " << cell("precision") << '\n';
        txt << "recall %      " << cell("recall") << '\n';
        txt << "f1 %          " << cell("f1") << '\n';
        txt << "auc           " << pct2(curve.auc * 100.0) << '\n';
    }

    detail::write_json_file(fs::path(cfg.output_dir) / "eval_report.json", report);
    detail::write_text_file(fs::path(cfg.output_dir) / "eval_report.txt", txt.str());
    return report;
}

namespace detail {

inline void render_attack_section(std::ostream& out, const std::string& name,
                                  const AttackReport& r) {
    out << "== " << name << " ==\n";
    out << "successful                " << r.successful << '\n';
    out << "failed                    " << r.failed << '\n';
    out << "skipped                   " << r.skipped << '\n';
    out << "original accuracy %       " << pct2(r.original_accuracy_pct) << '\n';
    out << "accuracy under attack %   " << pct2(r.accuracy_under_attack_pct) << '\n';
    out << "attack success rate %     " << pct2(r.attack_success_rate_pct) << '\n';
    out << "avg perturbed word %      " << pct2(r.avg_perturbed_word_pct) << '\n';
    out << "avg words per input       " << pct2(r.avg_words_per_input) << '\n';
    out << "avg queries               " << pct2(r.avg_queries) << '\n';
    if (r.post_attack) {
        out << "post-attack correct       " << r.post_attack->correct << '\n';
        out << "post-attack incorrect     " << r.post_attack->incorrect << '\n';
        out << "post-attack accuracy %    " << pct2(r.post_attack->accuracy_pct()) << '\n';
    }
}

}  // namespace detail

// Full attack-then-recover loop for every configured recipe against the
// trained model in the output directory. Attack targets are the eval dataset
// when configured, otherwise the held-out test split.
inline nlohmann::json cmd_attack(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    const auto inputs = detail::load_pipeline_inputs(cfg);

    const TrainedModel model = load_model((fs::path(cfg.output_dir) / "model.json").string());
    const Featurizer featurizer = load_featurizer(cfg.output_dir);

    Dataset targets;
    nlohmann::json data_summary;
    if (cfg.has_eval) {
        targets = detail::load_configured(cfg.eval_path, cfg.eval_format, cfg.eval_forced_label,
                                          &data_summary);
    } else {
        const Dataset all = detail::load_configured(cfg.train_path, cfg.train_format,
                                                    cfg.train_forced_label, &data_summary);
        SplitSpec split_spec;
        split_spec.train_fraction = cfg.train_fraction;
        split_spec.seed = cfg.seed_split;
        targets = stratified_split(all, split_spec).second;
        data_summary["note"] = "attacking the held-out test split";
    }

    const auto stopwords =
        std::make_shared<const std::unordered_set<std::string>>(load_stopwords(cfg.stopwords_path));

    std::vector<std::pair<std::string, nlohmann::json>> file_recipes;
    for (const auto& path : cfg.recipe_files)
        file_recipes.emplace_back(std::filesystem::path(path).stem().string(),
                                  detail::read_json_file(path));

    // semantic gate table: the victim's own table when it has one, otherwise
    // a word2vec table trained on the training corpus
    std::shared_ptr<const EmbeddingTable> semantic_table;
    bool needs_semantic =
        std::find(cfg.recipes.begin(), cfg.recipes.end(), RecipeName::textbugger) !=
        cfg.recipes.end();
    for (const auto& [tag, j2] : file_recipes)
        needs_semantic |= j2.contains("constraints") &&
                          j2["constraints"].contains("min_semantic_cosine") &&
                          !j2["constraints"]["min_semantic_cosine"].is_null();
    if (needs_semantic) {
        if (std::holds_alternative<EmbeddingTable>(featurizer)) {
            semantic_table =
                std::make_shared<const EmbeddingTable>(std::get<EmbeddingTable>(featurizer));
        } else {
            const Dataset all = load_dataset(cfg.train_path, cfg.train_format,
                                             cfg.train_forced_label)
                                    .dataset;
            SplitSpec split_spec;
            split_spec.train_fraction = cfg.train_fraction;
            split_spec.seed = cfg.seed_split;
            const auto train = stratified_split(all, split_spec).first;
            const auto docs = detail::preprocess_all(train, inputs.pcfg, inputs.lexicon_ptr());
            semantic_table = std::make_shared<const EmbeddingTable>(train_word2vec(docs, cfg.w2v));
        }
    }

    VictimPipeline victim(inputs.pcfg, inputs.lexicon_ptr(), featurizer, model);

    nlohmann::json report;
    report["kind"] = "attack_report";
    report["config_hash"] = cfg.config_hash;
    report["data"] = data_summary;
    report["model"] = to_string(model.variant());
    report["level"] = cfg.level == Level::level1 ? "level1" : "level1_and_2";

    std::ostringstream txt;
    txt << "# config " << cfg.config_hash << '\n';

    std::vector<std::pair<std::string, AttackRecipe>> recipes;
    for (const auto name : cfg.recipes) {
        AttackRecipe recipe;
        switch (name) {
            case RecipeName::deepwordbug: recipe = make_deepwordbug(stopwords); break;
            case RecipeName::pruthi:
                recipe = make_pruthi(stopwords, cfg.pruthi_max_words);
                break;
            case RecipeName::textbugger:
                recipe = make_textbugger(stopwords, semantic_table);
                break;
            case RecipeName::custom: recipe = make_custom_attack(stopwords); break;
        }
        recipes.emplace_back(to_string(name), std::move(recipe));
    }
    for (const auto& [tag, j2] : file_recipes)
        recipes.emplace_back(tag, recipe_from_json(j2, stopwords, semantic_table));

    nlohmann::json sections = nlohmann::json::object();
    for (const auto& [tag, recipe] : recipes) {
        AttackRunResult run =
            run_attack(recipe, victim, targets, cfg.sample_fraction, cfg.seed_attack,
                       cfg.query_budget, cfg.attack_workers);

        const auto successes = successful_outcomes(run.outcomes);
        if (!successes.empty())
            run.report.post_attack = recover_and_reclassify(successes, victim);

        // identity self-check on the emitted numbers
        const auto recheck =
            attack_report_from_counts(run.report.successful, run.report.failed,
                                      run.report.skipped);
        if (std::abs(recheck.original_accuracy_pct - run.report.original_accuracy_pct) > 1e-9 ||
            std::abs(recheck.accuracy_under_attack_pct - run.report.accuracy_under_attack_pct) >
                1e-9)
            throw std::runtime_error("attack report identity check failed");

        nlohmann::json section;
        section["recipe"] = recipe_to_json(recipe);
        section["report"] = to_json(run.report);
        sections[tag] = section;

        std::ofstream adv(fs::path(cfg.output_dir) / ("adversarial_" + tag + ".jsonl"));
        adv << detail::meta_line(cfg, "adversarial").dump() << '\n';
        write_outcomes_jsonl(adv, run.outcomes);

        detail::render_attack_section(txt, tag, run.report);
        txt << '\n';
    }
    report["attacks"] = sections;

    detail::write_json_file(fs::path(cfg.output_dir) / "attack_report.json", report);
    detail::write_text_file(fs::path(cfg.output_dir) / "attack_report.txt", txt.str());
    return report;
}

// Renders a report JSON as the human-readable table.
inline std::string render_report(const nlohmann::json& j) {
    const std::string kind = j.value("kind", "");
    std::ostringstream out;
    out << "# config " << j.value("config_hash", "?") << '\n';
    if (kind == "attack_report") {
        for (const auto& [name, section] : j.at("attacks").items()) {
            const AttackReport r = attack_report_from_json(section.at("report"));
            detail::render_attack_section(out, name, r);
            out << '\n';
        }
    } else if (kind == "train_report") {
        const auto& dev = j.at("development");
        const auto cell = [&](const char* key) {
            return dev.at(key).is_null() ? std::string("--")
                                         : pct2(dev.at(key).get<double>() * 100.0);
        };
        out << "train acc %   " << cell("train_accuracy") << '\n';
        out << "test acc %    " << cell("test_accuracy") << '\n';
        out << "precision %   " << cell("precision") << '\n';
        out << "recall %      " << cell("recall") << '\n';
        out << "f1 %          " << cell("f1") << '\n';
    } else if (kind == "eval_report") {
        const auto& m = j.at("metrics");
        for (const auto& [key, value] : m.items()) {
            if (key == "confusion") continue;
            if (value.is_number())
                out << key << " %  " << pct2(value.get<double>() * 100.0) << '\n';
            else if (value.is_null())
                out << key << " %  --\n";
        }
    } else if (kind == "preprocess_summary") {
        out << j.dump(2) << '\n';
    } else {
        throw std::runtime_error("unknown report kind: " + kind);
    }
    return out.str();
}

inline std::string cmd_report(const std::string& report_path) {
    return render_report(detail::read_json_file(report_path));
}

}  // namespace phishkit
