// Acceptance suite: every release criterion runs at its stated tolerance and
// prints one pass/fail line. The process exits non-zero when anything fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <phishkit/experiment.hpp>
#include <phishkit/phishkit.hpp>

#include "../support/oracles.hpp"
#include "../support/synthetic.hpp"

using namespace phishkit;
namespace fs = std::filesystem;

namespace {

std::string data_path(const std::string& name) {
    return std::string(PHISHKIT_DATA_DIR) + "/" + name;
}

int g_failures = 0;

void report(int criterion, const std::string& what, bool ok) {
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// criterion 1: recorded attack-table arithmetic

struct TableRow {
    const char* table;
    const char* attack;
    const char* model;
    std::uint64_t successful, failed, skipped;
    double original, under_attack, success_rate;
    // post-attack correct/incorrect where the printed row is arithmetically
    // self-consistent; post_expected < 0 marks rows without a usable fixture
    long long post_correct = -1, post_incorrect = -1;
    double post_expected = -1.0;
};

const std::vector<TableRow>& table_rows() {
    static const std::vector<TableRow> rows = {
        // baseline preprocessing
        {"baseline", "deepwordbug", "lr", 423, 15, 60, 87.95, 3.01, 96.58, 67, 356, 15.84},
        {"baseline", "deepwordbug", "knn", 89, 327, 82, 83.53, 65.66, 21.39, 15, 74, 16.85},
        {"baseline", "deepwordbug", "rf", 251, 166, 81, 83.73, 33.33, 60.19, 39, 212, 15.53},
        {"baseline", "deepwordbug", "mlp", 318, 142, 38, 92.37, 28.51, 69.13, 58, 260, 18.23},
        {"baseline", "deepwordbug", "svm", 409, 11, 78, 84.34, 2.21, 97.38, 348, 61, 85.08},
        {"baseline", "pruthi", "lr", 35, 403, 60, 87.95, 80.92, 7.99},
        {"baseline", "pruthi", "knn", 61, 355, 82, 83.53, 71.29, 14.66},
        {"baseline", "pruthi", "rf", 251, 166, 81, 83.73, 33.33, 60.19, 39, 212, 15.53},
        {"baseline", "pruthi", "mlp", 28, 432, 38, 92.37, 86.75, 6.09, 2, 26, 7.14},
        {"baseline", "pruthi", "svm", 69, 337, 92, 81.53, 67.67, 17.00, 55, 14, 79.71},
        {"baseline", "textbugger", "lr", 320, 118, 60, 87.95, 23.69, 73.06, 115, 205, 35.94},
        {"baseline", "textbugger", "knn", 107, 309, 82, 83.53, 62.05, 25.72, 18, 89, 16.82},
        {"baseline", "textbugger", "rf", 279, 138, 81, 83.73, 27.71, 66.91, 91, 188, 32.62},
        {"baseline", "textbugger", "mlp", 277, 183, 38, 92.37, 36.75, 60.22, 115, 162, 41.52},
        {"baseline", "textbugger", "svm", 343, 80, 75, 84.94, 16.06, 81.09, 123, 220, 35.86},
        {"baseline", "custom", "lr", 365, 73, 60, 87.95, 14.66, 83.33, 53, 312, 14.52},
        {"baseline", "custom", "knn", 88, 328, 82, 83.53, 65.86, 21.15, 13, 75, 14.77},
        {"baseline", "custom", "rf", 258, 159, 81, 83.73, 31.93, 61.87, 47, 211, 18.21},
        {"baseline", "custom", "mlp", 276, 184, 38, 92.37, 36.95, 60.00, 61, 215, 22.10},
        {"baseline", "custom", "svm", 337, 122, 39, 92.17, 24.50, 73.42, 63, 274, 18.69},
        // advanced preprocessing
        {"advanced", "deepwordbug", "lr", 431, 12, 55, 88.96, 2.41, 97.29, 406, 25, 94.19},
        {"advanced", "deepwordbug", "knn", 90, 149, 260, 47.90, 29.86, 37.66, 49, 56, 46.67},
        {"advanced", "deepwordbug", "rf", 181, 135, 182, 63.45, 27.11, 57.28, 158, 23, 87.29},
        {"advanced", "deepwordbug", "mlp", 412, 23, 63, 87.35, 4.62, 94.71, 366, 46, 88.83},
        {"advanced", "deepwordbug", "svm", 411, 26, 61, 87.75, 5.22, 94.05, 338, 98, 77.52},
        {"advanced", "pruthi", "lr", 25, 418, 55, 88.96, 83.94, 5.64},
        {"advanced", "pruthi", "knn", 72, 164, 262, 47.39, 32.93, 30.51, 34, 38, 47.22},
        {"advanced", "pruthi", "rf", 181, 135, 182, 63.45, 27.11, 57.28, 158, 23, 87.29},
        {"advanced", "pruthi", "mlp", 51, 384, 63, 87.35, 77.11, 11.72, 27, 24, 52.94},
        {"advanced", "pruthi", "svm", 34, 403, 61, 87.75, 80.92, 7.78, 24, 10, 70.58},
        {"advanced", "textbugger", "lr", 415, 28, 55, 88.96, 5.62, 93.68, 232, 183, 55.90},
        {"advanced", "textbugger", "knn", 128, 108, 262, 47.39, 21.69, 54.24, 50, 78, 39.06},
        {"advanced", "textbugger", "rf", 263, 53, 182, 63.45, 10.64, 83.23, 205, 58, 77.94},
        {"advanced", "textbugger", "mlp", 408, 27, 63, 87.35, 5.42, 93.79, 257, 151, 62.99},
        {"advanced", "textbugger", "svm", 335, 119, 44, 91.16, 23.90, 73.79, 227, 108, 67.76},
        {"advanced", "custom", "lr", 374, 69, 55, 88.96, 13.86, 84.42, 350, 24, 93.58},
        {"advanced", "custom", "knn", 104, 132, 262, 47.39, 26.51, 44.07, 46, 58, 44.23},
        {"advanced", "custom", "rf", 182, 134, 182, 63.45, 26.91, 57.59, 161, 21, 88.46},
        {"advanced", "custom", "mlp", 382, 53, 63, 87.35, 10.64, 87.82, 340, 42, 89.00},
        {"advanced", "custom", "svm", 381, 39, 78, 84.34, 7.83, 90.71, 331, 50, 86.87},
    };
    return rows;
}

bool criterion_1() {
    std::size_t checked = 0, post_checked = 0;
    for (const auto& row : table_rows()) {
        const auto r = attack_report_from_counts(row.successful, row.failed, row.skipped);
        const bool ok = std::abs(r.original_accuracy_pct - row.original) <= 0.01 &&
                        std::abs(r.accuracy_under_attack_pct - row.under_attack) <= 0.01 &&
                        r.attack_success_rate_pct &&
                        std::abs(*r.attack_success_rate_pct - row.success_rate) <= 0.01;
        if (!ok) {
            std::printf("  row %s/%s/%s mismatch: %.4f %.4f %.4f\n", row.table, row.attack,
                        row.model, r.original_accuracy_pct, r.accuracy_under_attack_pct,
                        r.attack_success_rate_pct.value_or(-1.0));
            return false;
        }
        ++checked;
        if (row.post_expected >= 0.0) {
            const PostAttackCounts post{static_cast<std::uint64_t>(row.post_correct),
                                        static_cast<std::uint64_t>(row.post_incorrect)};
            if (std::abs(*post.accuracy_pct() - row.post_expected) > 0.01) {
                std::printf("  post row %s/%s/%s mismatch: %.4f vs %.2f\n", row.table,
                            row.attack, row.model, *post.accuracy_pct(), row.post_expected);
                return false;
            }
            ++post_checked;
        }
    }
    std::printf("  %zu rows + %zu post-attack rows within 0.01 pp\n", checked, post_checked);
    return checked == 40;
}

// ---------------------------------------------------------------------------
// criterion 2: tf-idf against the direct evaluator

bool criterion_2() {
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> n_docs(1, 10), doc_len(1, 30), letter(0, 4);
    std::size_t corpora = 0;
    double worst = 0.0;
    for (int round = 0; round < 120; ++round) {
        std::vector<TokenStream> corpus(static_cast<std::size_t>(n_docs(rng)));
        for (auto& doc : corpus) {
            const int len = doc_len(rng);
            for (int i = 0; i < len; ++i)
                doc.push_back(std::string(1, static_cast<char>('a' + letter(rng))));
        }
        const auto m = fit_tfidf(corpus, 1, 3, 1u << 20);
        for (const auto& doc : corpus) {
            const auto got = transform_tfidf(doc, m).to_dense();
            const auto expected = oracle::tfidf_reference(corpus, doc, 1, 3);
            if (expected.size() != m.vocabulary.size()) return false;
            for (const auto& [gram, value] : expected) {
                const auto it = m.vocabulary.find(gram);
                if (it == m.vocabulary.end()) return false;
                worst = std::max(worst, std::abs(got[it->second] - value));
                if (std::abs(got[it->second] - value) >= 1e-12) return false;
            }
        }
        ++corpora;
    }
    std::printf("  %zu corpora, worst |delta| = %.2e\n", corpora, worst);
    return corpora >= 100;
}

// ---------------------------------------------------------------------------
// criterion 3: edit distance against the exhaustive reference

bool criterion_3() {
    std::mt19937_64 rng(3003);
    for (int i = 0; i < 1000; ++i) {
        const auto a = oracle::random_word(rng, 12);
        const auto b = oracle::random_word(rng, 12, 0, i % 2 ? 4 : 26);
        if (levenshtein(a, b) != oracle::lev_reference(a, b)) return false;
    }
    for (int i = 0; i < 1000; ++i) {
        const auto a = oracle::random_word(rng, 9, 0, 6);
        const auto b = oracle::random_word(rng, 9, 0, 6);
        const auto c = oracle::random_word(rng, 9, 0, 6);
        const int ab = levenshtein(a, b);
        if (ab != levenshtein(b, a)) return false;
        if ((ab == 0) != (a == b)) return false;
        if (levenshtein(a, c) > ab + levenshtein(b, c)) return false;
    }
    std::printf("  1000 reference pairs + 1000 metric-axiom triples\n");
    return true;
}

// ---------------------------------------------------------------------------
// criterion 4: segmentation against brute-force enumeration

bool criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    const Lexicon lex = Lexicon::from_file(data_path("lexicon.txt"));
    std::vector<std::string> words;
    {
        std::ifstream in(data_path("lexicon.txt"));
        std::string line;
        while (std::getline(in, line)) {
            const auto tab = line.find('\t');
            if (tab != std::string::npos) words.push_back(line.substr(0, tab));
        }
    }
    std::mt19937_64 rng(444);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    int checked = 0;
    while (checked < 200) {
        std::string token = words[pick(rng)] + words[pick(rng)];
        if (rng() % 2 == 0) token += words[pick(rng)];
        if (token.size() > 18) continue;
        ++checked;
        if (segment_word(token, lex) != oracle::segment_reference(token, lex)) {
            std::printf("  mismatch on '%s'\n", token.c_str());
            return false;
        }
    }
    const double secs = seconds_since(t0);
    std::printf("  200 concatenations in %.2f s (budget 10 s)\n", secs);
    return secs < 10.0;
}

// ---------------------------------------------------------------------------
// criterion 5: classifier sanity battery

bool criterion_5() {
    bool ok = true;
    const auto wrap = [](const std::vector<std::vector<double>>& rows) {
        std::vector<FeatureVector> X;
        for (const auto& r : rows) X.push_back(FeatureVector::dense(r));
        return X;
    };
    const auto acc = [](const TrainedModel& m, const std::vector<FeatureVector>& X,
                        const std::vector<int>& y) {
        std::size_t hit = 0;
        for (std::size_t i = 0; i < X.size(); ++i) hit += predict_label(m, X[i]) == y[i];
        return static_cast<double>(hit) / static_cast<double>(X.size());
    };

    const auto blobs = oracle::blobs(100, 2.0, 51);
    const auto blobs_X = wrap(blobs.X);
    TrainConfig cfg;
    cfg.seed = 5;
    const double lr_acc = acc(train_logreg(blobs_X, blobs.y, cfg), blobs_X, blobs.y);
    ok &= lr_acc >= 0.99;

    TrainConfig lin;
    lin.svm_kernel = SvmKernel::linear;
    const double svml_acc = acc(train_svm(blobs_X, blobs.y, lin), blobs_X, blobs.y);
    ok &= svml_acc >= 0.99;

    const auto circles = oracle::circles(120, 52);
    const auto circles_X = wrap(circles.X);
    TrainConfig rbf;
    const double rbf_acc = acc(train_svm(circles_X, circles.y, rbf), circles_X, circles.y);
    const double lin_circle_acc = acc(train_svm(circles_X, circles.y, lin), circles_X, circles.y);
    ok &= rbf_acc >= 0.98 && lin_circle_acc <= 0.70;

    const auto xor_train = oracle::xor_clusters(100, 53);
    const auto xor_test = oracle::xor_clusters(60, 54);
    TrainConfig mlp_cfg;
    mlp_cfg.seed = 9;
    mlp_cfg.mlp_epochs = 250;
    const double mlp_acc =
        acc(train_mlp(wrap(xor_train.X), xor_train.y, mlp_cfg), wrap(xor_train.X), xor_train.y);
    ok &= mlp_acc == 1.0;

    TrainConfig rf_cfg;
    rf_cfg.rf_trees = 100;
    rf_cfg.seed = 2;
    const double rf_acc = acc(train_random_forest(wrap(xor_train.X), xor_train.y, rf_cfg),
                              wrap(xor_test.X), xor_test.y);
    ok &= rf_acc >= 0.95;

    TrainConfig k1;
    k1.knn_k = 1;
    const double knn_acc =
        acc(train_knn(wrap(xor_train.X), xor_train.y, k1), wrap(xor_train.X), xor_train.y);
    ok &= knn_acc == 1.0;

    // gradients against central finite differences on a 5-point batch
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::vector<double>> gx;
    std::vector<int> gy;
    for (int i = 0; i < 5; ++i) {
        gx.push_back({u(rng), u(rng), u(rng)});
        gy.push_back(i % 2);
    }
    MlpModel net = init_mlp(3, 9, 77);
    MlpGradients grads;
    mlp_loss_and_gradients(net, gx, gy, 1e-4, &grads);
    double worst_rel = 0.0;
    const auto probe = [&](double& slot, double analytic) {
        const double keep = slot, h = 1e-6;
        slot = keep + h;
        const double up = mlp_loss_and_gradients(net, gx, gy, 1e-4, nullptr);
        slot = keep - h;
        const double down = mlp_loss_and_gradients(net, gx, gy, 1e-4, nullptr);
        slot = keep;
        const double numeric = (up - down) / (2.0 * h);
        const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
        worst_rel = std::max(worst_rel, std::abs(numeric - analytic) / scale);
    };
    for (std::size_t i = 0; i < net.W1.size(); ++i) probe(net.W1[i], grads.W1[i]);
    for (std::size_t i = 0; i < net.b1.size(); ++i) probe(net.b1[i], grads.b1[i]);
    for (std::size_t i = 0; i < net.W2.size(); ++i) probe(net.W2[i], grads.W2[i]);
    probe(net.b2, grads.b2);
    ok &= worst_rel < 1e-4;

    // kkt conditions on the rbf solution
    TrainConfig kkt_cfg;
    kkt_cfg.svm_C = 5.0;
    SvmTrainInfo info;
    const auto svm_model = train_svm(circles_X, circles.y, kkt_cfg, &info);
    const auto& sm = std::get<SvmModel>(svm_model.impl);
    bool kkt_ok = true;
    for (std::size_t i = 0; i < circles_X.size(); ++i) {
        const double yv = circles.y[i] == 1 ? 1.0 : -1.0;
        const double yf = yv * sm.decision(circles.X[i]);
        const double a = info.alphas[i];
        if (a < 1e-8)
            kkt_ok &= yf >= 1.0 - kkt_cfg.svm_tol - 1e-6;
        else if (a > kkt_cfg.svm_C - 1e-8)
            kkt_ok &= yf <= 1.0 + kkt_cfg.svm_tol + 1e-6;
        else
            kkt_ok &= std::abs(yf - 1.0) <= kkt_cfg.svm_tol + 1e-6;
    }
    ok &= kkt_ok;

    std::printf(
        "  lr %.3f svm-lin %.3f svm-rbf %.3f (linear-on-circles %.3f) mlp %.3f rf %.3f "
        "knn %.3f | grad rel err %.2e | kkt %s\n",
        lr_acc, svml_acc, rbf_acc, lin_circle_acc, mlp_acc, rf_acc, knn_acc, worst_rel,
        kkt_ok ? "ok" : "violated");
    return ok;
}

// ---------------------------------------------------------------------------
// criteria 6-8 share one end-to-end pipeline

struct PipelineArtifacts {
    Dataset train, test;
    std::vector<TokenStream> train_docs, test_docs;
    PreprocessConfig level1_cfg, level2_cfg;
    Lexicon lexicon;
    StopwordSet stopwords;
    EmbeddingTable w2v;
    EmbeddingTable glove;
    TfidfModel tfidf;
    TrainedModel lr_on_w2v;
};

PipelineArtifacts build_pipeline() {
    PipelineArtifacts art;
    const Dataset corpus = synth::make_corpus({.per_class = 200, .seed = 4242});
    SplitSpec spec{.train_fraction = 0.8, .seed = 99};
    std::tie(art.train, art.test) = stratified_split(corpus, spec);

    art.lexicon = Lexicon::from_file(data_path("lexicon.txt"));
    art.stopwords = std::make_shared<const std::unordered_set<std::string>>(
        load_stopwords(data_path("stopwords.txt")));
    art.level1_cfg.level = Level::level1;
    art.level1_cfg.stopwords = *art.stopwords;
    art.level2_cfg = art.level1_cfg;
    art.level2_cfg.level = Level::level1_and_2;

    for (const auto& e : art.train.emails)
        art.train_docs.push_back(preprocess(e.text(), art.level1_cfg));
    for (const auto& e : art.test.emails)
        art.test_docs.push_back(preprocess(e.text(), art.level1_cfg));

    Word2VecParams w2v;
    w2v.dim = 48;
    w2v.epochs = 10;
    w2v.seed = 7;
    art.w2v = train_word2vec(art.train_docs, w2v);

    // the third featurizer goes through the embedding text format end to end
    Word2VecParams gl = w2v;
    gl.dim = 40;
    gl.seed = 17;
    const auto side_table = train_word2vec(art.train_docs, gl);
    const auto vec_path = fs::temp_directory_path() / "pk_acceptance_glove.vec";
    save_embeddings(side_table, vec_path.string());
    art.glove = load_glove(vec_path.string());
    fs::remove(vec_path);

    art.tfidf = fit_tfidf(art.train_docs, 1, 3, 100);
    return art;
}

TrainConfig model_config(ModelVariant variant) {
    TrainConfig cfg;
    cfg.seed = 33;
    switch (variant) {
        case ModelVariant::logreg:
            cfg.lr_C = 100.0;
            cfg.lr_epochs = 2000;
            break;
        case ModelVariant::random_forest: cfg.rf_trees = 60; break;
        case ModelVariant::svm: break;  // C=10, rbf, gamma scale
        case ModelVariant::mlp:
            cfg.mlp_epochs = 120;
            cfg.mlp_patience = 8;
            break;
        case ModelVariant::knn: break;  // k=3, distance weighting
    }
    return cfg;
}

bool criterion_6(PipelineArtifacts& art) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<int> y_train, y_test;
    for (const auto& e : art.train.emails) y_train.push_back(e.label);
    for (const auto& e : art.test.emails) y_test.push_back(e.label);

    struct Combo {
        const char* featurizer;
        std::vector<FeatureVector> train_X, test_X;
    };
    std::vector<Combo> combos;
    const auto featurize_with = [&](const char* name, auto&& fn) {
        Combo c;
        c.featurizer = name;
        for (const auto& d : art.train_docs) c.train_X.push_back(fn(d));
        for (const auto& d : art.test_docs) c.test_X.push_back(fn(d));
        combos.push_back(std::move(c));
    };
    featurize_with("tfidf", [&](const TokenStream& d) { return transform_tfidf(d, art.tfidf); });
    featurize_with("word2vec", [&](const TokenStream& d) { return embed_document(d, art.w2v); });
    featurize_with("glove", [&](const TokenStream& d) { return embed_document(d, art.glove); });

    bool ok = true;
    double min_f1 = 1.0;
    for (const auto& combo : combos) {
        for (const auto variant : {ModelVariant::logreg, ModelVariant::random_forest,
                                   ModelVariant::svm, ModelVariant::mlp, ModelVariant::knn}) {
            const auto model =
                train_model(variant, combo.train_X, y_train, model_config(variant));
            std::vector<int> pred;
            for (const auto& x : combo.test_X) pred.push_back(predict_label(model, x));
            const auto score = f1(confusion(y_test, pred)).value_or(0.0);
            min_f1 = std::min(min_f1, score);
            if (score < 0.90) {
                std::printf("  %s + %s: f1 %.4f below 0.90\n", combo.featurizer,
                            to_string(variant).c_str(), score);
                ok = false;
            }
            if (variant == ModelVariant::logreg && std::string(combo.featurizer) == "word2vec")
                art.lr_on_w2v = model;
        }
    }
    const double secs = seconds_since(t0);
    std::printf("  15 featurizer/model combos, min held-out f1 %.4f, %.1f s (budget 300 s)\n",
                min_f1, secs);
    return ok && secs < 300.0;
}

struct AttackPhase {
    AttackRunResult deepwordbug;
    AttackRunResult custom;
};

bool criterion_7(const PipelineArtifacts& art, AttackPhase& phase) {
    VictimPipeline victim(art.level1_cfg, nullptr, art.w2v, art.lr_on_w2v);

    const auto dwb = make_deepwordbug(art.stopwords);
    phase.deepwordbug = run_attack(dwb, victim, art.test, 1.0, 4096, 5000);
    const auto custom = make_custom_attack(art.stopwords);
    phase.custom = run_attack(custom, victim, art.test, 1.0, 4096, 5000);

    const auto& report = phase.deepwordbug.report;
    const double rate = report.attack_success_rate_pct.value_or(0.0);
    bool ok = rate >= 50.0;

    // independent re-verification of every reported success, both recipes
    std::size_t verified = 0, successes = 0;
    VictimPipeline fresh(art.level1_cfg, nullptr, art.w2v, art.lr_on_w2v);
    const auto verify = [&](const AttackRunResult& run, const AttackRecipe& recipe) {
        for (const auto& o : run.outcomes) {
            if (o.status != AttackStatus::success) continue;
            ++successes;
            bool good = fresh.score_raw(o.perturbed_text).label == 0;
            const auto orig = attack_tokens(o.original_text);
            const auto pert = attack_tokens(o.perturbed_text);
            good &= orig.size() == pert.size();
            if (recipe.constraints.max_levenshtein)
                good &= oracle::lev_reference(join_tokens(orig), join_tokens(pert)) <=
                        *recipe.constraints.max_levenshtein;
            std::size_t diff = 0;
            for (std::size_t i = 0; i < orig.size() && good; ++i) {
                if (orig[i] == pert[i]) continue;
                ++diff;
                good &= !art.stopwords->count(orig[i]);  // stopword protection
            }
            good &= diff == o.modified_positions.size();  // one change per position
            if (good) ++verified;
        }
    };
    verify(phase.deepwordbug, dwb);
    verify(phase.custom, custom);
    ok &= successes > 0 && verified == successes;

    std::printf("  deepwordbug success rate %.2f%% vs lr victim; %zu/%zu successes re-verified\n",
                rate, verified, successes);
    return ok;
}

bool criterion_8(const PipelineArtifacts& art, const AttackPhase& phase) {
    VictimPipeline level1(art.level1_cfg, &art.lexicon, art.w2v, art.lr_on_w2v);
    VictimPipeline level2(art.level2_cfg, &art.lexicon, art.w2v, art.lr_on_w2v);

    bool ok = true;
    for (const auto* run : {&phase.deepwordbug, &phase.custom}) {
        const auto successes = successful_outcomes(run->outcomes);
        if (successes.empty()) {
            std::printf("  no successes to recover\n");
            return false;
        }
        const auto weak = recover_and_reclassify(successes, level1);
        const auto strong = recover_and_reclassify(successes, level2);
        const double weak_pct = weak.accuracy_pct().value_or(0.0);
        const double strong_pct = strong.accuracy_pct().value_or(0.0);
        std::printf("  %s: post-attack accuracy level1 %.2f%% vs level1+2 %.2f%% (margin %.2f)\n",
                    run == &phase.deepwordbug ? "deepwordbug" : "custom", weak_pct, strong_pct,
                    strong_pct - weak_pct);
        ok &= strong_pct > weak_pct && (strong_pct - weak_pct) >= 20.0;
    }
    return ok;
}

// ---------------------------------------------------------------------------
// criterion 9: byte-identical reruns of the full experiment config

bool criterion_9() {
    const auto dir = fs::temp_directory_path() / "pk_acceptance_exp";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto train_path = dir / "corpus.jsonl";
    save_dataset(synth::make_corpus({.per_class = 200, .seed = 4242}), train_path.string(),
                 DataFormat::jsonl);

    nlohmann::json j;
    j["data"]["train"] = {{"path", train_path.string()}, {"format", "jsonl"}};
    j["preprocess"] = {{"level", "level1"},
                       {"stopwords", data_path("stopwords.txt")},
                       {"lexicon", data_path("lexicon.txt")}};
    j["featurizer"] = {{"kind", "word2vec"}, {"word2vec", {{"dim", 48}, {"epochs", 10}}}};
    j["model"] = {{"variant", "logreg"}, {"config", {{"C", 100}, {"epochs", 2000}}}};
    j["split"] = {{"train_fraction", 0.8}};
    j["attack"] = {{"recipes", {"deepwordbug", "custom"}},
                   {"sample_fraction", 1.0},
                   {"query_budget", 5000}};
    j["seeds"] = {{"split", 99}, {"folds", 2}, {"model", 33}, {"word2vec", 7}, {"attack", 4096}};
    j["output_dir"] = (dir / "out").string();

    const auto cfg = parse_experiment_config(j);
    const std::vector<std::string> files = {
        "train_report.json", "attack_report.json", "adversarial_deepwordbug.jsonl",
        "adversarial_custom.jsonl", "model.json", "featurizer.json", "embeddings.vec",
        "roc_test.csv"};
    const auto slurp_all = [&] {
        std::vector<std::string> contents;
        for (const auto& f : files) {
            std::ifstream in(dir / "out" / f, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            contents.push_back(ss.str());
        }
        return contents;
    };

    cmd_train(cfg);
    cmd_attack(cfg);
    const auto first = slurp_all();
    cmd_train(cfg);
    cmd_attack(cfg);
    const auto second = slurp_all();
    fs::remove_all(dir);

    for (std::size_t i = 0; i < files.size(); ++i) {
        if (first[i].empty()) {
            std::printf("  missing output file %s\n", files[i].c_str());
            return false;
        }
        if (first[i] != second[i]) {
            std::printf("  %s differs between reruns\n", files[i].c_str());
            return false;
        }
    }
    std::printf("  %zu experiment files byte-identical across reruns\n", files.size());
    return true;
}

// ---------------------------------------------------------------------------
// criterion 10: roc auc against pairwise concordance

bool criterion_10() {
    std::mt19937_64 rng(1010);
    std::uniform_int_distribution<int> n(2, 20), label(0, 1), bucket(0, 6);
    int sets = 0;
    while (sets < 100) {
        std::vector<int> y;
        std::vector<double> s;
        const int count = n(rng);
        for (int i = 0; i < count; ++i) {
            y.push_back(label(rng));
            s.push_back(bucket(rng) / 6.0);
        }
        if (!std::count(y.begin(), y.end(), 1) || !std::count(y.begin(), y.end(), 0)) continue;
        ++sets;
        if (std::abs(roc(y, s).auc - oracle::auc_concordance(y, s)) >= 1e-9) return false;
    }
    const bool perfect = roc({1, 1, 0, 0}, {0.9, 0.8, 0.2, 0.1}).auc == 1.0;
    const bool constant = roc({1, 0, 1, 0}, {0.4, 0.4, 0.4, 0.4}).auc == 0.5;
    std::printf("  100 random score sets within 1e-9; perfect = 1.0, constant = 0.5\n");
    return perfect && constant;
}

}  // namespace

int main() {
    std::printf("acceptance suite\n================\n");

    report(1, "attack-table metric fixtures reproduce within 0.01 pp", criterion_1());
    report(2, "tf-idf matches the direct-formula evaluator (<1e-12)", criterion_2());
    report(3, "edit distance matches the exhaustive reference + metric axioms", criterion_3());
    report(4, "segmentation matches brute-force split enumeration", criterion_4());
    report(5, "classifier sanity battery (separability, gradients, kkt)", criterion_5());

    PipelineArtifacts art = build_pipeline();
    const bool c6 = criterion_6(art);
    report(6, "end-to-end f1 >= 0.90 for all 15 featurizer/model combos", c6);

    AttackPhase phase;
    bool c7 = false, c8 = false;
    if (c6) {
        c7 = criterion_7(art, phase);
        c8 = criterion_8(art, phase);
    }
    report(7, "deepwordbug >= 50% success vs lr victim; successes re-verified", c7);
    report(8, "level 1+2 recovery beats level 1 by >= 20 pp (homoglyph recipes)", c8);

    report(9, "identical seeds give byte-identical experiment reports", criterion_9());
    report(10, "roc auc equals pairwise concordance (<1e-9)", criterion_10());

    std::printf("================\n%s (%d failure%s)\n", g_failures ? "FAILED" : "PASSED",
                g_failures, g_failures == 1 ? "" : "s");
    return g_failures == 0 ? 0 : 1;
}
