#include <catch2/catch.hpp>

#include <random>
#include <sstream>

#include <phishkit/metrics.hpp>

#include "support/oracles.hpp"

using namespace phishkit;

TEST_CASE("confusion matrix counts with phishing as positive", "[metrics]") {
    auto cm = confusion({1, 0}, {1, 0});
    CHECK(cm.tp == 1);
    CHECK(cm.tn == 1);
    CHECK(cm.fp == 0);
    CHECK(cm.fn == 0);

    cm = confusion({0, 0, 0}, {1, 1, 1});
    CHECK(cm.fp == 3);

    cm = confusion({1, 1, 0}, {0, 1, 1});
    CHECK(cm.tp == 1);
    CHECK(cm.fn == 1);
    CHECK(cm.fp == 1);
    CHECK(cm.tn == 0);

    CHECK_THROWS_AS(confusion({1}, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(confusion({}, {}), std::invalid_argument);
}

TEST_CASE("accuracy, precision, recall, f1", "[metrics]") {
    const ConfusionMatrix cm{2, 6, 1, 1};
    CHECK(accuracy(cm) == Approx(0.8));
    CHECK(*precision(cm) == Approx(2.0 / 3.0));
    CHECK(*recall(cm) == Approx(2.0 / 3.0));
    CHECK(*f1(cm) == Approx(2.0 / 3.0));

    const ConfusionMatrix perfect{5, 5, 0, 0};
    CHECK(accuracy(perfect) == 1.0);
    CHECK(*precision(perfect) == 1.0);
    CHECK(*recall(perfect) == 1.0);
    CHECK(*f1(perfect) == 1.0);

    const ConfusionMatrix no_pred{0, 4, 0, 2};
    CHECK(!precision(no_pred).has_value());
    CHECK(!f1(no_pred).has_value());
    const ConfusionMatrix no_pos{0, 4, 2, 0};
    CHECK(!recall(no_pos).has_value());
}

TEST_CASE("f1 stays within the harmonic-mean envelope", "[metrics][property]") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<std::uint64_t> n(0, 40);
    for (int i = 0; i < 300; ++i) {
        const ConfusionMatrix cm{n(rng), n(rng), n(rng), n(rng)};
        if (cm.total() == 0) continue;
        CHECK(accuracy(cm) >= 0.0);
        CHECK(accuracy(cm) <= 1.0);
        const auto p = precision(cm), r = recall(cm), f = f1(cm);
        if (p && r && f) {
            CHECK(*f <= std::max(*p, *r) + 1e-12);
            CHECK(*f >= 0.0);
            CHECK(*f <= 2.0 * std::min(*p, *r) + 1e-12);
        }
    }
}

TEST_CASE("roc endpoints, ordering and trivial cases", "[metrics]") {
    const auto perfect = roc({1, 1, 0, 0}, {0.9, 0.8, 0.2, 0.1});
    CHECK(perfect.auc == Approx(1.0));
    CHECK(perfect.points.front().fpr == 0.0);
    CHECK(perfect.points.front().tpr == 0.0);
    CHECK(perfect.points.back().fpr == 1.0);
    CHECK(perfect.points.back().tpr == 1.0);

    const auto constant = roc({1, 0, 1, 0}, {0.5, 0.5, 0.5, 0.5});
    CHECK(constant.auc == Approx(0.5));
    REQUIRE(constant.points.size() == 2);  // one threshold group plus origin

    for (std::size_t i = 1; i < perfect.points.size(); ++i)
        CHECK(perfect.points[i].fpr >= perfect.points[i - 1].fpr);

    CHECK_THROWS_AS(roc({1, 1}, {0.3, 0.4}), std::invalid_argument);
}

TEST_CASE("auc equals pairwise concordance", "[metrics][oracle]") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> n(2, 20), label(0, 1);
    std::uniform_int_distribution<int> bucket(0, 5);  // coarse scores force ties
    for (int round = 0; round < 200; ++round) {
        std::vector<int> y;
        std::vector<double> s;
        const int count = n(rng);
        for (int i = 0; i < count; ++i) {
            y.push_back(label(rng));
            s.push_back(bucket(rng) / 5.0);
        }
        if (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), 0) == 0)
            continue;
        CHECK(roc(y, s).auc == Approx(oracle::auc_concordance(y, s)).margin(1e-9));
    }
}

TEST_CASE("six-sample roc case against the concordance oracle", "[metrics][oracle]") {
    const std::vector<int> y = {1, 1, 1, 0, 0, 0};
    const std::vector<double> s = {0.9, 0.6, 0.6, 0.6, 0.2, 0.1};
    CHECK(roc(y, s).auc == Approx(oracle::auc_concordance(y, s)).margin(1e-12));
}

TEST_CASE("attack report reproduces the recorded result-table arithmetic", "[metrics]") {
    const auto r = attack_report_from_counts(423, 15, 60);
    CHECK(r.original_accuracy_pct == Approx(87.95).margin(0.01));
    CHECK(r.accuracy_under_attack_pct == Approx(3.01).margin(0.01));
    CHECK(*r.attack_success_rate_pct == Approx(96.58).margin(0.01));

    const PostAttackCounts post{406, 25};
    CHECK(*post.accuracy_pct() == Approx(94.19).margin(0.01));
}

TEST_CASE("attack report aggregates outcome lists", "[metrics]") {
    std::vector<OutcomeStats> outcomes;
    outcomes.push_back({AttackStatus::success, 100, 20.0, 30});
    outcomes.push_back({AttackStatus::success, 200, 40.0, 20});
    outcomes.push_back({AttackStatus::failed, 300, 0.0, 25});
    outcomes.push_back({AttackStatus::skipped, 1, 0.0, 25});

    const auto r = attack_report(outcomes);
    CHECK(r.successful == 2);
    CHECK(r.failed == 1);
    CHECK(r.skipped == 1);
    CHECK(r.original_accuracy_pct == Approx(75.0));
    CHECK(r.accuracy_under_attack_pct == Approx(25.0));
    CHECK(*r.attack_success_rate_pct == Approx(200.0 / 3.0));
    CHECK(*r.avg_perturbed_word_pct == Approx(30.0));  // successes only
    CHECK(r.avg_words_per_input == Approx(25.0));      // all samples
    CHECK(*r.avg_queries == Approx(200.0));            // attempted only

    // no successes: attack success rate defined, zero; accuracy preserved
    const auto none = attack_report_from_counts(0, 10, 0);
    CHECK(*none.attack_success_rate_pct == 0.0);
    CHECK(none.accuracy_under_attack_pct == none.original_accuracy_pct);

    // nothing attempted: rate undefined
    const auto skipped_only = attack_report_from_counts(0, 0, 5);
    CHECK(!skipped_only.attack_success_rate_pct.has_value());
}

TEST_CASE("attack report identities hold for random counts", "[metrics][property]") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::uint64_t> n(0, 500);
    for (int i = 0; i < 300; ++i) {
        const auto s = n(rng), f = n(rng), k = n(rng);
        if (s + f + k == 0) continue;
        const auto r = attack_report_from_counts(s, f, k);
        const double total = static_cast<double>(s + f + k);
        CHECK(r.original_accuracy_pct ==
              Approx(100.0 * static_cast<double>(s + f) / total).margin(1e-9));
        CHECK(r.accuracy_under_attack_pct ==
              Approx(100.0 * static_cast<double>(f) / total).margin(1e-9));
        if (s + f > 0)
            CHECK(*r.attack_success_rate_pct ==
                  Approx(100.0 * static_cast<double>(s) / static_cast<double>(s + f))
                      .margin(1e-9));
        else
            CHECK(!r.attack_success_rate_pct.has_value());
    }
}

TEST_CASE("reports serialize losslessly", "[metrics]") {
    std::vector<OutcomeStats> outcomes;
    outcomes.push_back({AttackStatus::success, 10, 12.5, 8});
    outcomes.push_back({AttackStatus::failed, 20, 0.0, 9});
    auto r = attack_report(outcomes, PostAttackCounts{1, 1});
    const auto back = attack_report_from_json(to_json(r));
    CHECK(back.successful == r.successful);
    CHECK(back.failed == r.failed);
    CHECK(back.skipped == r.skipped);
    CHECK(*back.avg_perturbed_word_pct == Approx(*r.avg_perturbed_word_pct));
    CHECK(*back.avg_queries == Approx(*r.avg_queries));
    REQUIRE(back.post_attack.has_value());
    CHECK(back.post_attack->correct == 1);
    CHECK(back.post_attack->incorrect == 1);

    std::ostringstream csv;
    attack_report_to_csv(csv, r);
    CHECK(csv.str().find("attack_success_rate_pct,50.00") != std::string::npos);
}

TEST_CASE("roc exports csv points", "[metrics]") {
    const auto curve = roc({1, 0}, {0.9, 0.1});
    std::ostringstream out;
    roc_to_csv(out, curve);
    CHECK(out.str().rfind("fpr,tpr,threshold\n", 0) == 0);
}

TEST_CASE("two-decimal rendering matches table conventions", "[metrics]") {
    CHECK(pct2(87.951807) == "87.95");
    CHECK(pct2(std::optional<double>{}) == "--");
    CHECK(pct2(3.0120481) == "3.01");
}
