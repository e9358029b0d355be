// Classical booster tests.  The weight kernel is held to inline
// recomputations of its own defining formulas, the rejection sampler to
// frequency statistics, and full runs to an independent execution of the
// perfect-learner recurrence, where every round's weights have a closed form.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cfloat>
#include <cmath>
#include <sstream>
#include <vector>

#include "qsb/adaboost.hpp"
#include "qsb/dataset.hpp"
#include "qsb/errors.hpp"
#include "qsb/numeric.hpp"
#include "qsb/report.hpp"
#include "qsb/smoothboost.hpp"

using namespace qsb;

TEST_CASE("margin offset formula and its domain") {
    CHECK(default_theta(0.1) == doctest::Approx(1.0 / 21.0).epsilon(1e-15));
    CHECK(default_theta(0.25) == 0.25 / 2.25);
    // gamma / (2 + gamma) stays strictly under its sup of 1/5 on (0, 1/2)
    for (double g : {0.01, 0.1, 0.2, 0.3, 0.4, 0.49, 0.499}) {
        CHECK(default_theta(g) == g / (2.0 + g));
        CHECK(default_theta(g) < 0.2);
    }
    CHECK_THROWS_AS(default_theta(0.5), DomainError); // the sup itself is out of domain
    CHECK_THROWS_AS(default_theta(0.0), DomainError);
    CHECK(0.5 / (2.0 + 0.5) == 0.2); // the formula's limit value at the excluded endpoint
}

TEST_CASE("weight kernel single steps") {
    CHECK(margin_step(0.0, 1.0, 0.2) == 0.8);
    CHECK(margin_step(-0.5, -1.0, 0.2) == doctest::Approx(-1.7).epsilon(1e-15));

    // (1-gamma)^(margin/2) against an independent evaluation
    CHECK(weight_from_margin(0.8, 0.5) == doctest::Approx(0.757858283255199).epsilon(1e-12));
    CHECK(weight_from_margin(0.8, 0.5) == doctest::Approx(std::pow(0.5, 0.4)).epsilon(1e-14));
    CHECK(weight_from_margin(3.0, 0.1) == doctest::Approx(std::pow(0.9, 1.5)).epsilon(1e-14));

    CHECK(weight_from_margin(-1.7, 0.2) == 1.0); // negative margin pins the weight at 1
    CHECK(weight_from_margin(0.0, 0.3) == 1.0);  // (1-gamma)^0

    // underflow clamps to the smallest positive normal, never to zero
    const double tiny = weight_from_margin(1e7, 0.5);
    CHECK(tiny == DBL_MIN);
    CHECK(tiny > 0.0);
}

TEST_CASE("weight equals one exactly when the margin is nonpositive") {
    const LabeledSample s = draw_sample(make_majority_task(4, 3), 16, 8);
    WeightState state(16);
    Rng rng(12, stream::checks);
    const double gamma = 0.3, theta = default_theta(gamma);
    for (int round = 0; round < 30; ++round) {
        const DecisionStump h(static_cast<int>(rng.uniform_index(4)), rng.uniform01(),
                              rng.bernoulli(0.5) ? 1 : -1);
        state.update(s, h, gamma, theta);
        for (std::size_t i = 0; i < 16; ++i) {
            CHECK((state.weights[i] == 1.0) == (state.margins[i] <= 0.0));
            CHECK(state.weights[i] == weight_from_margin(state.margins[i], gamma));
        }
    }
}

TEST_CASE("worked kernel trace: perfect learner at gamma one-half") {
    // gamma = 0.5 with theta = gamma/(2+gamma) = 0.2, m = 4, kappa = 0.25.
    // Every example is classified correctly each round, so all margins move
    // in lockstep: margin_t = t * 0.8, weight_t = 0.5^(0.4 t), and the run
    // would stop at the first check with 4 * weight < 1.  The t where
    // 0.5^(0.4t) crosses 0.25 lands exactly on the boundary (t = 5 gives
    // 2^-2), so the inline recurrence below is the arbiter, not the prose.
    LabeledSample s;
    s.examples = {{{0.1}, 1}, {{0.2}, 1}, {{0.3}, 1}, {{0.4}, 1}};
    const FunctionHypothesis truth("truth", [](PointView) { return 1; });
    const double gamma = 0.5, theta = 0.2, kappa = 0.25;

    // independent recurrence in plain arithmetic
    double margin = 0.0;
    std::vector<double> margins_ref, weights_ref;
    int t_ref = 0;
    for (;;) {
        margin = (margin + 1.0) - theta;
        const double w = margin < 0.0 ? 1.0 : std::exp((margin / 2.0) * std::log1p(-gamma));
        margins_ref.push_back(margin);
        weights_ref.push_back(w);
        ++t_ref;
        if (4.0 * w < kappa * 4.0) break;
        REQUIRE(t_ref < 20);
    }
    CHECK((t_ref == 5 || t_ref == 6)); // the boundary round, whichever way rounding lands

    WeightState state(4);
    for (int t = 0; t < t_ref; ++t) {
        state.update(s, truth, gamma, theta);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(state.margins[i] == margins_ref[static_cast<std::size_t>(t)]);
            CHECK(state.weights[i] == weights_ref[static_cast<std::size_t>(t)]);
        }
        CHECK(state.sum() == 4.0 * weights_ref[static_cast<std::size_t>(t)]);
        // the grid values the closed form predicts
        CHECK(state.margins[0] == doctest::Approx(0.8 * (t + 1)).epsilon(1e-12));
        CHECK(state.weights[0] ==
              doctest::Approx(std::pow(0.5, 0.4 * (t + 1))).epsilon(1e-12));
    }
    CHECK(state.sum() < kappa * 4.0);
}

TEST_CASE("full run matched against the perfect-learner recurrence") {
    // gamma = 0.4 sits safely off any rounding boundary: theta = 1/6,
    // margin_t = (5/6) t, weight_t = 0.6^((5/12) t), and 4 * weight crosses
    // kappa * m = 1 strictly between t = 6 and t = 7.
    const SyntheticTask task = make_threshold_task(0.5);
    const LabeledSample s = draw_sample(task, 4, 31);
    const auto truth =
        std::make_shared<FunctionHypothesis>("truth", [task](PointView x) { return task.target(x); });
    TargetLearner learner(truth, 2);

    SmoothBoostConfig config;
    config.gamma = 0.4;
    config.kappa = 0.25;
    config.seed = 3;
    CostLedger ledger;
    const RunReport report = smoothboost_run(s, learner, config, ledger);

    CHECK(report.theta == 0.4 / 2.4);
    const double theta = report.theta;

    double margin = 0.0;
    int t_ref = 0;
    std::vector<double> sums_ref{4.0};
    for (;;) {
        margin = (margin + 1.0) - theta;
        const double w = margin < 0.0 ? 1.0 : std::exp((margin / 2.0) * std::log1p(-0.4));
        ++t_ref;
        sums_ref.push_back(4.0 * w);
        if (4.0 * w < 1.0) break;
        REQUIRE(t_ref < 30);
    }
    CHECK(t_ref == 7);
    CHECK(report.status == "converged");
    CHECK(report.iterations == t_ref);
    REQUIRE(report.per_round.size() == static_cast<std::size_t>(t_ref));
    for (int t = 0; t < t_ref; ++t) {
        const auto& rec = report.per_round[static_cast<std::size_t>(t)];
        CHECK(rec.round == t + 1);
        CHECK(rec.sum_weights ==
              doctest::Approx(sums_ref[static_cast<std::size_t>(t)]).epsilon(1e-14));
        CHECK(rec.sum_weights_after ==
              doctest::Approx(sums_ref[static_cast<std::size_t>(t) + 1]).epsilon(1e-14));
        CHECK(rec.weak_error == 0.0);
        CHECK(rec.ensemble_error == 0.0);
    }
    CHECK(report.training_error == 0.0);
    CHECK(report.training_error < config.kappa);
    for (double w : report.ensemble.weights) CHECK(w == 1.0); // plain voting
}

TEST_CASE("rejection sampling from all-ones weights is uniform") {
    const std::vector<double> weights(8, 1.0);
    Rng rng(101, stream::rejection);
    CostLedger ledger;
    std::vector<int> counts(8, 0);
    const int n = 10000;
    for (int i = 0; i < n; ++i) ++counts[rejection_draw(weights, rng, ledger, 1000)];

    double chi2 = 0.0;
    const double expected = n / 8.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi_square_sf(chi2, 7) > 0.01);
    // all-ones weights accept on the first attempt, every time
    CHECK(ledger.snapshot().oracle_queries == static_cast<std::uint64_t>(n));
}

TEST_CASE("rejection sampling concentrates on the only nonzero weight") {
    const std::vector<double> weights{1.0, 0.0, 0.0, 0.0, 0.0};
    Rng rng(7, stream::rejection);
    CostLedger ledger;
    for (int i = 0; i < 100; ++i) CHECK(rejection_draw(weights, rng, ledger, 100000) == 0);
}

TEST_CASE("rejection attempt count averages m over the weight mass") {
    const std::vector<double> weights(8, 0.25); // expected attempts = m / sum = 4
    Rng rng(55, stream::rejection);
    CostLedger ledger;
    const int n = 20000;
    for (int i = 0; i < n; ++i) (void)rejection_draw(weights, rng, ledger, 100000);
    const double mean_attempts =
        static_cast<double>(ledger.snapshot().oracle_queries) / static_cast<double>(n);
    CHECK(mean_attempts == doctest::Approx(4.0).epsilon(0.04));
}

TEST_CASE("rejection frequencies match the normalized weights within 3 sigma") {
    const std::vector<double> weights{1.0, 0.5, 0.25, 0.75, 0.1, 0.9, 0.33, 0.67};
    double total = 0.0;
    for (double w : weights) total += w;
    Rng rng(2025, stream::rejection);
    CostLedger ledger;
    std::vector<int> counts(8, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[rejection_draw(weights, rng, ledger, 100000)];
    for (std::size_t i = 0; i < 8; ++i) {
        const double p = weights[i] / total;
        const double freq = static_cast<double>(counts[i]) / n;
        const double sigma = std::sqrt(p * (1.0 - p) / n);
        CHECK(std::abs(freq - p) <= 3.0 * sigma);
    }
}

TEST_CASE("an impossible acceptance rate trips the anomaly ceiling") {
    const std::vector<double> weights{0.0, 0.0, 0.0};
    Rng rng(1, stream::rejection);
    CostLedger ledger;
    CHECK_THROWS_AS((void)rejection_draw(weights, rng, ledger, 64), StatisticalAnomalyError);
    CHECK_THROWS_AS((void)rejection_draw(std::vector<double>{}, rng, ledger, 64), DomainError);
}

TEST_CASE("round bound formula") {
    CHECK(smoothboost_round_bound(0.25, 0.4) ==
          static_cast<std::size_t>(std::ceil(2.0 / (0.25 * 0.16 * std::sqrt(0.6)))));
    CHECK_THROWS_AS(smoothboost_round_bound(0.0, 0.1), DomainError);
    CHECK_THROWS_AS(smoothboost_round_bound(0.1, 0.5), DomainError);
}

TEST_CASE("stump-learner runs satisfy the advertised invariants") {
    const SyntheticTask task = make_majority_task(6, 3, 0.05);
    const LabeledSample s = draw_sample(task, 64, 17);
    StumpLearner learner(12);
    SmoothBoostConfig config;
    config.gamma = 0.15;
    config.kappa = 0.2;
    config.seed = 9;
    CostLedger ledger;
    const RunReport report = smoothboost_run(s, learner, config, ledger);

    REQUIRE(report.iterations >= 1);
    const double density_cap = 1.0 / (config.kappa * 64.0);
    bool all_weak = true;
    for (const auto& rec : report.per_round) {
        CHECK(rec.max_density <= density_cap * (1.0 + 1e-12));
        CHECK(rec.ensemble_error <= rec.sum_weights_after / 64.0 + 1e-12);
        all_weak = all_weak && rec.weak_error <= 0.5 - config.gamma;
    }
    if (report.status == "converged") {
        CHECK(report.training_error < config.kappa);
        if (all_weak)
            CHECK(static_cast<std::size_t>(report.iterations) <
                  smoothboost_round_bound(config.kappa, config.gamma));
    }
    CHECK(report.ledger.weak_learner_calls == static_cast<std::uint64_t>(report.iterations));
}

TEST_CASE("identical configuration reproduces the identical report") {
    const LabeledSample s = draw_sample(make_majority_task(5, 3, 0.1), 48, 23);
    SmoothBoostConfig config;
    config.gamma = 0.15;
    config.kappa = 0.2;
    config.seed = 11;

    std::ostringstream a, b;
    {
        StumpLearner learner(8);
        CostLedger ledger;
        write_report_json(smoothboost_run(s, learner, config, ledger), a);
    }
    {
        StumpLearner learner(8);
        CostLedger ledger;
        write_report_json(smoothboost_run(s, learner, config, ledger), b);
    }
    CHECK(a.str() == b.str());
}

TEST_CASE("booster configuration validation") {
    const LabeledSample s = draw_sample(make_threshold_task(0.5), 8, 1);
    StumpLearner learner(4);
    CostLedger ledger;
    SmoothBoostConfig config;
    config.gamma = 0.5; // out of range
    CHECK_THROWS_AS(smoothboost_run(s, learner, config, ledger), ConfigError);
    config.gamma = 0.2;
    config.kappa = 1.0;
    CHECK_THROWS_AS(smoothboost_run(s, learner, config, ledger), ConfigError);
    config.kappa = 0.25;
    StumpLearner no_budget(0);
    CHECK_THROWS_AS(smoothboost_run(s, no_budget, config, ledger), ConfigError);
    const LabeledSample empty;
    CHECK_THROWS_AS(smoothboost_run(empty, learner, config, ledger), ConfigError);
}

TEST_CASE("adaboost vote weight at a planted quarter error") {
    // four points, one misclassified by the planted rule: weighted error 1/4
    LabeledSample s;
    s.examples = {{{0.0}, 1}, {{1.0}, 1}, {{2.0}, 1}, {{3.0}, 1}};
    const auto planted = std::make_shared<FunctionHypothesis>(
        "three-of-four", [](PointView x) { return x[0] < 2.5 ? 1 : -1; });
    TargetLearner learner(planted, 4);

    AdaBoostConfig config;
    config.rounds = 1;
    CostLedger ledger;
    const RunReport report = adaboost_run(s, learner, config, ledger);

    REQUIRE(report.iterations == 1);
    CHECK(report.per_round[0].weak_error == 0.25);
    CHECK(report.ensemble.weights[0] == 0.5 * std::log(3.0));
    // pre-normalization mass after one round is 2 sqrt(eps (1 - eps))
    CHECK(report.per_round[0].sum_weights_after ==
          doctest::Approx(2.0 * std::sqrt(0.25 * 0.75)).epsilon(1e-12));
    CHECK(report.per_round[0].sum_weights == 1.0);
}

TEST_CASE("adaboost solves a one-stump task in a single round") {
    const LabeledSample s = draw_sample(make_threshold_task(0.5), 32, 4);
    StumpLearner learner(32);
    AdaBoostConfig config;
    config.rounds = 16;
    CostLedger ledger;
    const RunReport report = adaboost_run(s, learner, config, ledger);
    CHECK(report.status == "zero-error");
    CHECK(report.iterations == 1);
    CHECK(report.training_error == 0.0);
    CHECK(report.ensemble.size() == 1);
}

TEST_CASE("adaboost caps the vote weight of a perfect hypothesis") {
    const SyntheticTask task = make_threshold_task(0.5);
    const LabeledSample s = draw_sample(task, 16, 6);
    const auto truth =
        std::make_shared<FunctionHypothesis>("truth", [task](PointView x) { return task.target(x); });
    TargetLearner learner(truth, 4);
    AdaBoostConfig config;
    config.rounds = 8;
    CostLedger ledger;
    const RunReport report = adaboost_run(s, learner, config, ledger);
    CHECK(report.status == "zero-error");
    CHECK(report.iterations == 1);
    CHECK(report.ensemble.weights[0] == 0.5 * std::log((1.0 - 1e-12) / 1e-12));
}

TEST_CASE("adaboost rejects a learner with no advantage") {
    // two identical points with opposite labels: every stump errs exactly 1/2
    LabeledSample s;
    s.examples = {{{0.5}, 1}, {{0.5}, -1}};
    StumpLearner learner(2);
    AdaBoostConfig config;
    config.rounds = 4;
    CostLedger ledger;
    CHECK_THROWS_AS(adaboost_run(s, learner, config, ledger), DegenerateLearnerError);
}

TEST_CASE("adaboost ledger accounting per round") {
    const LabeledSample s = draw_sample(make_majority_task(5, 3, 0.1), 32, 41);
    StumpLearner learner(32);
    AdaBoostConfig config;
    config.rounds = 6;
    CostLedger ledger;
    const RunReport report = adaboost_run(s, learner, config, ledger);
    const auto snap = report.ledger;
    const auto rounds = static_cast<std::uint64_t>(report.iterations);
    CHECK(snap.weak_learner_calls == rounds);
    CHECK(snap.sample_queries == rounds * 32);
    CHECK(snap.hypothesis_queries == rounds * 32);
}
