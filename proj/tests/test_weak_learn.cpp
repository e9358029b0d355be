// Weak-learner tests.  The stump trainer is held to an exhaustive
// enumeration of every reachable stump labeling, so its "best cut" claim is
// checked against ground truth rather than against itself.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "qsb/dataset.hpp"
#include "qsb/errors.hpp"
#include "qsb/hypothesis.hpp"
#include "qsb/rng.hpp"
#include "qsb/weak_learner.hpp"

using namespace qsb;

namespace {

// Every labeling a stump can realize comes from thresholding at one of the
// observed values (cut at v == "predict polarity wherever x_f >= v"); cutting
// below the minimum is the same labeling as cutting at the minimum.
double best_stump_error_brute(const std::vector<LabeledExample>& batch,
                              const std::vector<double>& weights) {
    const std::size_t dim = batch[0].x.size();
    double total = 0.0;
    for (double w : weights) total += w;
    double best = total;
    for (std::size_t f = 0; f < dim; ++f) {
        std::set<double> values;
        for (const auto& ex : batch) values.insert(ex.x[f]);
        for (double t : values) {
            for (int pol : {1, -1}) {
                double err = 0.0;
                for (std::size_t i = 0; i < batch.size(); ++i) {
                    const int pred = batch[i].x[f] >= t ? pol : -pol;
                    if (pred != batch[i].y) err += weights[i];
                }
                best = std::min(best, err);
            }
        }
    }
    return best / total;
}

std::vector<LabeledExample> random_batch(std::size_t m, std::size_t dim, Rng& rng) {
    std::vector<LabeledExample> batch(m);
    for (auto& ex : batch) {
        ex.x.resize(dim);
        for (auto& v : ex.x) v = rng.uniform01();
        ex.y = rng.bernoulli(0.5) ? 1 : -1;
    }
    return batch;
}

} // namespace

TEST_CASE("separable one-dimensional data fits exactly") {
    std::vector<LabeledExample> batch{
        {{0.1}, -1}, {{0.2}, -1}, {{0.8}, 1}, {{0.9}, 1}};
    const StumpFit fit = train_stump(batch);
    CHECK(fit.training_error == 0.0);
    for (const auto& ex : batch) CHECK(fit.stump->evaluate(ex.x) == ex.y);
}

TEST_CASE("constant labels fit exactly with the first feature and +1 cut") {
    std::vector<LabeledExample> batch{{{0.4, 0.2}, 1}, {{0.1, 0.9}, 1}, {{0.7, 0.5}, 1}};
    const StumpFit fit = train_stump(batch);
    CHECK(fit.training_error == 0.0);
    const auto* stump = dynamic_cast<const DecisionStump*>(fit.stump.get());
    REQUIRE(stump != nullptr);
    // ties resolve to the first candidate scanned: feature 0, bottom cut, +1
    CHECK(stump->feature() == 0);
    CHECK(stump->polarity() == 1);
    CHECK(stump->threshold() == 0.1);
}

TEST_CASE("training error equals the exhaustive minimum") {
    Rng rng(314, stream::checks);
    for (int trial = 0; trial < 25; ++trial) {
        const std::vector<LabeledExample> batch = random_batch(12, 2, rng);
        const std::vector<double> ones(batch.size(), 1.0);
        const StumpFit fit = train_stump(batch);
        CHECK(fit.training_error == best_stump_error_brute(batch, ones));

        // the reported error is also the returned stump's actual error
        std::size_t bad = 0;
        for (const auto& ex : batch)
            if (fit.stump->evaluate(ex.x) != ex.y) ++bad;
        CHECK(fit.training_error == static_cast<double>(bad) / static_cast<double>(batch.size()));
    }
}

TEST_CASE("weighted training error equals the exhaustive weighted minimum") {
    Rng rng(2718, stream::checks);
    for (int trial = 0; trial < 25; ++trial) {
        LabeledSample s;
        s.examples = random_batch(12, 2, rng);
        std::vector<double> w(s.size());
        for (auto& wi : w) wi = rng.uniform(0.01, 1.0);
        const StumpFit fit = train_stump_weighted(s, w);
        CHECK(fit.training_error ==
              doctest::Approx(best_stump_error_brute(s.examples, w)).epsilon(1e-12));
    }
}

TEST_CASE("the fit never does worse than chance") {
    Rng rng(99, stream::checks);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<LabeledExample> batch = random_batch(9, 3, rng);
        CHECK(train_stump(batch).training_error <= 0.5);
    }
}

TEST_CASE("training is deterministic") {
    Rng rng(5, stream::checks);
    const std::vector<LabeledExample> batch = random_batch(16, 2, rng);
    const StumpFit a = train_stump(batch);
    const StumpFit b = train_stump(batch);
    CHECK(a.stump->serialize() == b.stump->serialize());
    CHECK(a.training_error == b.training_error);
}

TEST_CASE("degenerate batches are rejected") {
    CHECK_THROWS_AS(train_stump(std::span<const LabeledExample>()), DomainError);
    LabeledSample s;
    s.examples = {{{0.5}, 1}};
    CHECK_THROWS_AS(train_stump_weighted(s, std::vector<double>{0.0}), DomainError);
    CHECK_THROWS_AS(train_stump_weighted(s, std::vector<double>{-1.0}), DomainError);
    CHECK_THROWS_AS(train_stump_weighted(s, std::vector<double>{1.0, 1.0}), DomainError);
}

TEST_CASE("stump serialization round trips through the pinned line format") {
    const DecisionStump stump(3, 0.625, -1);
    CHECK(stump.serialize() == "stump feature=3 threshold=0.625 polarity=-1");

    const HypothesisPtr back = parse_hypothesis(stump.serialize());
    for (double v : {0.0, 0.624, 0.625, 0.626, 1.0}) {
        const Point x{0.0, 0.0, 0.0, v};
        CHECK(back->evaluate(x) == stump.evaluate(x));
    }
    CHECK_THROWS_AS(parse_hypothesis("opaque name=foo"), ConfigError);
    CHECK_THROWS_AS(parse_hypothesis("stump feature=x"), ConfigError);
}

TEST_CASE("learner wrappers expose their budget and honor their contract") {
    StumpLearner stumps(8);
    CHECK(stumps.sample_budget() == 8);
    CHECK(stumps.name() == "stump");

    const auto target = std::make_shared<FunctionHypothesis>("planted", [](PointView) { return 1; });
    TargetLearner planted(target, 4);
    CHECK(planted.sample_budget() == 4);
    Rng rng(1);
    CHECK(planted.train(std::span<const LabeledExample>(), rng) == target);
    const LabeledSample empty;
    CHECK(planted.train_weighted(empty, std::span<const double>()) == target);
}

TEST_CASE("confidence repeat count is the base-3 log of the failure budget") {
    CHECK(confidence_repeat_count(1.0 / 3.0) == 1);
    CHECK(confidence_repeat_count(1.0 / 27.0) == 3);
    CHECK(confidence_repeat_count(0.04) == 3); // ceil(log3 25)
    CHECK_THROWS_AS(confidence_repeat_count(0.0), DomainError);
    CHECK_THROWS_AS(confidence_repeat_count(1.0), DomainError);
}

TEST_CASE("confidence boosting accepts a planted perfect learner") {
    const SyntheticTask task = make_majority_task(5, 3);
    const auto truth =
        std::make_shared<FunctionHypothesis>("truth", [task](PointView x) { return task.target(x); });
    TargetLearner learner(truth, 4);

    Rng source_rng(17, stream::points);
    const ExampleSource source = [&]() {
        LabeledExample ex;
        ex.x = task.sample_point(source_rng);
        ex.y = task.target(ex.x);
        return ex;
    };

    Rng rng(17, stream::learner);
    const double delta = 1.0 / 27.0;
    const ConfidenceBoostResult result = boost_confidence(learner, delta, 0.25, source, rng, 64);
    CHECK(result.passed);
    CHECK(result.estimated_error == 0.0);
    CHECK(result.learner_calls == confidence_repeat_count(delta));
    CHECK(result.hypothesis == truth);
}

TEST_CASE("confidence boosting reports failure for a useless learner") {
    const SyntheticTask task = make_majority_task(5, 3);
    // always wrong: estimated error ~1 on every candidate check
    const auto anti =
        std::make_shared<FunctionHypothesis>("anti", [task](PointView x) { return -task.target(x); });
    TargetLearner learner(anti, 4);

    Rng source_rng(23, stream::points);
    const ExampleSource source = [&]() {
        LabeledExample ex;
        ex.x = task.sample_point(source_rng);
        ex.y = task.target(ex.x);
        return ex;
    };
    Rng rng(23, stream::learner);
    const ConfidenceBoostResult result = boost_confidence(learner, 0.2, 0.25, source, rng, 64);
    CHECK_FALSE(result.passed);
    CHECK(result.estimated_error > 0.5);
}

TEST_CASE("a dry example source surfaces as a resource error") {
    StumpLearner learner(4);
    int remaining = 6;
    const SyntheticTask task = make_majority_task(3, 1);
    Rng source_rng(31, stream::points);
    const ExampleSource source = [&]() {
        if (remaining-- <= 0) throw ResourceError("example source exhausted");
        LabeledExample ex;
        ex.x = task.sample_point(source_rng);
        ex.y = task.target(ex.x);
        return ex;
    };
    Rng rng(31, stream::learner);
    CHECK_THROWS_AS(boost_confidence(learner, 0.05, 0.25, source, rng, 1000), ResourceError);
}
