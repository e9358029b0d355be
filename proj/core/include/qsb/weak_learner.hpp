#pragma once

#include <functional>
#include <span>
#include <string>

#include "qsb/dataset.hpp"
#include "qsb/hypothesis.hpp"
#include "qsb/rng.hpp"

namespace qsb {

struct StumpFit {
    HypothesisPtr stump;
    double training_error = 0.0; // weighted, normalized to [0,1]
};

// Exhaustive decision-stump search.  Candidate thresholds per feature: the
// smallest distinct value (the "everything >= threshold" cut, which covers
// constant predictions) plus the midpoints between consecutive distinct
// values.  Both polarities.  Ties go to the lowest feature index, then the
// lowest threshold, then polarity +1.  The winner's error is always <= 1/2
// because the two polarities of any cut have complementary error.
StumpFit train_stump(std::span<const LabeledExample> batch);
StumpFit train_stump_weighted(const LabeledSample& s, std::span<const double> weights);

// What a booster needs from its subroutine learner.
//   train          consumes a resampled batch (the booster picked W examples
//                  from its current distribution)
//   train_weighted full-information variant: the exact distribution instead
//                  of a resample.  Used where resampling noise must be out of
//                  the picture; throws ConfigError if unsupported.
class WeakLearner {
public:
    virtual ~WeakLearner() = default;
    virtual HypothesisPtr train(std::span<const LabeledExample> batch, Rng& rng) = 0;
    virtual HypothesisPtr train_weighted(const LabeledSample& s, std::span<const double> weights);
    virtual int sample_budget() const = 0; // W: examples consumed per call
    virtual std::string name() const = 0;
};

class StumpLearner final : public WeakLearner {
public:
    explicit StumpLearner(int sample_budget) : budget_(sample_budget) {}
    HypothesisPtr train(std::span<const LabeledExample> batch, Rng&) override {
        return train_stump(batch).stump;
    }
    HypothesisPtr train_weighted(const LabeledSample& s, std::span<const double> weights) override {
        return train_stump_weighted(s, weights).stump;
    }
    int sample_budget() const override { return budget_; }
    std::string name() const override { return "stump"; }

private:
    int budget_;
};

// Always answers with a fixed hypothesis (normally the task's target).  Makes
// booster dynamics deterministic, which is what scaling sweeps and frozen
// traces want.
class TargetLearner final : public WeakLearner {
public:
    TargetLearner(HypothesisPtr target, int sample_budget)
        : target_(std::move(target)), budget_(sample_budget) {}
    HypothesisPtr train(std::span<const LabeledExample>, Rng&) override { return target_; }
    HypothesisPtr train_weighted(const LabeledSample&, std::span<const double>) override {
        return target_;
    }
    int sample_budget() const override { return budget_; }
    std::string name() const override { return "target"; }

private:
    HypothesisPtr target_;
    int budget_;
};

// Confidence boosting for a learner that only succeeds with probability
// >= 2/3: run it r = ceil(log3(1/delta)) times on fresh examples, estimate
// each candidate's error on check_budget more fresh examples, and return the
// first candidate estimated at or below 1/2 - gamma/2.  `passed` is false
// when no candidate clears the bar (the best one is returned anyway).
// Exactly r learner calls are made regardless of early success.
struct ConfidenceBoostResult {
    HypothesisPtr hypothesis;
    double estimated_error = 1.0;
    bool passed = false;
    int learner_calls = 0;
};

int confidence_repeat_count(double delta);           // r = ceil(log3(1/delta))
int default_check_budget(double gamma, double delta); // ceil(16/gamma^2)*ceil(log2(r/delta))

using ExampleSource = std::function<LabeledExample()>; // throws ResourceError when dry

ConfidenceBoostResult boost_confidence(WeakLearner& learner, double delta, double gamma,
                                       const ExampleSource& source, Rng& rng,
                                       int check_budget = 0); // 0 = default formula

} // namespace qsb
