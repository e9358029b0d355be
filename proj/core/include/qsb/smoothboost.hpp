#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "qsb/dataset.hpp"
#include "qsb/ledger.hpp"
#include "qsb/report.hpp"
#include "qsb/rng.hpp"
#include "qsb/weak_learner.hpp"

namespace qsb {

// Margin offset matched to the advantage: gamma / (2 + gamma).  With weak
// errors at most 1/2 - gamma, this offset makes the total weight shrink fast
// enough for the round bound below while keeping every per-example weight a
// valid probability scale.
double default_theta(double gamma);

// The shared weight kernel.  Every booster variant must go through these
// two functions with the same association order, so that a weight computed
// incrementally round by round and a weight recomputed from the full margin
// history agree bit for bit.
//
//   margin' = (margin + correct) - theta,   correct = h(x) * y in {-1, +1}
//   weight  = 1                        if margin < 0
//             (1 - gamma)^(margin/2)   otherwise, clamped up to DBL_MIN
double margin_step(double margin, double correct, double theta);
double weight_from_margin(double margin, double gamma);

// Cumulative margins and the weights they induce, updated in place one
// hypothesis at a time.  Starts at margin 0, weight 1 for every example.
struct WeightState {
    std::vector<double> margins;
    std::vector<double> weights;

    explicit WeightState(std::size_t m) : margins(m, 0.0), weights(m, 1.0) {}

    void update(const LabeledSample& sample, const Hypothesis& h, double gamma, double theta);
    double sum() const;          // compensated, index order
    double max_weight() const;
};

// Weighted error of h: total weight on misclassified examples divided by
// `sum` (the caller supplies the matching total so diagnostics and
// algorithm use the same normalizer).
double weighted_error(const Hypothesis& h, const LabeledSample& sample,
                      std::span<const double> weights, double sum);

// One index distributed as weights / sum(weights), by rejection against the
// unit envelope: propose uniformly, accept with probability equal to the
// weight.  Bills one weight lookup per attempt.  `attempt_ceiling` bounds a
// single draw; exceeding it is a statistical anomaly, not a valid outcome.
std::size_t rejection_draw(std::span<const double> weights, Rng& rng, CostLedger& ledger,
                           std::size_t attempt_ceiling);

struct SmoothBoostConfig {
    double gamma = 0.1;  // weak-learner advantage the run is sized for
    double kappa = 0.05; // stop once total weight drops below kappa * m
    double theta = std::numeric_limits<double>::quiet_NaN(); // NaN -> default_theta(gamma)
    std::size_t max_rounds = 0; // 0 -> 2 * smoothboost_round_bound(kappa, gamma)
    std::uint64_t seed = 1;
    // Train on the exact weighted sample instead of rejection-resampled
    // batches; removes sampling noise so paired runs can be compared
    // trajectory-for-trajectory.
    bool full_information = false;
};

// ceil(2 / (kappa * gamma^2 * sqrt(1 - gamma))): the provable round count
// when every weak error is at most 1/2 - gamma.  Runs are capped at twice
// this so a misbehaving learner terminates instead of spinning.
std::size_t smoothboost_round_bound(double kappa, double gamma);

RunReport smoothboost_run(const LabeledSample& sample, WeakLearner& learner,
                          const SmoothBoostConfig& config, CostLedger& ledger);

} // namespace qsb
