#pragma once

#include <cstdint>

#include "qsb/dataset.hpp"
#include "qsb/ledger.hpp"
#include "qsb/report.hpp"
#include "qsb/weak_learner.hpp"

namespace qsb {

// Reweighting baseline: the learner sees the full sample with explicit
// example weights each round, hypotheses are combined by confidence-rated
// vote.  Deterministic given the sample and learner.
struct AdaBoostConfig {
    std::size_t rounds = 32;
    std::uint64_t seed = 1; // recorded in the report; the algorithm draws nothing
};

RunReport adaboost_run(const LabeledSample& sample, WeakLearner& learner,
                       const AdaBoostConfig& config, CostLedger& ledger);

} // namespace qsb
