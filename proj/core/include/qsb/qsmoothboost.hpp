#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "qsb/backend.hpp"
#include "qsb/dataset.hpp"
#include "qsb/ledger.hpp"
#include "qsb/report.hpp"
#include "qsb/smoothboost.hpp"
#include "qsb/weak_learner.hpp"

namespace qsb {

// Weight state addressed by example index, as the superposition oracle sees
// it: conceptually each weight is recomputed from the hypothesis list on
// every access.  The cache updates one hypothesis at a time through exactly
// the kernel calls a from-scratch recomputation makes, in the same order,
// so cached and recomputed values agree bit for bit — recompute_weight
// exists so tests can hold the cache to that.
class OnDemandWeights {
public:
    OnDemandWeights(const LabeledSample& sample, double gamma, double theta);

    void append(const HypothesisPtr& h);

    std::span<const double> values() const { return weights_; }
    std::span<const double> margins() const { return margins_; }
    std::size_t rounds() const { return hypotheses_.size(); }

    double recompute_margin(std::size_t i) const;
    double recompute_weight(std::size_t i) const;

private:
    const LabeledSample* sample_;
    double gamma_;
    double theta_;
    std::vector<HypothesisPtr> hypotheses_;
    std::vector<double> margins_;
    std::vector<double> weights_;
};

// Per-round failure allowance: the run budget delta spread over every
// estimated sum and state preparation a capped run can make (batch draws
// plus the estimate per round), with slack.
double sub_delta(double delta, std::size_t round_cap, std::size_t batch);

struct QSmoothBoostConfig {
    double gamma = 0.1;
    double kappa = 0.05; // termination threshold; epsilon / 2.2 when derived
    double theta = std::numeric_limits<double>::quiet_NaN(); // NaN -> default_theta(gamma)

    // Estimated-sum accuracy.  The termination analysis needs
    // 1/(1 - eps_rel) <= 1.1, i.e. eps_rel <= 1/11; 0.09 keeps a little
    // margin under that.
    double eps_rel = 0.09;
    double delta = 0.05; // whole-run failure budget for estimates and draws

    std::size_t max_rounds = 0; // 0 -> ceil(2.2 * smoothboost_round_bound)
    std::uint64_t seed = 1;
    int oracle_bits = 32; // fixed-point width of the weight oracle

    bool force_exact_sum = false;  // terminate on the true sum (diagnostics,
                                   // and lockstep comparison against the
                                   // exact-sum booster)
    bool full_information = false; // learner sees the whole weighted sample
                                   // instead of a drawn batch
    bool memoize = false;          // bill amortized per-application hypothesis
                                   // queries (evaluations cached across rounds)
};

RunReport qsmoothboost_run(const LabeledSample& sample, WeakLearner& learner,
                           const Backend& backend, const QSmoothBoostConfig& config,
                           CostLedger& ledger);

} // namespace qsb
