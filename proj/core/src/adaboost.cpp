#include "qsb/adaboost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qsb/errors.hpp"
#include "qsb/numeric.hpp"

namespace qsb {

namespace {

// vote weight at error eps; at eps == 0 the formula diverges, so cap it at
// the value a 1e-12 error would get — large enough to dominate any
// realistic vote, finite enough to keep scores well-defined
double vote_weight(double eps) {
    constexpr double kFloor = 1e-12;
    const double e = eps < kFloor ? kFloor : eps;
    return 0.5 * std::log((1.0 - e) / e);
}

} // namespace

RunReport adaboost_run(const LabeledSample& sample, WeakLearner& learner,
                       const AdaBoostConfig& config, CostLedger& ledger) {
    const std::size_t m = sample.size();
    if (m == 0) throw ConfigError("adaboost: empty sample");
    if (config.rounds == 0) throw ConfigError("adaboost: rounds must be positive");

    RunReport report;
    report.booster = "adaboost";
    report.m = m;
    report.gamma = std::numeric_limits<double>::quiet_NaN();
    report.kappa = std::numeric_limits<double>::quiet_NaN();
    report.epsilon = std::numeric_limits<double>::quiet_NaN();
    report.theta = std::numeric_limits<double>::quiet_NaN();
    report.seed = config.seed;
    report.status = "completed";

    std::vector<double> dist(m, 1.0 / static_cast<double>(m));

    for (std::size_t t = 1; t <= config.rounds; ++t) {
        ledger.add_sample(m); // the learner reads the full weighted sample
        ledger.add_weak_learner_call();
        HypothesisPtr h = learner.train_weighted(sample, dist);

        CompensatedSum err;
        for (std::size_t i = 0; i < m; ++i)
            if (h->evaluate(sample[i].x) != sample[i].y) err.add(dist[i]);
        ledger.add_hypothesis(m);
        const double eps = err.value();
        if (eps >= 0.5)
            throw DegenerateLearnerError("adaboost: weighted error " + std::to_string(eps) +
                                         " has no advantage to amplify");

        const double alpha = vote_weight(eps);

        IterationRecord rec;
        rec.round = static_cast<int>(t);
        rec.sum_weights = 1.0; // the round starts from a normalized distribution
        rec.max_density = *std::max_element(dist.begin(), dist.end());
        rec.weak_error = eps;
        rec.estimate = std::numeric_limits<double>::quiet_NaN();

        // multiplicative update, then renormalize; the pre-normalization
        // mass equals 2 sqrt(eps (1 - eps)) and is the round's contribution
        // to the training-error envelope
        CompensatedSum z;
        for (std::size_t i = 0; i < m; ++i) {
            const double agree = static_cast<double>(h->evaluate(sample[i].x) * sample[i].y);
            dist[i] *= std::exp(-alpha * agree);
            z.add(dist[i]);
        }
        rec.sum_weights_after = z.value();
        for (std::size_t i = 0; i < m; ++i) dist[i] /= z.value();

        report.ensemble.members.push_back(h);
        report.ensemble.weights.push_back(alpha);
        rec.ensemble_error = empirical_error(report.ensemble, sample);
        report.per_round.push_back(rec);

        if (rec.ensemble_error == 0.0) {
            report.status = "zero-error";
            break;
        }
    }

    report.iterations = static_cast<int>(report.per_round.size());
    report.training_error = empirical_error(report.ensemble, sample);
    report.ledger = ledger.snapshot();
    return report;
}

} // namespace qsb
