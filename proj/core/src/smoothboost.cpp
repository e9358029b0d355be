#include "qsb/smoothboost.hpp"

#include <cfloat>
#include <cmath>

#include "qsb/errors.hpp"
#include "qsb/numeric.hpp"

namespace qsb {

double default_theta(double gamma) {
    if (!(gamma > 0.0 && gamma < 0.5)) throw DomainError("default_theta: gamma in (0, 1/2)");
    return gamma / (2.0 + gamma);
}

double margin_step(double margin, double correct, double theta) {
    return (margin + correct) - theta;
}

double weight_from_margin(double margin, double gamma) {
    if (margin < 0.0) return 1.0;
    // (1-gamma)^(margin/2) via log1p keeps accuracy for small gamma; the
    // clamp keeps weights valid acceptance probabilities after underflow
    const double w = std::exp((margin / 2.0) * std::log1p(-gamma));
    return w < DBL_MIN ? DBL_MIN : w;
}

void WeightState::update(const LabeledSample& sample, const Hypothesis& h, double gamma,
                         double theta) {
    if (sample.size() != margins.size())
        throw ContractError("WeightState::update: sample size mismatch");
    for (std::size_t i = 0; i < margins.size(); ++i) {
        const double correct =
            static_cast<double>(h.evaluate(sample[i].x) * sample[i].y);
        margins[i] = margin_step(margins[i], correct, theta);
        weights[i] = weight_from_margin(margins[i], gamma);
    }
}

double WeightState::sum() const { return neumaier_sum(weights); }

double WeightState::max_weight() const {
    double best = 0.0;
    for (double w : weights) best = std::max(best, w);
    return best;
}

double weighted_error(const Hypothesis& h, const LabeledSample& sample,
                      std::span<const double> weights, double sum) {
    if (sample.size() != weights.size())
        throw ContractError("weighted_error: sample size mismatch");
    CompensatedSum bad;
    for (std::size_t i = 0; i < sample.size(); ++i)
        if (h.evaluate(sample[i].x) != sample[i].y) bad.add(weights[i]);
    return bad.value() / sum;
}

std::size_t rejection_draw(std::span<const double> weights, Rng& rng, CostLedger& ledger,
                           std::size_t attempt_ceiling) {
    if (weights.empty()) throw DomainError("rejection_draw: empty weight vector");
    for (std::size_t attempt = 0; attempt < attempt_ceiling; ++attempt) {
        const std::size_t j = rng.uniform_index(weights.size());
        ledger.add_oracle(1);
        if (rng.uniform01() < weights[j]) return j;
    }
    throw StatisticalAnomalyError("rejection_draw: no acceptance within the attempt ceiling");
}

std::size_t smoothboost_round_bound(double kappa, double gamma) {
    if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("round bound: kappa in (0,1)");
    if (!(gamma > 0.0 && gamma < 0.5)) throw DomainError("round bound: gamma in (0, 1/2)");
    return static_cast<std::size_t>(
        std::ceil(2.0 / (kappa * gamma * gamma * std::sqrt(1.0 - gamma))));
}

RunReport smoothboost_run(const LabeledSample& sample, WeakLearner& learner,
                          const SmoothBoostConfig& config, CostLedger& ledger) {
    const std::size_t m = sample.size();
    if (m == 0) throw ConfigError("smoothboost: empty sample");
    if (!(config.gamma > 0.0 && config.gamma < 0.5))
        throw ConfigError("smoothboost: gamma in (0, 1/2) required");
    if (!(config.kappa > 0.0 && config.kappa < 1.0))
        throw ConfigError("smoothboost: kappa in (0, 1) required");
    const std::size_t batch = static_cast<std::size_t>(learner.sample_budget());
    if (batch == 0) throw ConfigError("smoothboost: learner declares no sample budget");

    const double theta =
        std::isnan(config.theta) ? default_theta(config.gamma) : config.theta;
    const std::size_t cap = config.max_rounds != 0
                                ? config.max_rounds
                                : 2 * smoothboost_round_bound(config.kappa, config.gamma);
    const std::size_t attempt_ceiling =
        static_cast<std::size_t>(std::ceil(64.0 / config.kappa));

    RunReport report;
    report.booster = "smoothboost";
    report.m = m;
    report.gamma = config.gamma;
    report.kappa = config.kappa;
    report.epsilon = 2.0 * config.kappa;
    report.theta = theta;
    report.seed = config.seed;
    report.status = "iteration-cap";

    Rng rng(config.seed, stream::rejection);
    Rng learner_rng(config.seed, stream::learner);
    SampleOracle reads = oracle_view(sample, ledger);
    WeightState state(m);

    for (std::size_t t = 1;; ++t) {
        const double s = state.sum();
        ledger.add_oracle(2 * m); // weight scans for the total and the termination test
        if (s < config.kappa * static_cast<double>(m)) {
            report.status = "converged";
            break;
        }
        if (t > cap) break; // still above threshold: cap reached, report says so

        IterationRecord rec;
        rec.round = static_cast<int>(t);
        rec.sum_weights = s;
        rec.max_density = state.max_weight() / s;
        rec.estimate = std::numeric_limits<double>::quiet_NaN();

        HypothesisPtr h;
        if (config.full_information) {
            ledger.add_sample(m); // the learner reads the full weighted sample
            ledger.add_weak_learner_call();
            h = learner.train_weighted(sample, state.weights);
        } else {
            std::vector<LabeledExample> drawn;
            drawn.reserve(batch);
            for (std::size_t w = 0; w < batch; ++w) {
                const std::size_t idx =
                    rejection_draw(state.weights, rng, ledger, attempt_ceiling);
                drawn.push_back(reads.query(idx));
            }
            ledger.add_weak_learner_call();
            h = learner.train(drawn, learner_rng);
        }
        rec.weak_error = weighted_error(*h, sample, state.weights, s);

        state.update(sample, *h, config.gamma, theta);
        ledger.add_hypothesis(m); // one evaluation per example for the margin update
        ledger.add_sample(m);     // paired label reads
        rec.sum_weights_after = state.sum();

        report.ensemble.members.push_back(h);
        report.ensemble.weights.push_back(1.0);
        rec.ensemble_error = empirical_error(report.ensemble, sample);
        report.per_round.push_back(rec);
    }

    report.iterations = static_cast<int>(report.per_round.size());
    report.training_error = empirical_error(report.ensemble, sample);
    report.ledger = ledger.snapshot();
    return report;
}

} // namespace qsb
