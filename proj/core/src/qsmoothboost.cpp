#include "qsb/qsmoothboost.hpp"

#include <algorithm>
#include <cmath>

#include "qsb/errors.hpp"
#include "qsb/numeric.hpp"
#include "qsb/oracles.hpp"

namespace qsb {

OnDemandWeights::OnDemandWeights(const LabeledSample& sample, double gamma, double theta)
    : sample_(&sample),
      gamma_(gamma),
      theta_(theta),
      margins_(sample.size(), 0.0),
      weights_(sample.size(), 1.0) {
    if (sample.size() == 0) throw ConfigError("OnDemandWeights: empty sample");
}

void OnDemandWeights::append(const HypothesisPtr& h) {
    if (!h) throw ContractError("OnDemandWeights::append: null hypothesis");
    hypotheses_.push_back(h);
    for (std::size_t i = 0; i < margins_.size(); ++i) {
        const double correct =
            static_cast<double>(h->evaluate((*sample_)[i].x) * (*sample_)[i].y);
        margins_[i] = margin_step(margins_[i], correct, theta_);
        weights_[i] = weight_from_margin(margins_[i], gamma_);
    }
}

double OnDemandWeights::recompute_margin(std::size_t i) const {
    if (i >= margins_.size()) throw DomainError("recompute_margin: index out of range");
    double margin = 0.0;
    for (const HypothesisPtr& h : hypotheses_) {
        const double correct =
            static_cast<double>(h->evaluate((*sample_)[i].x) * (*sample_)[i].y);
        margin = margin_step(margin, correct, theta_);
    }
    return margin;
}

double OnDemandWeights::recompute_weight(std::size_t i) const {
    return weight_from_margin(recompute_margin(i), gamma_);
}

double sub_delta(double delta, std::size_t round_cap, std::size_t batch) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("sub_delta: delta in (0,1)");
    if (round_cap == 0) throw DomainError("sub_delta: round cap must be positive");
    return delta / (4.0 * static_cast<double>(round_cap) * static_cast<double>(batch + 2));
}

RunReport qsmoothboost_run(const LabeledSample& sample, WeakLearner& learner,
                           const Backend& backend, const QSmoothBoostConfig& config,
                           CostLedger& ledger) {
    const std::size_t m = sample.size();
    if (m == 0) throw ConfigError("qsmoothboost: empty sample");
    if (!(config.gamma > 0.0 && config.gamma < 0.5))
        throw ConfigError("qsmoothboost: gamma in (0, 1/2) required");
    if (!(config.kappa > 0.0 && config.kappa < 1.0))
        throw ConfigError("qsmoothboost: kappa in (0, 1) required");
    if (!(config.eps_rel > 0.0 && config.eps_rel <= 1.0 / 11.0))
        throw ConfigError("qsmoothboost: eps_rel must lie in (0, 1/11] so an in-band "
                          "estimate below the threshold certifies sum < 1.1 * kappa * m");
    if (!(config.delta > 0.0 && config.delta < 1.0))
        throw ConfigError("qsmoothboost: delta in (0, 1) required");
    const std::size_t batch = static_cast<std::size_t>(learner.sample_budget());
    if (batch == 0) throw ConfigError("qsmoothboost: learner declares no sample budget");

    const double theta =
        std::isnan(config.theta) ? default_theta(config.gamma) : config.theta;
    const std::size_t cap =
        config.max_rounds != 0
            ? config.max_rounds
            : static_cast<std::size_t>(std::ceil(
                  2.2 * static_cast<double>(smoothboost_round_bound(config.kappa, config.gamma))));
    const double d_sub = sub_delta(config.delta, cap, batch);
    // continuing rounds certify sum >= kappa m / (1 + eps_rel); preparation
    // is promised exactly that much good mass
    const double a_lower = config.kappa / (1.0 + config.eps_rel);

    RunReport report;
    report.booster = "qsmoothboost";
    report.backend = backend.name();
    report.m = m;
    report.gamma = config.gamma;
    report.kappa = config.kappa;
    report.epsilon = 2.2 * config.kappa;
    report.theta = theta;
    report.epsilon_rel = config.eps_rel;
    report.delta = config.delta;
    report.delta_sub = d_sub;
    report.seed = config.seed;
    report.status = "iteration-cap";

    Rng backend_rng(config.seed, stream::backend);
    Rng learner_rng(config.seed, stream::learner);
    SampleOracle reads = oracle_view(sample, ledger);
    OnDemandWeights state(sample, config.gamma, theta);

    for (std::size_t t = 1;; ++t) {
        WeightOracle oracle(state.values(), config.oracle_bits, &ledger);
        // each oracle application evaluates the committee on one example:
        // t-1 hypothesis queries plus the sample read — or, memoized, only
        // the hypothesis added since the caches were filled
        const std::uint64_t per_application =
            config.memoize ? std::min<std::uint64_t>(t - 1, 1) : t - 1;
        oracle.set_application_hook([per_application](CostLedger& l, std::uint64_t count) {
            l.add_hypothesis(count * per_application);
            l.add_sample(count);
        });
        if (config.memoize) ledger.flag_memoized();

        const double s_true = neumaier_sum(state.values());
        const double s_dec = oracle.decoded_sum();
        const double estimate =
            config.force_exact_sum
                ? s_true
                : backend.estimate_sum(oracle, m, config.eps_rel, d_sub, backend_rng);

        if (estimate < config.kappa * static_cast<double>(m)) {
            report.status = "converged";
            break;
        }
        if (t > cap) break;

        IterationRecord rec;
        rec.round = static_cast<int>(t);
        rec.sum_weights = s_true;
        rec.max_density = *std::max_element(state.values().begin(), state.values().end()) / s_true;
        rec.estimate = estimate;
        rec.estimate_in_band = std::abs(estimate - s_dec) <= config.eps_rel * s_dec;

        HypothesisPtr h;
        if (config.full_information) {
            ledger.add_sample(m); // the learner reads the full weighted sample
            ledger.add_weak_learner_call();
            h = learner.train_weighted(sample, state.values());
        } else {
            std::vector<LabeledExample> drawn;
            drawn.reserve(batch);
            for (std::size_t w = 0; w < batch; ++w) {
                const std::size_t idx = backend.draw_index(oracle, m, a_lower, backend_rng);
                drawn.push_back(reads.query(idx));
            }
            ledger.add_weak_learner_call();
            h = learner.train(drawn, learner_rng);
        }
        rec.weak_error = weighted_error(*h, sample, state.values(), s_true);

        state.append(h);
        rec.sum_weights_after = neumaier_sum(state.values());

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
