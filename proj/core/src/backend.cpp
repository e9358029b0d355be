#include "qsb/backend.hpp"

#include <cmath>
#include <vector>

#include "qsb/amplify.hpp"
#include "qsb/counting.hpp"
#include "qsb/errors.hpp"
#include "qsb/numeric.hpp"

namespace qsb {

double ExactBackend::estimate_sum(const WeightOracle& oracle, std::size_t m, double eps_rel,
                                  double delta, Rng& rng) const {
    if (m == 0) throw DomainError("estimate_sum: empty oracle domain");
    const double sum = oracle.decoded_sum();
    const double a = sum / static_cast<double>(m);

    const int tau = counting_precision_bits(static_cast<double>(m), eps_rel);
    const std::uint64_t grid = std::uint64_t{1} << tau;
    const int reps = odd_median_repetitions(delta);

    std::vector<double> estimates;
    estimates.reserve(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r)
        estimates.push_back(sample_phase_outcome(a, grid, rng) * static_cast<double>(m));

    oracle.charge_application(static_cast<std::uint64_t>(reps) * (4 * (grid - 1) + 2));
    return median(estimates);
}

std::size_t ExactBackend::draw_index(const WeightOracle& oracle, std::size_t m, double a_lower,
                                     Rng& rng) const {
    PreparedDistribution prep =
        prepare_distribution_state(oracle, m, a_lower, rng, oracle.ledger());
    MeasureResult result = prep.state.measure("index", rng);
    if (result.outcome >= m)
        throw ContractError("draw_index: measured an index outside the sample");
    return static_cast<std::size_t>(result.outcome);
}

std::uint64_t cost_model_count_queries(std::size_t m, double eps_rel, double delta) {
    constexpr double kCountConstant = 4.0;
    const double q = kCountConstant * std::sqrt(static_cast<double>(m)) *
                     std::log(1.0 / delta) / eps_rel;
    return static_cast<std::uint64_t>(std::ceil(q));
}

double CostModelBackend::estimate_sum(const WeightOracle& oracle, std::size_t m, double eps_rel,
                                      double delta, Rng& rng) const {
    if (m == 0) throw DomainError("estimate_sum: empty oracle domain");
    if (!(eps_rel > 0.0 && eps_rel < 1.0))
        throw DomainError("estimate_sum: eps_rel in (0,1) required");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("estimate_sum: delta in (0,1) required");
    const double sum = oracle.decoded_sum();
    oracle.charge_application(cost_model_count_queries(m, eps_rel, delta));
    if (rng.uniform01() < delta / 2.0) {
        // the estimation theorem permits an arbitrary answer this often;
        // return one just outside the band so failures are visible
        const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
        return sum * (1.0 + sign * 1.5 * eps_rel);
    }
    return sum * (1.0 + rng.uniform(-eps_rel / 2.0, eps_rel / 2.0));
}

std::size_t CostModelBackend::draw_index(const WeightOracle& oracle, std::size_t m,
                                         double a_lower, Rng& rng) const {
    if (m == 0) throw DomainError("draw_index: empty oracle domain");
    if (!(a_lower > 0.0 && a_lower <= 1.0))
        throw DomainError("draw_index: a_lower in (0,1] required");
    const double sum = oracle.decoded_sum();
    if (sum < a_lower * static_cast<double>(m) * (1.0 - 1e-9))
        throw DomainError("draw_index: weight sum below the promised lower bound");

    // charge the amplification schedule the theorem prescribes at the
    // promised mass: ceil(c_A / sqrt(a_lower)) rounds, two oracle queries
    // per unitary application, one extra application for the preparation
    const std::uint64_t rounds =
        static_cast<std::uint64_t>(std::ceil(kAmplifyConstant / std::sqrt(a_lower)));
    oracle.charge_application(2 * (rounds + 1));
    if (CostLedger* ledger = oracle.ledger()) ledger->add_amplification_rounds(rounds);

    // exact inversion sample from the decoded distribution
    const double u = rng.uniform01() * sum;
    CompensatedSum prefix;
    for (std::size_t i = 0; i < m; ++i) {
        prefix.add(oracle.decoded(i));
        if (prefix.value() >= u) return i;
    }
    return m - 1; // u landed in the rounding dust past the last prefix
}

std::unique_ptr<Backend> make_backend(const std::string& name) {
    if (name == "exact") return std::make_unique<ExactBackend>();
    if (name == "cost-model") return std::make_unique<CostModelBackend>();
    throw ConfigError("unknown backend '" + name + "' (expected exact or cost-model)");
}

} // namespace qsb
