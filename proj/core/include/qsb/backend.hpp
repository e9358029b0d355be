#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "qsb/oracles.hpp"
#include "qsb/rng.hpp"

namespace qsb {

// The two quantum primitives the booster needs, behind one interface:
// estimating the total weight held by the oracle, and drawing an index from
// the normalized weight distribution.  `exact` runs the statevector
// simulation; `cost-model` produces exact classical answers while charging
// the ledger what the quantum procedures would cost.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string name() const = 0;

    // Multiplicative-accuracy estimate of the decoded weight sum:
    // |result - s| <= eps_rel * s with probability >= 1 - delta (for s >= 1).
    virtual double estimate_sum(const WeightOracle& oracle, std::size_t m, double eps_rel,
                                double delta, Rng& rng) const = 0;

    // One index i drawn with probability w_i / sum(w), promised
    // sum(w) >= a_lower * m on entry.
    virtual std::size_t draw_index(const WeightOracle& oracle, std::size_t m, double a_lower,
                                   Rng& rng) const = 0;
};

// Statevector simulation: state preparation with amplitude amplification for
// draws, phase-estimation outcome sampling for sum estimates.  All charges
// flow through the oracle's application counter.
class ExactBackend final : public Backend {
public:
    std::string name() const override { return "exact"; }
    double estimate_sum(const WeightOracle& oracle, std::size_t m, double eps_rel, double delta,
                        Rng& rng) const override;
    std::size_t draw_index(const WeightOracle& oracle, std::size_t m, double a_lower,
                           Rng& rng) const override;
};

// Exact classical answers plus theorem-shaped charges, with the theorem's
// failure probability injected so downstream robustness claims stay honest.
class CostModelBackend final : public Backend {
public:
    std::string name() const override { return "cost-model"; }
    double estimate_sum(const WeightOracle& oracle, std::size_t m, double eps_rel, double delta,
                        Rng& rng) const override;
    std::size_t draw_index(const WeightOracle& oracle, std::size_t m, double a_lower,
                           Rng& rng) const override;
};

// Charged query count for one cost-model sum estimate.
std::uint64_t cost_model_count_queries(std::size_t m, double eps_rel, double delta);

std::unique_ptr<Backend> make_backend(const std::string& name);

} // namespace qsb
