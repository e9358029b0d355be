#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qsb/dataset.hpp"
#include "qsb/hypothesis.hpp"
#include "qsb/ledger.hpp"
#include "qsb/statevector.hpp"

namespace qsb {

// Query access to a string of values in [0,1], encoded on a fixed-point grid
// e/(2^bits - 1).  One charge_application() per unitary application of the
// oracle, no matter how many basis states it touches in superposition; the
// optional per-application hook is how on-demand weight strings bill their
// own reconstruction cost (hypothesis and sample queries) on top.
class WeightOracle {
public:
    WeightOracle(std::span<const double> values, int bits = 32, CostLedger* ledger = nullptr);

    std::size_t size() const { return encoded_.size(); }
    int bits() const { return bits_; }

    std::uint64_t encoded(std::size_t i) const; // 0 for i >= size(): padding reads as 0
    double decoded(std::size_t i) const;
    double decoded_sum() const; // compensated; simulator-side, not charged

    void charge_application(std::uint64_t count = 1) const;
    // Classical per-element read (rejection sampling); one oracle query each.
    double classical_lookup(std::size_t i) const;

    void set_application_hook(std::function<void(CostLedger&, std::uint64_t)> hook) {
        hook_ = std::move(hook);
    }
    CostLedger* ledger() const { return ledger_; }

private:
    std::vector<std::uint64_t> encoded_;
    int bits_;
    CostLedger* ledger_;
    std::function<void(CostLedger&, std::uint64_t)> hook_;
};

// |i>|b> -> |i, (b + z_i) mod alphabet> on the computational basis, where z_i
// is the oracle's encoded integer.  alphabet = 0 means 2^width of the value
// register.  Set invert for the subtracting inverse (uncompute).
void apply_oracle(StateVector& state, const WeightOracle& oracle, const std::string& index_reg,
                  const std::string& value_reg, std::uint64_t alphabet = 0, bool invert = false);

// Hypothesis evaluations lifted to the simulator: |i>|b> -> |i> |h(x_i) * b>
// on a one-qubit label register encoding +1 as |0> and -1 as |1>.  Each
// application charges one hypothesis query.  Hypotheses must be registered
// (which freezes their evaluations on the sample) before use.
class HypothesisOracleSet {
public:
    HypothesisOracleSet(const LabeledSample& s, CostLedger* ledger) : s_(&s), ledger_(ledger) {}

    void register_hypothesis(const HypothesisPtr& h);
    bool is_registered(const std::string& id) const { return table_.count(id) > 0; }

    void apply_superposed(StateVector& state, const std::string& hypothesis_id,
                          const std::string& index_reg, const std::string& label_reg) const;

private:
    const LabeledSample* s_;
    CostLedger* ledger_;
    std::map<std::string, std::vector<std::int8_t>> table_; // id -> h(x_i) per index
};

} // namespace qsb
