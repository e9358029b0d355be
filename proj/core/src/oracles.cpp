#include "qsb/oracles.hpp"

#include <cmath>

#include "qsb/errors.hpp"
#include "qsb/numeric.hpp"

namespace qsb {

WeightOracle::WeightOracle(std::span<const double> values, int bits, CostLedger* ledger)
    : bits_(bits), ledger_(ledger) {
    if (bits < 1 || bits > 62) throw ConfigError("WeightOracle: bits must be in [1,62]");
    encoded_.reserve(values.size());
    const double scale = static_cast<double>((std::uint64_t{1} << bits) - 1);
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("WeightOracle: values must lie in [0,1]");
        encoded_.push_back(static_cast<std::uint64_t>(std::llround(v * scale)));
    }
}

std::uint64_t WeightOracle::encoded(std::size_t i) const {
    return i < encoded_.size() ? encoded_[i] : 0;
}

double WeightOracle::decoded(std::size_t i) const {
    const double scale = static_cast<double>((std::uint64_t{1} << bits_) - 1);
    return static_cast<double>(encoded(i)) / scale;
}

double WeightOracle::decoded_sum() const {
    CompensatedSum acc;
    for (std::size_t i = 0; i < encoded_.size(); ++i) acc.add(decoded(i));
    return acc.value();
}

void WeightOracle::charge_application(std::uint64_t count) const {
    if (!ledger_) return;
    ledger_->add_oracle(count);
    if (hook_) hook_(*ledger_, count);
}

double WeightOracle::classical_lookup(std::size_t i) const {
    charge_application(1);
    return decoded(i);
}

void apply_oracle(StateVector& state, const WeightOracle& oracle, const std::string& index_reg,
                  const std::string& value_reg, std::uint64_t alphabet, bool invert) {
    const auto& ir = state.layout().find(index_reg);
    const auto& vr = state.layout().find(value_reg);
    const std::uint64_t reg_values = std::uint64_t{1} << vr.width;
    if (alphabet == 0) alphabet = reg_values;
    if (alphabet > reg_values)
        throw ConfigError("apply_oracle: alphabet does not fit the value register");
    for (std::size_t i = 0; i < oracle.size(); ++i)
        if (oracle.encoded(i) >= alphabet)
            throw ConfigError("apply_oracle: oracle value outside the alphabet");

    const std::uint64_t dim = state.dimension();
    std::vector<Complex> out(dim, Complex{0.0, 0.0});
    const std::uint64_t value_mask = (reg_values - 1) << vr.offset;
    for (std::uint64_t basis = 0; basis < dim; ++basis) {
        const Complex& a = state.amp(basis);
        if (a == Complex{0.0, 0.0}) continue;
        const std::uint64_t i = state.extract(ir, basis);
        const std::uint64_t b = state.extract(vr, basis);
        if (b >= alphabet) throw ContractError("apply_oracle: value register outside the alphabet");
        const std::uint64_t z = oracle.encoded(i);
        const std::uint64_t nb = invert ? (b + alphabet - z) % alphabet : (b + z) % alphabet;
        const std::uint64_t target = (basis & ~value_mask) | (nb << vr.offset);
        out[target] = a;
    }
    for (std::uint64_t basis = 0; basis < dim; ++basis) state.amp(basis) = out[basis];
    oracle.charge_application(1);
}

void HypothesisOracleSet::register_hypothesis(const HypothesisPtr& h) {
    if (!h) throw ConfigError("register_hypothesis: null hypothesis");
    auto& evals = table_[h->identifier()];
    if (!evals.empty()) return; // already frozen
    evals.reserve(s_->size());
    for (std::size_t i = 0; i < s_->size(); ++i)
        evals.push_back(static_cast<std::int8_t>(h->evaluate((*s_)[i].x)));
}

void HypothesisOracleSet::apply_superposed(StateVector& state, const std::string& hypothesis_id,
                                           const std::string& index_reg,
                                           const std::string& label_reg) const {
    auto it = table_.find(hypothesis_id);
    if (it == table_.end())
        throw ConfigError("hypothesis not registered with the oracle table: " + hypothesis_id);
    const auto& evals = it->second;

    const auto& ir = state.layout().find(index_reg);
    const auto& lr = state.layout().find(label_reg);
    if (lr.width != 1) throw ConfigError("evaluate_superposed: label register must be one qubit");

    // h(x_i) = -1 flips the label qubit on that branch; +1 leaves it alone.
    // Involution by construction: h(x)^2 = 1.
    const std::uint64_t dim = state.dimension();
    const std::uint64_t flip = std::uint64_t{1} << lr.offset;
    for (std::uint64_t basis = 0; basis < dim; ++basis) {
        if ((basis & flip) != 0) continue; // handle each pair once
        const std::uint64_t i = state.extract(ir, basis);
        if (i >= evals.size()) continue; // padding branches carry no evaluation
        if (evals[i] < 0) std::swap(state.amp(basis), state.amp(basis | flip));
    }
    if (ledger_) ledger_->add_hypothesis(1);
}

} // namespace qsb
