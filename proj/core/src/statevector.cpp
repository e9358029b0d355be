#include "qsb/statevector.hpp"

#include <cmath>

#include "qsb/errors.hpp"

namespace qsb {

int RegisterLayout::add(const std::string& name, int width) {
    if (width < 1) throw ConfigError("register '" + name + "': width must be >= 1");
    if (has(name)) throw ConfigError("register '" + name + "' already exists");
    int offset = qubits_;
    regs_.push_back({name, offset, width});
    qubits_ += width;
    return offset;
}

const RegisterSpec& RegisterLayout::find(const std::string& name) const {
    for (const auto& r : regs_)
        if (r.name == name) return r;
    throw ConfigError("no register named '" + name + "'");
}

bool RegisterLayout::has(const std::string& name) const {
    for (const auto& r : regs_)
        if (r.name == name) return true;
    return false;
}

StateVector::StateVector(RegisterLayout layout) : layout_(std::move(layout)) {
    if (layout_.qubit_count() < 1) throw ConfigError("state needs at least one qubit");
    if (layout_.qubit_count() > 24) throw ConfigError("state exceeds the 24-qubit simulator cap");
    amps_.assign(std::uint64_t{1} << layout_.qubit_count(), Complex{0.0, 0.0});
}

StateVector StateVector::zero_state(RegisterLayout layout) {
    StateVector s(std::move(layout));
    s.amps_[0] = Complex{1.0, 0.0};
    return s;
}

double StateVector::norm_sq() const {
    double n = 0.0;
    for (const auto& a : amps_) n += std::norm(a);
    return n;
}

void StateVector::check_normalized(double tol) const {
    if (std::abs(norm_sq() - 1.0) > tol)
        throw ContractError("state norm drifted: |norm^2 - 1| = " +
                            std::to_string(std::abs(norm_sq() - 1.0)));
}

double StateVector::probability_of(const std::string& reg, std::uint64_t value) const {
    const auto& r = layout_.find(reg);
    double p = 0.0;
    for (std::uint64_t i = 0; i < dimension(); ++i)
        if (extract(r, i) == value) p += std::norm(amps_[i]);
    return p;
}

MeasureResult StateVector::measure(const std::string& reg, Rng& rng) {
    const auto& r = layout_.find(reg);
    const std::uint64_t values = std::uint64_t{1} << r.width;
    std::vector<double> marginal(values, 0.0);
    for (std::uint64_t i = 0; i < dimension(); ++i) marginal[extract(r, i)] += std::norm(amps_[i]);

    double total = 0.0;
    for (double p : marginal) total += p;
    if (total < 1e-12) throw ContractError("measure: state has no mass");

    const double u = rng.uniform01() * total;
    double acc = 0.0;
    std::uint64_t outcome = values - 1;
    for (std::uint64_t v = 0; v < values; ++v) {
        acc += marginal[v];
        if (u < acc) {
            outcome = v;
            break;
        }
    }

    const double p_out = marginal[outcome];
    const double scale = 1.0 / std::sqrt(p_out);
    for (std::uint64_t i = 0; i < dimension(); ++i) {
        if (extract(r, i) == outcome)
            amps_[i] *= scale;
        else
            amps_[i] = Complex{0.0, 0.0};
    }
    return {outcome, p_out / total};
}

StateVector StateVector::extract_register(const std::string& reg) const {
    const auto& r = layout_.find(reg);
    RegisterLayout sub;
    sub.add(r.name, r.width);
    StateVector out(sub);

    const std::uint64_t mask_all = dimension() - 1;
    const std::uint64_t reg_mask = ((std::uint64_t{1} << r.width) - 1) << r.offset;
    const std::uint64_t other_mask = mask_all & ~reg_mask;

    double outside = 0.0;
    for (std::uint64_t i = 0; i < dimension(); ++i) {
        if ((i & other_mask) == 0)
            out.amp(extract(r, i)) = amps_[i];
        else
            outside += std::norm(amps_[i]);
    }
    if (outside > 1e-12)
        throw ContractError("extract_register: mass remains outside the requested register");
    return out;
}

} // namespace qsb
