#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qsb/rng.hpp"

namespace qsb {

using Complex = std::complex<double>;

// Named, contiguous qubit ranges inside one amplitude index.  Bit 0 of the
// index is qubit 0; a register at offset o with width w owns bits [o, o+w).
struct RegisterSpec {
    std::string name;
    int offset = 0;
    int width = 0;
};

class RegisterLayout {
public:
    int add(const std::string& name, int width); // returns the register's offset
    const RegisterSpec& find(const std::string& name) const;
    bool has(const std::string& name) const;
    int qubit_count() const { return qubits_; }

private:
    std::vector<RegisterSpec> regs_;
    int qubits_ = 0;
};

inline int ceil_log2(std::uint64_t n) {
    int k = 0;
    while ((std::uint64_t{1} << k) < n) ++k;
    return k;
}

struct MeasureResult {
    std::uint64_t outcome = 0;
    double probability = 0.0;
};

// Dense amplitude vector over a register layout.  Desk-scale on purpose: the
// constructor refuses more than 24 qubits.
class StateVector {
public:
    explicit StateVector(RegisterLayout layout);
    static StateVector zero_state(RegisterLayout layout); // |0...0>

    const RegisterLayout& layout() const { return layout_; }
    std::uint64_t dimension() const { return amps_.size(); }
    Complex& amp(std::uint64_t i) { return amps_[i]; }
    const Complex& amp(std::uint64_t i) const { return amps_[i]; }

    std::uint64_t extract(const RegisterSpec& reg, std::uint64_t basis) const {
        return (basis >> reg.offset) & ((std::uint64_t{1} << reg.width) - 1);
    }

    double norm_sq() const;
    // Throws ContractError if |norm - 1| exceeds tol; every public operation
    // is norm-preserving, so a failure here means a broken gate.
    void check_normalized(double tol = 1e-10) const;

    double probability_of(const std::string& reg, std::uint64_t value) const;

    // Samples the register, collapses, renormalizes.  Deterministic given the
    // rng state.
    MeasureResult measure(const std::string& reg, Rng& rng);

    // New state containing only the named register, taken from the slice
    // where every other qubit is 0.  Precondition: all mass lives there.
    StateVector extract_register(const std::string& reg) const;

private:
    RegisterLayout layout_;
    std::vector<Complex> amps_;
};

} // namespace qsb
