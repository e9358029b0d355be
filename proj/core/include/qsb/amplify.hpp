#pragma once

#include <functional>
#include <string>

#include "qsb/ledger.hpp"
#include "qsb/oracles.hpp"
#include "qsb/rng.hpp"
#include "qsb/statevector.hpp"

namespace qsb {

// A state-preparation unitary with a designated one-qubit success flag
// (flag 0 = good subspace).  apply/apply_inverse must be exact inverses;
// queries_per_application is billed on each of them.
struct FlaggedUnitary {
    RegisterLayout layout;
    std::string flag_reg;
    std::function<void(StateVector&)> apply;
    std::function<void(StateVector&)> apply_inverse;
    std::uint64_t queries_per_application = 0;
    const WeightOracle* oracle = nullptr; // billed if set
};

// The weight-distribution loader: |0...0> -> (1/sqrt(2^k)) sum_i |i>
// (sqrt(M_i)|0> + sqrt(1-M_i)|1>) restricted to i < m, built from a
// Householder spreader on the index register and one compute/uncompute pair
// of oracle queries driving the flag rotation (hence 2 queries per
// application).  Index register "index", flag register "flag".
FlaggedUnitary make_weight_preparation(const WeightOracle& oracle, std::size_t m);

struct AmplifyStats {
    int rounds = 0;               // Grover reflections applied
    std::uint64_t u_applications = 0; // U/U^dagger count, initial preparation included
    double initial_good_mass = 0.0;
    double final_good_mass = 0.0; // in [1/2, 1] on success paths
};

// Amplitude amplification with a known lower bound a_lower on the good mass.
// Returns the prepared-and-amplified state; the round count is
// floor((pi/4)/asin(sqrt(a))) at the state's actual good mass a (read off the
// simulated amplitudes), which never exceeds the same formula at a_lower, so
// u_applications <= 3/sqrt(a_lower).  a >= 1/2 short-circuits to zero rounds.
// Throws ContractError if the prepared mass undercuts a_lower.
AmplifyStats amplitude_amplify_in_place(StateVector& state, const FlaggedUnitary& u,
                                        double a_lower, CostLedger* ledger);

struct AmplifiedState {
    StateVector state;
    AmplifyStats stats;
};
AmplifiedState amplitude_amplify(const FlaggedUnitary& u, double a_lower, CostLedger* ledger);

// Loads D_i = M_i / sum(M) as an index-register state: amplify, measure the
// flag, retry on failure (success probability >= 1/2 per attempt, expected
// attempts <= 2).  64 consecutive failures is declared an anomaly.
// Precondition: sum(M) >= kappa * m.
struct PreparedDistribution {
    StateVector state; // index register only
    int attempts = 1;
    AmplifyStats last_amplify;
};
PreparedDistribution prepare_distribution_state(const WeightOracle& oracle, std::size_t m,
                                                double kappa, Rng& rng, CostLedger* ledger);

inline constexpr double kAmplifyConstant = 3.0;      // c_A: applications <= c_A / sqrt(a_lower)
inline constexpr int kPreparationAttemptCeiling = 64;

} // namespace qsb
