#include "qsb/amplify.hpp"

#include <cmath>
#include <numbers>

#include "qsb/errors.hpp"

namespace qsb {

namespace {

// Householder reflection H = I - 2 v v^T / <v,v> with v = e_0 - u, where u is
// uniform over the first m index values.  H|0> = |u>, H = H^-1, and it acts
// on the index register alone (flag and padding untouched beyond index < m).
void householder_spread(StateVector& state, std::size_t m) {
    const auto& ir = state.layout().find("index");
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
    // v components: v0 = 1 - 1/sqrt(m) at index 0, -1/sqrt(m) at 1..m-1
    const double v0 = 1.0 - inv_sqrt_m;
    const double vi = -inv_sqrt_m;
    const double vv = v0 * v0 + static_cast<double>(m - 1) * (vi * vi);
    if (vv == 0.0) return; // m == 1: nothing to spread

    const std::uint64_t dim = state.dimension();
    const std::uint64_t index_mask = ((std::uint64_t{1} << ir.width) - 1) << ir.offset;
    // iterate over the non-index configuration; project each slice
    for (std::uint64_t rest = 0; rest < dim; ++rest) {
        if ((rest & index_mask) != 0) continue;
        Complex dot{0.0, 0.0};
        for (std::size_t i = 0; i < m; ++i) {
            const std::uint64_t basis = rest | (static_cast<std::uint64_t>(i) << ir.offset);
            dot += (i == 0 ? v0 : vi) * state.amp(basis);
        }
        const Complex coeff = 2.0 * dot / vv;
        for (std::size_t i = 0; i < m; ++i) {
            const std::uint64_t basis = rest | (static_cast<std::uint64_t>(i) << ir.offset);
            state.amp(basis) -= coeff * (i == 0 ? v0 : vi);
        }
    }
}

// Per-index flag rotation: |i>|0> -> |i>(cos b_i |0> + sin b_i |1>) with
// cos b_i = sqrt(M_i); applied to arbitrary states as the block-diagonal
// rotation it is.  invert applies the transpose.
void flag_rotation(StateVector& state, const WeightOracle& oracle, bool invert) {
    const auto& ir = state.layout().find("index");
    const auto& fr = state.layout().find("flag");
    const std::uint64_t flip = std::uint64_t{1} << fr.offset;
    const std::uint64_t dim = state.dimension();
    for (std::uint64_t basis = 0; basis < dim; ++basis) {
        if ((basis & flip) != 0) continue;
        const std::uint64_t i = state.extract(ir, basis);
        const double mi = oracle.decoded(static_cast<std::size_t>(i));
        const double c = std::sqrt(mi);
        const double s = std::sqrt(1.0 - mi);
        const Complex a0 = state.amp(basis);
        const Complex a1 = state.amp(basis | flip);
        if (!invert) {
            state.amp(basis) = c * a0 - s * a1;
            state.amp(basis | flip) = s * a0 + c * a1;
        } else {
            state.amp(basis) = c * a0 + s * a1;
            state.amp(basis | flip) = -s * a0 + c * a1;
        }
    }
}

void reflect_about_zero(StateVector& state) {
    state.amp(0) = -state.amp(0);
}

void reflect_good(StateVector& state, const RegisterSpec& flag) {
    const std::uint64_t dim = state.dimension();
    for (std::uint64_t basis = 0; basis < dim; ++basis)
        if (state.extract(flag, basis) == 0) state.amp(basis) = -state.amp(basis);
}

} // namespace

FlaggedUnitary make_weight_preparation(const WeightOracle& oracle, std::size_t m) {
    if (m == 0) throw DomainError("make_weight_preparation: m == 0");
    if (m > (std::size_t{1} << 12))
        throw ConfigError("make_weight_preparation: index register capped at 12 qubits");
    FlaggedUnitary u;
    const int k = std::max(1, ceil_log2(m));
    u.layout.add("index", k);
    u.layout.add("flag", 1);
    u.flag_reg = "flag";
    u.queries_per_application = 2; // compute + uncompute around the rotation
    u.oracle = &oracle;
    u.apply = [&oracle, m](StateVector& s) {
        householder_spread(s, m);
        flag_rotation(s, oracle, false);
    };
    u.apply_inverse = [&oracle, m](StateVector& s) {
        flag_rotation(s, oracle, true);
        householder_spread(s, m);
    };
    return u;
}

namespace {

void bill_application(const FlaggedUnitary& u, CostLedger* ledger) {
    if (u.oracle)
        u.oracle->charge_application(u.queries_per_application);
    else if (ledger)
        ledger->add_oracle(u.queries_per_application);
}

} // namespace

AmplifyStats amplitude_amplify_in_place(StateVector& state, const FlaggedUnitary& u,
                                        double a_lower, CostLedger* ledger) {
    if (!(a_lower > 0.0 && a_lower <= 1.0))
        throw DomainError("amplitude_amplify: a_lower must be in (0,1]");
    const auto& flag = state.layout().find(u.flag_reg);

    AmplifyStats stats;
    stats.u_applications = 1; // the preparation that produced `state`
    stats.initial_good_mass = state.probability_of(u.flag_reg, 0);
    const double a = stats.initial_good_mass;
    if (a < a_lower * (1.0 - 1e-9))
        throw ContractError("amplitude_amplify: good mass " + std::to_string(a) +
                            " undercuts the promised lower bound " + std::to_string(a_lower));

    int rounds = 0;
    if (a < 0.5 && a > 0.0) {
        const double theta = std::asin(std::sqrt(a));
        rounds = static_cast<int>(std::floor((std::numbers::pi / 4.0) / theta));
        // (2j+1) theta lands in (pi/2 - theta, pi/2 + theta]; since theta <=
        // pi/4 here, the final good mass is at least cos^2(theta) = 1 - a >= 1/2.
    }
    for (int r = 0; r < rounds; ++r) {
        reflect_good(state, flag);
        u.apply_inverse(state);
        bill_application(u, ledger);
        reflect_about_zero(state);
        u.apply(state);
        bill_application(u, ledger);
        stats.u_applications += 2;
    }
    stats.rounds = rounds;
    if (ledger) ledger->add_amplification_rounds(static_cast<std::uint64_t>(rounds));
    stats.final_good_mass = state.probability_of(u.flag_reg, 0);

    if (stats.final_good_mass < 0.5 - 1e-9)
        throw ContractError("amplitude_amplify: final good mass " +
                            std::to_string(stats.final_good_mass) + " fell below 1/2");
    return stats;
}

AmplifiedState amplitude_amplify(const FlaggedUnitary& u, double a_lower, CostLedger* ledger) {
    StateVector state = StateVector::zero_state(u.layout);
    u.apply(state);
    bill_application(u, ledger);
    AmplifyStats stats = amplitude_amplify_in_place(state, u, a_lower, ledger);
    return {std::move(state), stats};
}

PreparedDistribution prepare_distribution_state(const WeightOracle& oracle, std::size_t m,
                                                double kappa, Rng& rng, CostLedger* ledger) {
    if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("prepare_distribution_state: kappa in (0,1)");
    const double sum = oracle.decoded_sum();
    // fixed-point rounding can nibble at most m ulps of the encoding grid
    if (sum < kappa * static_cast<double>(m) * (1.0 - 1e-9) - 1e-12)
        throw DomainError("prepare_distribution_state: sum of weights below kappa * m");

    FlaggedUnitary u = make_weight_preparation(oracle, m);
    // The good mass of the prepared state is sum / 2^k, not sum / m: the
    // index register pads m up to a power of two and the padding is all bad.
    const double padded = static_cast<double>(std::uint64_t{1} << u.layout.find("index").width);
    const double a_lower = kappa * static_cast<double>(m) / padded;
    for (int attempt = 1; attempt <= kPreparationAttemptCeiling; ++attempt) {
        AmplifiedState amplified = amplitude_amplify(u, a_lower, ledger);
        MeasureResult flag = amplified.state.measure("flag", rng);
        if (flag.outcome == 0) {
            PreparedDistribution prep{amplified.state.extract_register("index"), attempt,
                                      amplified.stats};
            prep.state.check_normalized();
            return prep;
        }
    }
    throw StatisticalAnomalyError(
        "prepare_distribution_state: no success in 64 attempts at per-attempt probability >= 1/2");
}

} // namespace qsb
