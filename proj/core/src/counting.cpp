#include "qsb/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qsb/errors.hpp"
#include "qsb/numeric.hpp"

namespace qsb {

namespace {

constexpr double kPi = std::numbers::pi;

// Squared phase-estimation kernel at real offset d from the peak, as a
// probability over the M-point grid: sin^2(pi d) / (M^2 sin^2(pi d / M)),
// with the removable singularity at d == 0 (mod M) equal to 1.  Sums to
// exactly 1 over any M consecutive grid points for every real peak position.
double kernel_mass(double d, double m_points) {
    const double frac = std::fmod(d, m_points);
    const double inner = std::sin(kPi * frac / m_points);
    if (inner == 0.0) return 1.0;
    const double outer = std::sin(kPi * frac);
    const double ratio = outer / (m_points * inner);
    return ratio * ratio;
}

} // namespace

int counting_precision_bits(double n_items, double eps_rel) {
    if (!(n_items >= 1.0)) throw DomainError("counting_precision_bits: n_items >= 1 required");
    if (!(eps_rel > 0.0 && eps_rel < 1.0))
        throw DomainError("counting_precision_bits: eps_rel in (0,1) required");
    const double raw = std::log2(std::sqrt(n_items) / eps_rel);
    return static_cast<int>(std::ceil(raw)) + 3;
}

int odd_median_repetitions(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw DomainError("odd_median_repetitions: delta in (0,1) required");
    int r = static_cast<int>(std::ceil(8.0 * std::log(1.0 / delta)));
    if (r < 1) r = 1;
    if (r % 2 == 0) ++r;
    return r;
}

double sample_phase_outcome(double amplitude, std::uint64_t grid_points, Rng& rng) {
    if (!(amplitude >= 0.0 && amplitude <= 1.0))
        throw DomainError("sample_phase_outcome: amplitude in [0,1] required");
    if (grid_points < 2 || (grid_points & (grid_points - 1)) != 0)
        throw DomainError("sample_phase_outcome: grid_points must be a power of two >= 2");

    const double m_points = static_cast<double>(grid_points);
    const double theta = std::asin(std::sqrt(amplitude));
    double peak = m_points * theta / kPi; // in [0, M/2]
    // fair-coin eigenvector branch: the conjugate peak sits at -phi mod M
    if (rng.uniform01() < 0.5) peak = -peak;

    // Walk grid points outward from the nearest integer to the peak; the
    // kernel tail is O(1/d^2), so the walk terminates after O(log M)
    // expected steps.
    const double u = rng.uniform01();
    const std::int64_t m_signed = static_cast<std::int64_t>(grid_points);
    const std::int64_t centre = std::llround(peak);
    double cumulative = 0.0;
    std::int64_t chosen = centre;
    for (std::uint64_t step = 0; step < grid_points; ++step) {
        const std::int64_t offset = (step % 2 == 0)
                                        ? static_cast<std::int64_t>(step / 2)
                                        : -static_cast<std::int64_t>((step + 1) / 2);
        const std::int64_t y_line = centre + offset;
        cumulative += kernel_mass(static_cast<double>(y_line) - peak, m_points);
        chosen = y_line;
        if (cumulative >= u) break;
    }
    std::int64_t y = chosen % m_signed;
    if (y < 0) y += m_signed;
    const double s = std::sin(kPi * static_cast<double>(y) / m_points);
    return s * s;
}

CountEstimate approx_count(std::uint64_t n_items, std::uint64_t marked, double eps_rel,
                           double delta, Rng& rng, CostLedger* ledger) {
    if (n_items == 0 || (n_items & (n_items - 1)) != 0)
        throw DomainError("approx_count: n_items must be a power of two");
    if (marked < 1) throw DomainError("approx_count: at least one marked item required");
    if (marked > n_items) throw DomainError("approx_count: marked exceeds n_items");

    CountEstimate out;
    const int tau = counting_precision_bits(static_cast<double>(n_items), eps_rel);
    out.precision_points = std::uint64_t{1} << tau;
    out.repetitions = odd_median_repetitions(delta);

    const double a = static_cast<double>(marked) / static_cast<double>(n_items);
    std::vector<double> estimates;
    estimates.reserve(static_cast<std::size_t>(out.repetitions));
    for (int r = 0; r < out.repetitions; ++r) {
        const double a_hat = sample_phase_outcome(a, out.precision_points, rng);
        estimates.push_back(a_hat * static_cast<double>(n_items));
    }
    out.estimate = median(estimates);

    // Each Grover iterate wraps the marking oracle in a compute/uncompute
    // pair on both reflections; phase estimation applies M-1 iterates plus
    // one state preparation per repetition.
    out.oracle_queries = static_cast<std::uint64_t>(out.repetitions) *
                         (4 * (out.precision_points - 1) + 2);
    if (ledger) ledger->add_oracle(out.oracle_queries);
    return out;
}

} // namespace qsb
