#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qsb/ledger.hpp"
#include "qsb/rng.hpp"

namespace qsb {

using Point = std::vector<double>;
using PointView = std::span<const double>;

struct LabeledExample {
    Point x;
    int y = 1; // -1 or +1
};

struct LabeledSample {
    std::vector<LabeledExample> examples;

    std::size_t size() const { return examples.size(); }
    const LabeledExample& operator[](std::size_t i) const { return examples[i]; }
    std::size_t dimension() const { return examples.empty() ? 0 : examples[0].x.size(); }
};

/// Synthetic learning problems with a known target, so every error estimate
/// in the test suites can be checked against ground truth.
///
/// Families:
///   majority     majority vote of the first k coordinates (k odd) over
///                uniform {0,1}^n
///   threshold    sign(x - location) over uniform [0,1], n == 1
///   conjunction  AND of the first k coordinates over uniform {0,1}^n
struct SyntheticTask {
    enum class Family { majority, threshold, conjunction };

    Family family = Family::majority;
    int n = 1;                        // ambient dimension
    int k = 1;                        // relevant coordinates (majority, conjunction)
    double threshold_location = 0.5;  // threshold family only
    double noise_rate = 0.0;          // fraction of training labels flipped

    int target(PointView x) const;    // noiseless label, -1 or +1
    Point sample_point(Rng& rng) const;
    void validate() const;            // throws ConfigError
    std::string name() const;
};

SyntheticTask make_majority_task(int n, int k, double noise_rate = 0.0);
SyntheticTask make_threshold_task(double location = 0.5, double noise_rate = 0.0);
SyntheticTask make_conjunction_task(int n, int k, double noise_rate = 0.0);
SyntheticTask parse_task(const std::string& family, int n, int k, double threshold_location,
                         double noise_rate);

// m iid points labeled by the target, then floor(noise_rate * m) labels at
// distinct uniformly chosen positions flipped.  Pure function of
// (task, m, seed): same inputs, same sample, bit for bit.
LabeledSample draw_sample(const SyntheticTask& task, std::size_t m, std::uint64_t seed);

class Hypothesis; // hypothesis.hpp

// Exact misclassification count; the fraction is count/m, which keeps the
// value on the grid {0, 1/m, ..., 1}.
std::size_t misclassified_count(const Hypothesis& h, const LabeledSample& s);
double empirical_error(const Hypothesis& h, const LabeledSample& s);

struct Ensemble; // hypothesis.hpp
std::size_t misclassified_count(const Ensemble& e, const LabeledSample& s);
double empirical_error(const Ensemble& e, const LabeledSample& s);

// Monte Carlo estimate of the true error on fresh noiseless points, with a
// 95% normal-approximation binomial half-width.
struct GeneralizationEstimate {
    double estimate = 0.0;
    double halfwidth95 = 0.0;
    std::size_t n_test = 0;
};
GeneralizationEstimate generalization_error_estimate(const Ensemble& e, const SyntheticTask& task,
                                                     std::size_t n_test, std::uint64_t seed);
GeneralizationEstimate generalization_error_estimate(const Hypothesis& h, const SyntheticTask& task,
                                                     std::size_t n_test, std::uint64_t seed);

// Read-only indexed view of a sample that bills every lookup to the ambient
// ledger's classical sample-query counter.
class SampleOracle {
public:
    SampleOracle(const LabeledSample& s, CostLedger& ledger) : s_(&s), ledger_(&ledger) {}

    const LabeledExample& query(std::size_t i) const;
    std::size_t size() const { return s_->size(); }

private:
    const LabeledSample* s_;
    CostLedger* ledger_;
};

inline SampleOracle oracle_view(const LabeledSample& s, CostLedger& ledger) {
    return SampleOracle(s, ledger);
}

// CSV layout: header "x_1,...,x_n,label", one row per example, label written
// as the literal -1 or 1.  Features are printed with round-trip precision, so
// read(write(s)) == s exactly.
void write_sample_csv(std::ostream& out, const LabeledSample& s);
void write_sample_csv(const std::string& path, const LabeledSample& s);
LabeledSample read_sample_csv(std::istream& in);
LabeledSample read_sample_csv(const std::string& path);

} // namespace qsb
