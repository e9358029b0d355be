#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "qsb/dataset.hpp"
#include "qsb/hypothesis.hpp"
#include "qsb/ledger.hpp"

namespace qsb {

// One boosting round as observed by the driver.  `sum_weights` and
// `max_density` describe the weighting the round started from;
// `sum_weights_after` the weighting it left behind.  `estimate` is the
// backend's (noisy) reading of sum_weights and is NaN for boosters that read
// the sum exactly.
struct IterationRecord {
    int round = 0;
    double sum_weights = 0.0;
    double max_density = 0.0;
    double weak_error = 0.0;
    double sum_weights_after = 0.0;
    double ensemble_error = 0.0;
    double estimate = 0.0;
    bool estimate_in_band = false;
};

struct RunReport {
    std::string booster;
    std::string backend; // empty for classical boosters
    std::string task;
    std::size_t m = 0;

    double gamma = 0.0;
    double kappa = 0.0;
    double epsilon = 0.0;
    double theta = 0.0;
    // accuracy knobs of the estimated-sum variant; NaN when sums are exact.
    // delta_sub is the per-subroutine slice of delta actually handed to the
    // backend each call.
    double epsilon_rel = std::numeric_limits<double>::quiet_NaN();
    double delta = std::numeric_limits<double>::quiet_NaN();
    double delta_sub = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t seed = 0;

    std::string status; // "converged", "iteration-cap", "zero-error", "completed"
    int iterations = 0;
    double training_error = 0.0;
    GeneralizationEstimate heldout; // n_test == 0 when not evaluated

    std::vector<IterationRecord> per_round;
    Ensemble ensemble;
    LedgerSnapshot ledger;
};

// JSON report: every field above except the ensemble members, which live in
// their own text file.  Output is a pure function of the report contents —
// no clocks, no hostnames — so reruns diff clean.
void write_report_json(const RunReport& report, std::ostream& out);
void write_report_json(const RunReport& report, const std::string& path);
RunReport read_report_json(std::istream& in);
RunReport read_report_json(const std::string& path);

// Per-round CSV with the exact column set of IterationRecord.
void write_rounds_csv(const RunReport& report, std::ostream& out);
void write_rounds_csv(const RunReport& report, const std::string& path);

// Human-readable digest of one report (the `report` subcommand body).
void print_report_summary(const RunReport& report, std::ostream& out);

} // namespace qsb
