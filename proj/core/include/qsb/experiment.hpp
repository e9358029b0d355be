#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "qsb/config.hpp"
#include "qsb/dataset.hpp"
#include "qsb/numeric.hpp"
#include "qsb/planner.hpp"
#include "qsb/report.hpp"

namespace qsb {

// Everything one boosting run needs, in plain data.  parse_experiment fills
// it from a Config (file plus CLI overrides); run_experiment executes it.
struct ExperimentSpec {
    std::string booster = "smoothboost"; // smoothboost | adaboost | qsmoothboost
    std::string backend = "cost-model";  // qsmoothboost only: exact | cost-model
    std::string learner = "stump";       // stump | target

    SyntheticTask task;

    std::size_t m = 0;       // 0 -> sized by the sample planner, capped below
    std::size_t max_m = 4096;
    int capacity = 0;        // hypothesis-class capacity for the planner;
                             // 0 -> stump default ceil(log2(n)) + 2

    double gamma = 0.1;
    double epsilon = 0.0;    // target error; exactly one of epsilon/kappa may
    double kappa = 0.0;      // be left 0, the other is derived per booster
    double theta = std::numeric_limits<double>::quiet_NaN();
    double eps_rel = 0.09;
    double delta = 0.05;

    std::size_t batch = 8;      // weak-learner sample budget per round
    std::size_t rounds = 32;    // adaboost round count
    std::size_t max_rounds = 0; // smooth-variant cap; 0 -> theory default
    std::size_t heldout = 0;    // held-out evaluation size; 0 -> 10 * m
    std::uint64_t seed = 1;
    int oracle_bits = 32;

    bool full_information = false;
    bool force_exact_sum = false;
    bool memoize = false;
};

ExperimentSpec parse_experiment(const Config& config);

// Every config key parse_experiment and the sweep driver accept; the CLI
// derives one flag per key from this list.
const std::vector<std::string>& known_experiment_keys();

// The sample size actually used: the spec's m if explicit, otherwise the
// planner's requirement clamped to max_m (the provable sizes outgrow the
// desk long before they outgrow the theory).
struct PlanResolution {
    std::size_t m_used = 0;
    bool planned = false;      // true when the planner chose
    bool clamped = false;      // true when max_m overrode the planner
    SampleSizePlan plan;       // meaningful when planned
};
PlanResolution resolve_sample_size(const ExperimentSpec& spec);

RunReport run_experiment(const ExperimentSpec& spec);

// One sweep row per (m, seed) run of the base spec.
struct SweepRow {
    std::string booster;
    std::string backend;
    std::size_t m = 0;
    double gamma = 0.0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    int rounds = 0;
    double training_error = 0.0;
    double heldout_error = 0.0;
    std::uint64_t oracle_queries = 0;
    std::uint64_t weak_learner_calls = 0;
    std::string status;
};

// A scaling exponent is fitted along an axis only when that axis has >= 3
// distinct values and the other axis is held fixed; mixing axes in one fit
// would confound the exponents.
struct SweepOutcome {
    std::vector<SweepRow> rows;     // sorted by (m, gamma, seed)
    bool fitted = false;            // m-axis fit available
    LinearFit queries_vs_m;         // log2(mean oracle queries) on log2(m)
    bool fitted_gamma = false;      // gamma-axis fit available
    LinearFit queries_vs_inv_gamma; // log2(mean oracle queries) on log2(1/gamma)
};

// Runs the base spec at every (m, gamma, seed) cell, up to `workers` in
// parallel; an empty gamma axis means the base spec's gamma.  Each cell is
// seeded independently, so the outcome is identical at any worker count.
SweepOutcome run_sweep(const ExperimentSpec& base, const std::vector<std::size_t>& ms,
                       const std::vector<double>& gammas,
                       const std::vector<std::uint64_t>& seeds, int workers);

void write_sweep_csv(const SweepOutcome& outcome, std::ostream& out);
void write_sweep_csv(const SweepOutcome& outcome, const std::string& path);
std::vector<SweepRow> read_sweep_csv(std::istream& in);
std::vector<SweepRow> read_sweep_csv(const std::string& path);

} // namespace qsb
