#include "qsb/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "qsb/adaboost.hpp"
#include "qsb/backend.hpp"
#include "qsb/errors.hpp"
#include "qsb/qsmoothboost.hpp"
#include "qsb/smoothboost.hpp"
#include "qsb/weak_learner.hpp"

namespace qsb {

namespace {

const std::vector<std::string> kKnownKeys = {
    "booster",  "backend",   "learner",  "task",    "n",
    "k",        "threshold", "noise",    "m",       "max_m",
    "capacity", "gamma",     "epsilon",  "kappa",   "theta",
    "eps_rel",  "delta",     "batch",    "rounds",  "max_rounds", "heldout",
    "seed",     "oracle_bits", "full_information", "force_exact_sum", "memoize",
    "sweep_m",  "sweep_gamma", "sweep_seeds", "workers", "out",
};

// kappa and epsilon are two views of the same knob; the conversion factor is
// the booster's error multiple at termination
double error_multiple(const std::string& booster) {
    return booster == "qsmoothboost" ? 2.2 : 2.0;
}

double derived_kappa(const ExperimentSpec& spec) {
    if (spec.kappa > 0.0) return spec.kappa;
    if (spec.epsilon > 0.0) return spec.epsilon / error_multiple(spec.booster);
    throw ConfigError("set either 'epsilon' or 'kappa'");
}

HypothesisPtr target_hypothesis(const SyntheticTask& task) {
    return std::make_shared<FunctionHypothesis>(
        "task-target", [task](PointView x) { return task.target(x); });
}

std::unique_ptr<WeakLearner> make_learner(const ExperimentSpec& spec) {
    if (spec.learner == "stump")
        return std::make_unique<StumpLearner>(static_cast<int>(spec.batch));
    if (spec.learner == "target")
        return std::make_unique<TargetLearner>(target_hypothesis(spec.task),
                                               static_cast<int>(spec.batch));
    throw ConfigError("unknown learner '" + spec.learner + "' (expected stump or target)");
}

} // namespace

const std::vector<std::string>& known_experiment_keys() { return kKnownKeys; }

ExperimentSpec parse_experiment(const Config& config) {
    const auto unknown = config.unknown_keys(kKnownKeys);
    if (!unknown.empty()) {
        std::string msg = "unknown config key(s):";
        for (const auto& k : unknown) msg += " '" + k + "'";
        throw ConfigError(msg);
    }

    ExperimentSpec spec;
    spec.booster = config.get_string("booster", spec.booster);
    if (spec.booster != "smoothboost" && spec.booster != "adaboost" &&
        spec.booster != "qsmoothboost")
        throw ConfigError("unknown booster '" + spec.booster +
                          "' (expected smoothboost, adaboost, or qsmoothboost)");
    spec.backend = config.get_string("backend", spec.backend);
    spec.learner = config.get_string("learner", spec.learner);

    spec.task = parse_task(config.get_string("task", "majority"),
                           static_cast<int>(config.get_u64("n", 5)),
                           static_cast<int>(config.get_u64("k", 3)),
                           config.get_double("threshold", 0.5),
                           config.get_double("noise", 0.0));

    spec.m = static_cast<std::size_t>(config.get_u64("m", 0));
    spec.max_m = static_cast<std::size_t>(config.get_u64("max_m", spec.max_m));
    spec.capacity = static_cast<int>(config.get_u64("capacity", 0));

    spec.gamma = config.get_double("gamma", spec.gamma);
    spec.epsilon = config.get_double("epsilon", 0.0);
    spec.kappa = config.get_double("kappa", 0.0);
    if (spec.epsilon > 0.0 && spec.kappa > 0.0)
        throw ConfigError("set only one of 'epsilon' and 'kappa'");
    spec.theta = config.get_double("theta", spec.theta);
    spec.eps_rel = config.get_double("eps_rel", spec.eps_rel);
    spec.delta = config.get_double("delta", spec.delta);

    spec.batch = static_cast<std::size_t>(config.get_u64("batch", spec.batch));
    spec.rounds = static_cast<std::size_t>(config.get_u64("rounds", spec.rounds));
    spec.max_rounds = static_cast<std::size_t>(config.get_u64("max_rounds", 0));
    spec.heldout = static_cast<std::size_t>(config.get_u64("heldout", 0));
    spec.seed = config.get_u64("seed", spec.seed);
    spec.oracle_bits = static_cast<int>(config.get_u64("oracle_bits", 32));

    spec.full_information = config.get_bool("full_information", false);
    spec.force_exact_sum = config.get_bool("force_exact_sum", false);
    spec.memoize = config.get_bool("memoize", false);
    return spec;
}

PlanResolution resolve_sample_size(const ExperimentSpec& spec) {
    PlanResolution res;
    if (spec.m > 0) {
        res.m_used = spec.m;
        return res;
    }
    if (spec.booster == "adaboost")
        throw ConfigError("adaboost has no sample planner; set 'm' explicitly");

    const double kappa = derived_kappa(spec);
    const double epsilon = spec.epsilon > 0.0 ? spec.epsilon : error_multiple(spec.booster) * kappa;
    const int capacity = spec.capacity > 0
                             ? spec.capacity
                             : static_cast<int>(std::ceil(std::log2(
                                   static_cast<double>(std::max(spec.task.n, 2))))) + 2;
    res.plan = sample_size(capacity, epsilon, spec.delta, spec.gamma);
    res.planned = true;
    const auto required = static_cast<std::size_t>(res.plan.m_required);
    res.m_used = std::min(required, spec.max_m);
    res.clamped = required > spec.max_m;
    return res;
}

RunReport run_experiment(const ExperimentSpec& spec) {
    spec.task.validate();
    const PlanResolution res = resolve_sample_size(spec);
    const std::size_t m = res.m_used;
    const LabeledSample sample = draw_sample(spec.task, m, spec.seed);
    const std::unique_ptr<WeakLearner> learner = make_learner(spec);
    CostLedger ledger;

    RunReport report;
    if (spec.booster == "smoothboost") {
        SmoothBoostConfig cfg;
        cfg.gamma = spec.gamma;
        cfg.kappa = derived_kappa(spec);
        cfg.theta = spec.theta;
        cfg.max_rounds = spec.max_rounds;
        cfg.seed = spec.seed;
        cfg.full_information = spec.full_information;
        report = smoothboost_run(sample, *learner, cfg, ledger);
    } else if (spec.booster == "adaboost") {
        AdaBoostConfig cfg;
        cfg.rounds = spec.rounds;
        cfg.seed = spec.seed;
        report = adaboost_run(sample, *learner, cfg, ledger);
    } else if (spec.booster == "qsmoothboost") {
        QSmoothBoostConfig cfg;
        cfg.gamma = spec.gamma;
        cfg.kappa = derived_kappa(spec);
        cfg.theta = spec.theta;
        cfg.eps_rel = spec.eps_rel;
        cfg.delta = spec.delta;
        cfg.max_rounds = spec.max_rounds;
        cfg.seed = spec.seed;
        cfg.oracle_bits = spec.oracle_bits;
        cfg.force_exact_sum = spec.force_exact_sum;
        cfg.full_information = spec.full_information;
        cfg.memoize = spec.memoize;
        const std::unique_ptr<Backend> backend = make_backend(spec.backend);
        report = qsmoothboost_run(sample, *learner, *backend, cfg, ledger);
    } else {
        throw ConfigError("unknown booster '" + spec.booster + "'");
    }

    report.task = spec.task.name();
    const std::size_t n_test = spec.heldout > 0 ? spec.heldout : 10 * m;
    report.heldout = generalization_error_estimate(report.ensemble, spec.task, n_test, spec.seed);
    return report;
}

SweepOutcome run_sweep(const ExperimentSpec& base, const std::vector<std::size_t>& ms,
                       const std::vector<double>& gammas,
                       const std::vector<std::uint64_t>& seeds, int workers) {
    if (ms.empty()) throw ConfigError("sweep: 'sweep_m' must list at least one sample size");
    if (seeds.empty()) throw ConfigError("sweep: at least one seed required");
    const std::vector<double> gamma_axis = gammas.empty() ? std::vector<double>{base.gamma} : gammas;
    for (double g : gamma_axis)
        if (!(g > 0.0 && g < 0.5))
            throw ConfigError("sweep: 'sweep_gamma' values must lie in (0, 1/2)");

    struct Job {
        std::size_t m;
        double gamma;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t m : ms)
        for (double gamma : gamma_axis)
            for (std::uint64_t seed : seeds) jobs.push_back({m, gamma, seed});

    SweepOutcome outcome;
    outcome.rows.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    const auto body = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size() || failed.load()) return;
            try {
                ExperimentSpec spec = base;
                spec.m = jobs[i].m;
                spec.gamma = jobs[i].gamma;
                spec.seed = jobs[i].seed;
                const RunReport report = run_experiment(spec);
                SweepRow& row = outcome.rows[i];
                row.booster = report.booster;
                row.backend = report.backend;
                row.m = report.m;
                row.gamma = report.gamma;
                row.epsilon = report.epsilon;
                row.seed = report.seed;
                row.rounds = report.iterations;
                row.training_error = report.training_error;
                row.heldout_error = report.heldout.estimate;
                row.oracle_queries = report.ledger.oracle_queries;
                row.weak_learner_calls = report.ledger.weak_learner_calls;
                row.status = report.status;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) first_error = std::current_exception();
            }
        }
    };

    int n_workers = workers > 0 ? workers : 1;
    n_workers = std::min<int>(n_workers, static_cast<int>(jobs.size()));
    if (n_workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) std::rethrow_exception(first_error);

    // log-log scaling fits, each along its own axis with the other one fixed
    std::map<std::size_t, std::pair<double, std::size_t>> by_m;
    std::map<double, std::pair<double, std::size_t>> by_gamma;
    for (const SweepRow& row : outcome.rows) {
        auto& am = by_m[row.m];
        am.first += static_cast<double>(row.oracle_queries);
        am.second += 1;
        auto& ag = by_gamma[row.gamma];
        ag.first += static_cast<double>(row.oracle_queries);
        ag.second += 1;
    }
    if (by_m.size() >= 3 && by_gamma.size() == 1) {
        std::vector<double> x, y;
        for (const auto& [m, acc] : by_m) {
            x.push_back(std::log2(static_cast<double>(m)));
            y.push_back(std::log2(acc.first / static_cast<double>(acc.second)));
        }
        outcome.queries_vs_m = least_squares(x, y);
        outcome.fitted = true;
    }
    if (by_gamma.size() >= 3 && by_m.size() == 1) {
        std::vector<double> x, y;
        for (const auto& [gamma, acc] : by_gamma) {
            x.push_back(std::log2(1.0 / gamma));
            y.push_back(std::log2(acc.first / static_cast<double>(acc.second)));
        }
        outcome.queries_vs_inv_gamma = least_squares(x, y);
        outcome.fitted_gamma = true;
    }
    return outcome;
}

namespace {

// Stable result-file contract; readers key on these names.
const char kSweepHeader[] =
    "booster,backend,m,gamma,epsilon,seed,T,empirical_error,heldout_error,"
    "oracle_queries,weak_calls,status";

} // namespace

void write_sweep_csv(const SweepOutcome& outcome, std::ostream& out) {
    out << kSweepHeader << '\n';
    out << std::setprecision(17);
    for (const SweepRow& row : outcome.rows) {
        out << row.booster << ',' << row.backend << ',' << row.m << ',' << row.gamma << ','
            << row.epsilon << ',' << row.seed << ',' << row.rounds << ',' << row.training_error
            << ',' << row.heldout_error << ',' << row.oracle_queries << ','
            << row.weak_learner_calls << ',' << row.status << '\n';
    }
}

void write_sweep_csv(const SweepOutcome& outcome, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot open for writing: " + path);
    write_sweep_csv(outcome, out);
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ResourceError("sweep CSV is empty");
    if (line == std::string(kSweepHeader) + "\r") line.pop_back();
    if (line != kSweepHeader)
        throw ResourceError("sweep CSV header mismatch; expected '" + std::string(kSweepHeader) +
                            "'");

    std::vector<SweepRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (fields.size() != 12)
            throw ResourceError("sweep CSV line " + std::to_string(line_no) + ": expected 12 "
                                "fields, got " + std::to_string(fields.size()));
        try {
            SweepRow row;
            row.booster = fields[0];
            row.backend = fields[1];
            row.m = std::stoull(fields[2]);
            row.gamma = std::stod(fields[3]);
            row.epsilon = std::stod(fields[4]);
            row.seed = std::stoull(fields[5]);
            row.rounds = std::stoi(fields[6]);
            row.training_error = std::stod(fields[7]);
            row.heldout_error = std::stod(fields[8]);
            row.oracle_queries = std::stoull(fields[9]);
            row.weak_learner_calls = std::stoull(fields[10]);
            row.status = fields[11];
            rows.push_back(std::move(row));
        } catch (const std::exception&) {
            throw ResourceError("sweep CSV line " + std::to_string(line_no) +
                                ": malformed numeric field");
        }
    }
    return rows;
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot open sweep CSV: " + path);
    return read_sweep_csv(in);
}

} // namespace qsb
