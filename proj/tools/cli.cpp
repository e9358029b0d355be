#include "cli.hpp"

#include <algorithm>
#include <iomanip>
#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>

#include "qsb/config.hpp"
#include "qsb/dataset.hpp"
#include "qsb/errors.hpp"
#include "qsb/experiment.hpp"
#include "qsb/report.hpp"
#include "qsb/verify.hpp"

namespace qsb {

namespace {

// File first, then per-key flags, then --set; --set always wins so a script
// can pin a value regardless of what else is on the line.
Config load_config(const std::string& path, const std::vector<std::string>& key_overrides,
                   const std::vector<std::string>& set_overrides) {
    Config config = path.empty() ? Config() : Config::from_file(path);
    const auto apply = [&config](const std::vector<std::string>& kvs) {
        for (const std::string& kv : kvs) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ConfigError("--set expects key=value, got '" + kv + "'");
            config.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
    };
    apply(key_overrides);
    apply(set_overrides);
    return config;
}

void require_gamma(const Config& config) {
    if (!config.has("gamma")) throw ConfigError("missing required key 'gamma'");
}

void print_plan(const PlanResolution& res, std::ostream& out) {
    if (!res.planned) return;
    out << "planner: capacity " << res.plan.d << ", round budget " << res.plan.T_bound
        << ", cover size " << res.plan.D_strong << ", required m " << res.plan.m_required;
    if (res.clamped) out << " -> clamped to " << res.m_used;
    out << '\n';
}

int do_gen(const Config& config, const std::string& out_path) {
    const ExperimentSpec spec = parse_experiment(config);
    if (spec.m == 0) require_gamma(config); // the sample planner needs it
    const PlanResolution res = resolve_sample_size(spec);
    print_plan(res, std::cout);
    const LabeledSample sample = draw_sample(spec.task, res.m_used, spec.seed);
    write_sample_csv(out_path, sample);
    std::cout << "wrote " << out_path << " (" << sample.size() << " examples, dimension "
              << sample.dimension() << ", task " << spec.task.name() << ")\n";
    return 0;
}

int do_run(const Config& config, const std::string& prefix) {
    const ExperimentSpec spec = parse_experiment(config);
    if (spec.booster != "adaboost") require_gamma(config);
    print_plan(resolve_sample_size(spec), std::cout);
    const RunReport report = run_experiment(spec);

    const std::string json_path = prefix + ".json";
    const std::string csv_path = prefix + ".rounds.csv";
    const std::string ensemble_path = prefix + ".ensemble";
    write_report_json(report, json_path);
    write_rounds_csv(report, csv_path);
    report.ensemble.save(ensemble_path, report.booster);

    print_report_summary(report, std::cout);
    std::cout << "wrote " << json_path << ", " << csv_path << ", " << ensemble_path << '\n';
    return 0;
}

int do_sweep(const Config& config, const std::string& out_path) {
    const std::vector<double> gammas = config.get_double_list("sweep_gamma");
    if (gammas.empty()) require_gamma(config);
    const ExperimentSpec base = parse_experiment(config);

    const auto m_values = config.get_u64_list("sweep_m");
    std::vector<std::size_t> ms(m_values.begin(), m_values.end());
    if (ms.empty()) ms.push_back(resolve_sample_size(base).m_used); // gamma-only sweep
    std::vector<std::uint64_t> seeds = config.get_u64_list("sweep_seeds");
    if (seeds.empty()) seeds.push_back(base.seed);

    const auto hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = static_cast<int>(config.get_u64("workers", hw));

    const SweepOutcome outcome = run_sweep(base, ms, gammas, seeds, workers);
    write_sweep_csv(outcome, out_path);
    std::cout << "wrote " << out_path << " (" << outcome.rows.size() << " runs)\n";
    if (outcome.fitted) {
        const LinearFit& fit = outcome.queries_vs_m;
        std::cout << "scaling: log2(oracle queries) vs log2(m) slope " << fit.slope << " +/- "
                  << fit.slope_ci95 << " (95% CI over " << fit.n << " sizes)\n";
    }
    if (outcome.fitted_gamma) {
        const LinearFit& fit = outcome.queries_vs_inv_gamma;
        std::cout << "scaling: log2(oracle queries) vs log2(1/gamma) slope " << fit.slope
                  << " +/- " << fit.slope_ci95 << " (95% CI over " << fit.n << " values)\n";
    }
    if (!outcome.fitted && !outcome.fitted_gamma)
        std::cout << "scaling: need at least 3 points on one axis (the other fixed) for a fit\n";
    return 0;
}

int do_verify(const std::string& suite, std::uint64_t seed) {
    const std::vector<VerifyResult> results = run_verify(suite, seed);
    std::size_t failures = 0;
    for (const VerifyResult& r : results) {
        std::cout << (r.passed ? "[ OK ] " : "[FAIL] ") << r.check << ": " << r.detail << '\n';
        if (!r.passed) ++failures;
    }
    std::cout << results.size() - failures << " of " << results.size() << " checks passed\n";
    return failures == 0 ? 0 : 3;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(),
                                                 suffix) == 0;
}

// Aggregate sweep rows into one line per (booster, backend, m, gamma) cell.
void print_sweep_table(const std::vector<SweepRow>& rows, std::ostream& out) {
    struct Cell {
        std::size_t runs = 0;
        double rounds = 0, empirical = 0, heldout = 0, queries = 0;
        std::map<std::string, std::size_t> statuses;
    };
    std::map<std::tuple<std::string, std::string, std::size_t, double>, Cell> cells;
    for (const SweepRow& row : rows) {
        Cell& c = cells[{row.booster, row.backend, row.m, row.gamma}];
        c.runs += 1;
        c.rounds += row.rounds;
        c.empirical += row.training_error;
        c.heldout += row.heldout_error;
        c.queries += static_cast<double>(row.oracle_queries);
        c.statuses[row.status] += 1;
    }
    out << std::left << std::setw(14) << "booster" << std::setw(12) << "backend" << std::right
        << std::setw(6) << "m" << std::setw(8) << "gamma" << std::setw(6) << "runs"
        << std::setw(8) << "mean_T" << std::setw(12) << "mean_err" << std::setw(12)
        << "mean_hold" << std::setw(14) << "mean_queries"
        << "  status\n";
    for (const auto& [key, c] : cells) {
        const auto& [booster, backend, m, gamma] = key;
        const double n = static_cast<double>(c.runs);
        out << std::left << std::setw(14) << booster << std::setw(12)
            << (backend.empty() ? "-" : backend) << std::right << std::setw(6) << m
            << std::setw(8) << std::setprecision(4) << gamma << std::setw(6) << c.runs
            << std::setw(8) << std::setprecision(4) << c.rounds / n << std::setw(12)
            << std::setprecision(5) << c.empirical / n << std::setw(12) << c.heldout / n
            << std::setw(14) << std::setprecision(8) << c.queries / n << "  ";
        bool first = true;
        for (const auto& [status, count] : c.statuses) {
            if (!first) out << ' ';
            out << status << ":" << count;
            first = false;
        }
        out << '\n';
    }
}

int do_report(const std::vector<std::string>& paths) {
    std::vector<SweepRow> rows;
    bool printed = false;
    for (const std::string& path : paths) {
        if (ends_with(path, ".csv")) {
            const std::vector<SweepRow> more = read_sweep_csv(path);
            rows.insert(rows.end(), more.begin(), more.end());
        } else {
            if (printed) std::cout << '\n';
            print_report_summary(read_report_json(path), std::cout);
            printed = true;
        }
    }
    if (!rows.empty()) {
        if (printed) std::cout << '\n';
        print_sweep_table(rows, std::cout);
    }
    return 0;
}

} // namespace

int cli_main(std::vector<std::string> args) {
    CLI::App app{"boosting laboratory: smooth boosting against exact and estimated weight sums",
                 "qsb"};
    app.set_version_flag("--version", "qsb 0.1.0");
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> key_overrides;
    std::vector<std::string> set_overrides;
    std::string gen_out = "sample.csv";
    std::string run_prefix = "run";
    std::string sweep_out = "sweep.csv";
    std::string suite = "all";
    std::uint64_t verify_seed = 1234;
    std::vector<std::string> report_paths;

    const auto add_config_options = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "key = value configuration file");
        cmd->add_option("-s,--set", set_overrides,
                        "override one key, as key=value (repeatable, applied last)");
        // one flag per config key, so quick runs need no file
        for (const std::string& key : known_experiment_keys()) {
            if (key == "out") continue; // -o,--out below
            cmd->add_option_function<std::string>(
                   "--" + key,
                   [key, &key_overrides](const std::string& value) {
                       key_overrides.push_back(key + "=" + value);
                   },
                   "config key '" + key + "'")
                ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
                ->group("Config keys");
        }
    };

    CLI::App* gen = app.add_subcommand("gen", "draw a training sample and write it as CSV");
    add_config_options(gen);
    gen->add_option("-o,--out", gen_out, "output CSV path");

    CLI::App* run = app.add_subcommand("run", "run one boosting experiment");
    add_config_options(run);
    run->add_option("-o,--out", run_prefix, "output prefix for .json/.rounds.csv/.ensemble");

    CLI::App* sweep = app.add_subcommand("sweep", "run a sample-size sweep with a scaling fit");
    add_config_options(sweep);
    sweep->add_option("-o,--out", sweep_out, "output CSV path");

    CLI::App* verify = app.add_subcommand("verify", "check the library's invariants");
    verify->add_option("--suite", suite,
                       "smoothness | rounds | error-envelope | state-prep | counting | "
                       "equivalence | all");
    verify->add_option("--seed", verify_seed, "seed for the checks");

    CLI::App* report = app.add_subcommand(
        "report", "summarize run JSONs and aggregate sweep CSVs into a table");
    report->add_option("inputs", report_paths, "report .json and/or sweep .csv paths")
        ->required();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // an explicit -o beats the config's "out"; otherwise the config file can
    // carry the output path alongside everything else
    const auto resolve_out = [&](CLI::App* cmd, const std::string& flag_value,
                                 const Config& config) {
        return cmd->count("--out") > 0 ? flag_value : config.get_string("out", flag_value);
    };

    try {
        if (app.got_subcommand(gen)) {
            const Config config = load_config(config_path, key_overrides, set_overrides);
            return do_gen(config, resolve_out(gen, gen_out, config));
        }
        if (app.got_subcommand(run)) {
            const Config config = load_config(config_path, key_overrides, set_overrides);
            return do_run(config, resolve_out(run, run_prefix, config));
        }
        if (app.got_subcommand(sweep)) {
            const Config config = load_config(config_path, key_overrides, set_overrides);
            return do_sweep(config, resolve_out(sweep, sweep_out, config));
        }
        if (app.got_subcommand(verify)) return do_verify(suite, verify_seed);
        if (app.got_subcommand(report)) return do_report(report_paths);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const ContractError& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return 4;
    } catch (const StatisticalAnomalyError& e) {
        std::cerr << "statistical anomaly: " << e.what() << '\n';
        return 3;
    } catch (const DegenerateLearnerError& e) {
        std::cerr << "degenerate learner: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        // ConfigError, DomainError, ResourceError: the user can fix these
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 4;
    }
}

} // namespace qsb
