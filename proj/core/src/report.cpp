#include "qsb/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "qsb/errors.hpp"

namespace qsb {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json number_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

double number_field(const ordered_json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return v.get<double>();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot open for writing: " + path);
    return out;
}

} // namespace

void write_report_json(const RunReport& report, std::ostream& out) {
    ordered_json j;
    j["booster"] = report.booster;
    j["backend"] = report.backend.empty() ? ordered_json(nullptr) : ordered_json(report.backend);
    j["task"] = report.task;
    j["m"] = report.m;
    j["gamma"] = number_or_null(report.gamma);
    j["kappa"] = number_or_null(report.kappa);
    j["epsilon"] = number_or_null(report.epsilon);
    j["theta"] = number_or_null(report.theta);
    j["epsilon_rel"] = number_or_null(report.epsilon_rel);
    j["delta"] = number_or_null(report.delta);
    j["delta_sub"] = number_or_null(report.delta_sub);
    j["seed"] = report.seed;
    j["status"] = report.status;
    j["iterations"] = report.iterations;
    j["training_error"] = report.training_error;
    if (report.heldout.n_test > 0) {
        j["heldout"] = {{"error", report.heldout.estimate},
                        {"halfwidth95", report.heldout.halfwidth95},
                        {"n_test", report.heldout.n_test}};
    } else {
        j["heldout"] = nullptr;
    }
    j["ledger"] = {{"oracle_queries", report.ledger.oracle_queries},
                   {"hypothesis_queries", report.ledger.hypothesis_queries},
                   {"sample_queries", report.ledger.sample_queries},
                   {"amplification_rounds", report.ledger.amplification_rounds},
                   {"weak_learner_calls", report.ledger.weak_learner_calls},
                   {"memoized", report.ledger.memoized},
                   {"total_queries", report.ledger.total_queries()}};
    ordered_json rounds = ordered_json::array();
    for (const IterationRecord& r : report.per_round) {
        rounds.push_back({{"round", r.round},
                          {"sum_weights", r.sum_weights},
                          {"max_density", r.max_density},
                          {"weak_error", r.weak_error},
                          {"sum_weights_after", r.sum_weights_after},
                          {"ensemble_error", r.ensemble_error},
                          {"estimate", number_or_null(r.estimate)},
                          {"estimate_in_band", r.estimate_in_band}});
    }
    j["rounds"] = std::move(rounds);
    out << j.dump(2) << '\n';
}

void write_report_json(const RunReport& report, const std::string& path) {
    auto out = open_out(path);
    write_report_json(report, out);
}

RunReport read_report_json(std::istream& in) {
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ResourceError(std::string("malformed report JSON: ") + e.what());
    }
    RunReport report;
    try {
        report.booster = j.at("booster").get<std::string>();
        report.backend = j.at("backend").is_null() ? "" : j.at("backend").get<std::string>();
        report.task = j.at("task").get<std::string>();
        report.m = j.at("m").get<std::size_t>();
        report.gamma = number_field(j, "gamma");
        report.kappa = number_field(j, "kappa");
        report.epsilon = number_field(j, "epsilon");
        report.theta = number_field(j, "theta");
        report.epsilon_rel = number_field(j, "epsilon_rel");
        report.delta = number_field(j, "delta");
        report.delta_sub = number_field(j, "delta_sub");
        report.seed = j.at("seed").get<std::uint64_t>();
        report.status = j.at("status").get<std::string>();
        report.iterations = j.at("iterations").get<int>();
        report.training_error = j.at("training_error").get<double>();
        if (!j.at("heldout").is_null()) {
            const auto& h = j.at("heldout");
            report.heldout.estimate = h.at("error").get<double>();
            report.heldout.halfwidth95 = h.at("halfwidth95").get<double>();
            report.heldout.n_test = h.at("n_test").get<std::size_t>();
        }
        const auto& l = j.at("ledger");
        report.ledger.oracle_queries = l.at("oracle_queries").get<std::uint64_t>();
        report.ledger.hypothesis_queries = l.at("hypothesis_queries").get<std::uint64_t>();
        report.ledger.sample_queries = l.at("sample_queries").get<std::uint64_t>();
        report.ledger.amplification_rounds = l.at("amplification_rounds").get<std::uint64_t>();
        report.ledger.weak_learner_calls = l.at("weak_learner_calls").get<std::uint64_t>();
        report.ledger.memoized = l.at("memoized").get<bool>();
        for (const auto& r : j.at("rounds")) {
            IterationRecord rec;
            rec.round = r.at("round").get<int>();
            rec.sum_weights = r.at("sum_weights").get<double>();
            rec.max_density = r.at("max_density").get<double>();
            rec.weak_error = r.at("weak_error").get<double>();
            rec.sum_weights_after = r.at("sum_weights_after").get<double>();
            rec.ensemble_error = r.at("ensemble_error").get<double>();
            rec.estimate = number_field(r, "estimate");
            rec.estimate_in_band = r.at("estimate_in_band").get<bool>();
            report.per_round.push_back(rec);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ResourceError(std::string("report JSON missing or mistyped field: ") + e.what());
    }
    return report;
}

RunReport read_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot open report: " + path);
    return read_report_json(in);
}

void write_rounds_csv(const RunReport& report, std::ostream& out) {
    out << "round,sum_weights,max_density,weak_error,sum_weights_after,ensemble_error,"
           "estimate,estimate_in_band\n";
    out << std::setprecision(17);
    for (const IterationRecord& r : report.per_round) {
        out << r.round << ',' << r.sum_weights << ',' << r.max_density << ',' << r.weak_error
            << ',' << r.sum_weights_after << ',' << r.ensemble_error << ',';
        if (!std::isnan(r.estimate)) out << r.estimate;
        out << ',' << (r.estimate_in_band ? 1 : 0) << '\n';
    }
}

void write_rounds_csv(const RunReport& report, const std::string& path) {
    auto out = open_out(path);
    write_rounds_csv(report, out);
}

void print_report_summary(const RunReport& report, std::ostream& out) {
    out << "booster:        " << report.booster;
    if (!report.backend.empty()) out << " (backend " << report.backend << ")";
    out << '\n';
    out << "task:           " << report.task << ", m = " << report.m << ", seed = " << report.seed
        << '\n';
    out << "parameters:     gamma = " << report.gamma << ", kappa = " << report.kappa
        << ", epsilon = " << report.epsilon << ", theta = " << report.theta << '\n';
    out << "status:         " << report.status << " after " << report.iterations << " rounds\n";
    out << "training error: " << report.training_error << '\n';
    if (report.heldout.n_test > 0)
        out << "held-out error: " << report.heldout.estimate << " +/- "
            << report.heldout.halfwidth95 << "  (n = " << report.heldout.n_test << ")\n";
    out << "queries:        oracle " << report.ledger.oracle_queries << ", hypothesis "
        << report.ledger.hypothesis_queries << ", sample " << report.ledger.sample_queries
        << ", total " << report.ledger.total_queries() << '\n';
    out << "weak learner:   " << report.ledger.weak_learner_calls << " calls\n";
    if (!report.per_round.empty()) {
        double max_density = 0.0;
        double worst_weak = 0.0;
        for (const IterationRecord& r : report.per_round) {
            max_density = std::max(max_density, r.max_density);
            worst_weak = std::max(worst_weak, r.weak_error);
        }
        out << "round extremes: max density " << max_density << ", worst weak error " << worst_weak
            << '\n';
    }
}

} // namespace qsb
