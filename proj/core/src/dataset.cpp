#include "qsb/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "qsb/errors.hpp"
#include "qsb/hypothesis.hpp"
#include "qsb/numeric.hpp"

namespace qsb {

int SyntheticTask::target(PointView x) const {
    switch (family) {
    case Family::majority: {
        int ones = 0;
        for (int i = 0; i < k; ++i) ones += x[static_cast<std::size_t>(i)] > 0.5 ? 1 : 0;
        return 2 * ones > k ? 1 : -1; // k odd, no ties
    }
    case Family::threshold:
        return x[0] >= threshold_location ? 1 : -1;
    case Family::conjunction: {
        for (int i = 0; i < k; ++i)
            if (x[static_cast<std::size_t>(i)] < 0.5) return -1;
        return 1;
    }
    }
    throw ConfigError("unsupported task family");
}

Point SyntheticTask::sample_point(Rng& rng) const {
    Point p(static_cast<std::size_t>(n));
    if (family == Family::threshold) {
        p[0] = rng.uniform01();
    } else {
        for (auto& v : p) v = rng.bernoulli(0.5) ? 1.0 : 0.0;
    }
    return p;
}

void SyntheticTask::validate() const {
    if (n < 1) throw ConfigError("task: n must be >= 1");
    if (noise_rate < 0.0 || noise_rate >= 1.0) throw ConfigError("task: noise_rate must be in [0,1)");
    switch (family) {
    case Family::majority:
        if (k < 1 || k > n) throw ConfigError("majority task: need 1 <= k <= n");
        if (k % 2 == 0) throw ConfigError("majority task: k must be odd");
        break;
    case Family::threshold:
        if (n != 1) throw ConfigError("threshold task: n must be 1");
        if (threshold_location <= 0.0 || threshold_location >= 1.0)
            throw ConfigError("threshold task: location must be in (0,1)");
        break;
    case Family::conjunction:
        if (k < 1 || k > n) throw ConfigError("conjunction task: need 1 <= k <= n");
        break;
    }
}

std::string SyntheticTask::name() const {
    std::ostringstream os;
    switch (family) {
    case Family::majority: os << "majority(n=" << n << ",k=" << k << ")"; break;
    case Family::threshold: os << "threshold(loc=" << threshold_location << ")"; break;
    case Family::conjunction: os << "conjunction(n=" << n << ",k=" << k << ")"; break;
    }
    if (noise_rate > 0.0) os << "+noise" << noise_rate;
    return os.str();
}

SyntheticTask make_majority_task(int n, int k, double noise_rate) {
    SyntheticTask t{SyntheticTask::Family::majority, n, k, 0.5, noise_rate};
    t.validate();
    return t;
}

SyntheticTask make_threshold_task(double location, double noise_rate) {
    SyntheticTask t{SyntheticTask::Family::threshold, 1, 1, location, noise_rate};
    t.validate();
    return t;
}

SyntheticTask make_conjunction_task(int n, int k, double noise_rate) {
    SyntheticTask t{SyntheticTask::Family::conjunction, n, k, 0.5, noise_rate};
    t.validate();
    return t;
}

SyntheticTask parse_task(const std::string& family, int n, int k, double threshold_location,
                         double noise_rate) {
    if (family == "majority") return make_majority_task(n, k, noise_rate);
    if (family == "threshold") return make_threshold_task(threshold_location, noise_rate);
    if (family == "conjunction") return make_conjunction_task(n, k, noise_rate);
    throw ConfigError("unsupported task family: " + family);
}

LabeledSample draw_sample(const SyntheticTask& task, std::size_t m, std::uint64_t seed) {
    task.validate();
    LabeledSample s;
    s.examples.reserve(m);
    Rng points(seed, stream::points);
    for (std::size_t i = 0; i < m; ++i) {
        Point p = task.sample_point(points);
        int y = task.target(p);
        s.examples.push_back({std::move(p), y});
    }
    auto flips = static_cast<std::size_t>(std::floor(task.noise_rate * static_cast<double>(m)));
    if (flips > 0) {
        // partial Fisher-Yates: first `flips` entries are a uniform subset
        Rng noise(seed, stream::noise);
        std::vector<std::size_t> idx(m);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = 0; i < flips; ++i) {
            std::size_t j = i + static_cast<std::size_t>(noise.uniform_index(m - i));
            std::swap(idx[i], idx[j]);
            s.examples[idx[i]].y = -s.examples[idx[i]].y;
        }
    }
    return s;
}

std::size_t misclassified_count(const Hypothesis& h, const LabeledSample& s) {
    std::size_t bad = 0;
    for (const auto& e : s.examples)
        if (h.evaluate(e.x) != e.y) ++bad;
    return bad;
}

double empirical_error(const Hypothesis& h, const LabeledSample& s) {
    if (s.size() == 0) throw DomainError("empirical_error: empty sample");
    return static_cast<double>(misclassified_count(h, s)) / static_cast<double>(s.size());
}

std::size_t misclassified_count(const Ensemble& e, const LabeledSample& s) {
    std::size_t bad = 0;
    for (const auto& ex : s.examples)
        if (e.predict(ex.x) != ex.y) ++bad;
    return bad;
}

double empirical_error(const Ensemble& e, const LabeledSample& s) {
    if (s.size() == 0) throw DomainError("empirical_error: empty sample");
    return static_cast<double>(misclassified_count(e, s)) / static_cast<double>(s.size());
}

namespace {

template <typename Predictor>
GeneralizationEstimate estimate_impl(const Predictor& h, const SyntheticTask& task,
                                     std::size_t n_test, std::uint64_t seed) {
    if (n_test == 0) throw DomainError("generalization_error_estimate: n_test == 0");
    SyntheticTask clean = task;
    clean.noise_rate = 0.0; // evaluated against the noiseless target
    Rng rng(seed, stream::heldout);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < n_test; ++i) {
        Point p = clean.sample_point(rng);
        if (h.predict_like(p) != clean.target(p)) ++bad;
    }
    GeneralizationEstimate g;
    g.n_test = n_test;
    g.estimate = static_cast<double>(bad) / static_cast<double>(n_test);
    g.halfwidth95 = binomial_halfwidth95(g.estimate, n_test);
    return g;
}

struct EnsembleView {
    const Ensemble* e;
    int predict_like(PointView p) const { return e->predict(p); }
};
struct HypothesisView {
    const Hypothesis* h;
    int predict_like(PointView p) const { return h->evaluate(p); }
};

} // namespace

GeneralizationEstimate generalization_error_estimate(const Ensemble& e, const SyntheticTask& task,
                                                     std::size_t n_test, std::uint64_t seed) {
    return estimate_impl(EnsembleView{&e}, task, n_test, seed);
}

GeneralizationEstimate generalization_error_estimate(const Hypothesis& h, const SyntheticTask& task,
                                                     std::size_t n_test, std::uint64_t seed) {
    return estimate_impl(HypothesisView{&h}, task, n_test, seed);
}

const LabeledExample& SampleOracle::query(std::size_t i) const {
    if (i >= s_->size()) throw DomainError("SampleOracle: index out of range");
    ledger_->add_sample();
    return (*s_)[i];
}

namespace {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_sample_csv(std::ostream& out, const LabeledSample& s) {
    const std::size_t n = s.dimension();
    for (std::size_t j = 0; j < n; ++j) out << "x_" << (j + 1) << ",";
    out << "label\n";
    for (const auto& e : s.examples) {
        for (std::size_t j = 0; j < n; ++j) out << format_value(e.x[j]) << ",";
        out << e.y << "\n";
    }
}

void write_sample_csv(const std::string& path, const LabeledSample& s) {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot open for writing: " + path);
    write_sample_csv(out, s);
    if (!out.good()) throw ResourceError("write failed: " + path);
}

LabeledSample read_sample_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ResourceError("dataset csv: missing header");
    std::size_t n_cols = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    if (n_cols < 2) throw ResourceError("dataset csv: header needs at least x_1 and label");
    const std::size_t n = n_cols - 1;

    LabeledSample s;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        LabeledExample e;
        e.x.reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::getline(row, cell, ','))
                throw ResourceError("dataset csv: short row at line " + std::to_string(lineno));
            e.x.push_back(std::stod(cell));
        }
        if (!std::getline(row, cell, ','))
            throw ResourceError("dataset csv: missing label at line " + std::to_string(lineno));
        if (cell == "1")
            e.y = 1;
        else if (cell == "-1")
            e.y = -1;
        else
            throw ResourceError("dataset csv: label must be -1 or 1 at line " + std::to_string(lineno));
        s.examples.push_back(std::move(e));
    }
    return s;
}

LabeledSample read_sample_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot open for reading: " + path);
    return read_sample_csv(in);
}

} // namespace qsb
