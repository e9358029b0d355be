#include "qsb/hypothesis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qsb/errors.hpp"
#include "qsb/numeric.hpp"

namespace qsb {

DecisionStump::DecisionStump(int feature, double threshold, int polarity)
    : feature_(feature), threshold_(threshold), polarity_(polarity) {
    if (feature < 0) throw ConfigError("stump: feature index must be >= 0");
    if (polarity != 1 && polarity != -1) throw ConfigError("stump: polarity must be +-1");
    if (!std::isfinite(threshold)) throw ConfigError("stump: threshold must be finite");
}

std::string DecisionStump::serialize() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "stump feature=%d threshold=%.17g polarity=%d", feature_,
                  threshold_, polarity_);
    return buf;
}

namespace {

// "key=value" token → value, or throw
std::string expect_field(std::istringstream& in, const std::string& key, const std::string& line) {
    std::string tok;
    if (!(in >> tok) || tok.rfind(key + "=", 0) != 0)
        throw ConfigError("cannot parse hypothesis line (expected " + key + "=...): " + line);
    return tok.substr(key.size() + 1);
}

} // namespace

HypothesisPtr parse_hypothesis(const std::string& line) {
    std::istringstream in(line);
    std::string head;
    in >> head;
    if (head != "stump") throw ConfigError("cannot parse hypothesis line: " + line);
    try {
        int feature = std::stoi(expect_field(in, "feature", line));
        double threshold = std::stod(expect_field(in, "threshold", line));
        int polarity = std::stoi(expect_field(in, "polarity", line));
        return std::make_shared<DecisionStump>(feature, threshold, polarity);
    } catch (const std::logic_error&) { // stoi/stod rejected a field
        throw ConfigError("cannot parse hypothesis line (bad number): " + line);
    }
}

double Ensemble::score(PointView x) const {
    CompensatedSum acc;
    for (std::size_t i = 0; i < members.size(); ++i)
        acc.add(weights[i] * static_cast<double>(members[i]->evaluate(x)));
    return acc.value();
}

void Ensemble::save(std::ostream& out, const std::string& kind) const {
    out << "ensemble kind=" << kind << " members=" << members.size() << "\n";
    for (const auto& h : members) out << h->serialize() << "\n";
    out << "weights";
    char buf[40];
    for (double w : weights) {
        std::snprintf(buf, sizeof buf, " %.17g", w);
        out << buf;
    }
    out << "\n";
}

void Ensemble::save(const std::string& path, const std::string& kind) const {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot open for writing: " + path);
    save(out, kind);
    if (!out.good()) throw ResourceError("write failed: " + path);
}

Ensemble Ensemble::load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ResourceError("ensemble file: empty");
    std::istringstream head(line);
    std::string word, kind_field, members_field;
    head >> word >> kind_field >> members_field;
    if (word != "ensemble" || members_field.rfind("members=", 0) != 0)
        throw ResourceError("ensemble file: bad header: " + line);
    std::size_t count = 0;
    try {
        count = std::stoul(members_field.substr(8));
    } catch (const std::logic_error&) {
        throw ResourceError("ensemble file: bad header: " + line);
    }

    Ensemble e;
    e.members.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) throw ResourceError("ensemble file: truncated member list");
        e.members.push_back(parse_hypothesis(line));
    }
    if (!std::getline(in, line) || line.rfind("weights", 0) != 0)
        throw ResourceError("ensemble file: missing weights line");
    std::istringstream ws(line.substr(7));
    double w;
    while (ws >> w) e.weights.push_back(w);
    if (e.weights.size() != e.members.size())
        throw ResourceError("ensemble file: weight count does not match member count");
    return e;
}

Ensemble Ensemble::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot open for reading: " + path);
    return load(in);
}

} // namespace qsb
