#pragma once

#include <iosfwd>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qsb/dataset.hpp"

namespace qsb {

// A +-1 classifier.  Concrete kinds: decision stumps (what the weak learner
// produces) and opaque function wrappers (planted targets in tests and
// experiments).
class Hypothesis {
public:
    virtual ~Hypothesis() = default;
    virtual int evaluate(PointView x) const = 0; // -1 or +1
    virtual std::string identifier() const = 0;  // stable name, doubles as map key
    virtual std::string serialize() const = 0;   // one line, parseable for stumps
};

using HypothesisPtr = std::shared_ptr<const Hypothesis>;

/// Axis-aligned threshold: predicts `polarity` when x[feature] >= threshold,
/// otherwise -polarity.
class DecisionStump final : public Hypothesis {
public:
    DecisionStump(int feature, double threshold, int polarity);

    int evaluate(PointView x) const override {
        return x[static_cast<std::size_t>(feature_)] >= threshold_ ? polarity_ : -polarity_;
    }
    std::string identifier() const override { return serialize(); }
    std::string serialize() const override;

    int feature() const { return feature_; }
    double threshold() const { return threshold_; }
    int polarity() const { return polarity_; }

private:
    int feature_;
    double threshold_;
    int polarity_; // -1 or +1
};

// Wraps an arbitrary labeling rule.  Not parseable back from text.
class FunctionHypothesis final : public Hypothesis {
public:
    FunctionHypothesis(std::string name, std::function<int(PointView)> f)
        : name_(std::move(name)), f_(std::move(f)) {}

    int evaluate(PointView x) const override { return f_(x); }
    std::string identifier() const override { return name_; }
    std::string serialize() const override { return "opaque name=" + name_; }

private:
    std::string name_;
    std::function<int(PointView)> f_;
};

// Parses one serialized hypothesis line ("stump feature=... threshold=...
// polarity=..."); throws ConfigError on anything else.
HypothesisPtr parse_hypothesis(const std::string& line);

/// Weighted vote over member hypotheses.  sign(0) counts as +1 everywhere in
/// this codebase.
struct Ensemble {
    std::vector<HypothesisPtr> members;
    std::vector<double> weights; // same length; all 1.0 for plain voting

    double score(PointView x) const;
    int predict(PointView x) const { return score(x) < 0.0 ? -1 : 1; }
    std::size_t size() const { return members.size(); }

    void save(std::ostream& out, const std::string& kind) const;
    void save(const std::string& path, const std::string& kind) const;
    static Ensemble load(std::istream& in);
    static Ensemble load(const std::string& path);
};

} // namespace qsb
