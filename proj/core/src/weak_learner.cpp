#include "qsb/weak_learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "qsb/errors.hpp"
#include "qsb/numeric.hpp"

namespace qsb {

HypothesisPtr WeakLearner::train_weighted(const LabeledSample&, std::span<const double>) {
    throw ConfigError("learner '" + name() + "' does not support full-information training");
}

namespace {

struct Access {
    PointView (*point)(const void*, std::size_t);
    int (*label)(const void*, std::size_t);
    double (*weight)(const void*, std::size_t);
};

// One pass over every (feature, cut, polarity).  Cuts are walked in
// threshold order per feature; candidates replace the incumbent only on a
// strictly smaller error, which realizes the documented tie-break.
StumpFit train_stump_core(const void* data, std::size_t count, std::size_t dim, const Access& acc) {
    if (count == 0) throw DomainError("train_stump: empty batch");
    if (dim == 0) throw DomainError("train_stump: zero-dimensional points");

    double total_weight;
    double total_minus; // weight of the -1 labels
    {
        CompensatedSum tw, tm;
        for (std::size_t i = 0; i < count; ++i) {
            double w = acc.weight(data, i);
            if (w < 0.0) throw DomainError("train_stump: negative weight");
            tw.add(w);
            if (acc.label(data, i) < 0) tm.add(w);
        }
        total_weight = tw.value();
        total_minus = tm.value();
    }
    if (total_weight <= 0.0) throw DomainError("train_stump: zero total weight");
    const double total_plus = total_weight - total_minus;

    double best_err = std::numeric_limits<double>::infinity();
    int best_feature = 0;
    double best_threshold = 0.0;
    int best_polarity = 1;

    std::vector<std::size_t> order(count);
    for (std::size_t f = 0; f < dim; ++f) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return acc.point(data, a)[f] < acc.point(data, b)[f];
        });

        // below_plus/below_minus: label weights strictly below the cut
        double below_plus = 0.0, below_minus = 0.0;
        std::size_t pos = 0;
        while (pos < count || pos == 0) {
            double threshold;
            if (pos == 0) {
                threshold = acc.point(data, order[0])[f]; // everything is >= this cut
            } else if (pos < count) {
                double lo = acc.point(data, order[pos - 1])[f];
                double hi = acc.point(data, order[pos])[f];
                if (lo == hi) { // not a distinct-value boundary; absorb and move on
                    double w = acc.weight(data, order[pos]);
                    if (acc.label(data, order[pos]) > 0)
                        below_plus += w;
                    else
                        below_minus += w;
                    ++pos;
                    continue;
                }
                threshold = 0.5 * (lo + hi);
            } else {
                break;
            }

            // polarity +1 first: predicts +1 at/above the cut
            double err_plus = below_plus + (total_minus - below_minus);
            if (err_plus < best_err) {
                best_err = err_plus;
                best_feature = static_cast<int>(f);
                best_threshold = threshold;
                best_polarity = 1;
            }
            double err_minus = below_minus + (total_plus - below_plus);
            if (err_minus < best_err) {
                best_err = err_minus;
                best_feature = static_cast<int>(f);
                best_threshold = threshold;
                best_polarity = -1;
            }

            if (pos >= count) break;
            double w = acc.weight(data, order[pos]);
            if (acc.label(data, order[pos]) > 0)
                below_plus += w;
            else
                below_minus += w;
            ++pos;
        }
    }

    // Complementary polarities make this unreachable; flip anyway rather than
    // hand a worse-than-chance hypothesis to a booster.
    if (best_err > 0.5 * total_weight) {
        best_polarity = -best_polarity;
        best_err = total_weight - best_err;
    }

    StumpFit fit;
    fit.stump = std::make_shared<DecisionStump>(best_feature, best_threshold, best_polarity);
    fit.training_error = best_err / total_weight;
    return fit;
}

} // namespace

StumpFit train_stump(std::span<const LabeledExample> batch) {
    struct View {
        std::span<const LabeledExample> b;
    } view{batch};
    Access acc{
        [](const void* d, std::size_t i) -> PointView {
            return static_cast<const View*>(d)->b[i].x;
        },
        [](const void* d, std::size_t i) { return static_cast<const View*>(d)->b[i].y; },
        [](const void*, std::size_t) { return 1.0; },
    };
    return train_stump_core(&view, batch.size(), batch.empty() ? 0 : batch[0].x.size(), acc);
}

StumpFit train_stump_weighted(const LabeledSample& s, std::span<const double> weights) {
    if (s.size() != weights.size())
        throw DomainError("train_stump_weighted: weight count does not match sample");
    struct View {
        const LabeledSample* s;
        std::span<const double> w;
    } view{&s, weights};
    Access acc{
        [](const void* d, std::size_t i) -> PointView {
            return (*static_cast<const View*>(d)->s)[i].x;
        },
        [](const void* d, std::size_t i) { return (*static_cast<const View*>(d)->s)[i].y; },
        [](const void* d, std::size_t i) { return static_cast<const View*>(d)->w[i]; },
    };
    return train_stump_core(&view, s.size(), s.dimension(), acc);
}

int confidence_repeat_count(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("confidence_repeat_count: delta in (0,1)");
    return static_cast<int>(std::ceil(std::log(1.0 / delta) / std::log(3.0) - 1e-12));
}

int default_check_budget(double gamma, double delta) {
    if (!(gamma > 0.0 && gamma < 0.5)) throw DomainError("default_check_budget: gamma in (0,1/2)");
    const double r = confidence_repeat_count(delta);
    return static_cast<int>(std::ceil(16.0 / (gamma * gamma))) *
           static_cast<int>(std::ceil(std::log2(std::max(r, 1.0) / delta)));
}

ConfidenceBoostResult boost_confidence(WeakLearner& learner, double delta, double gamma,
                                       const ExampleSource& source, Rng& rng, int check_budget) {
    const int r = confidence_repeat_count(delta);
    if (check_budget <= 0) check_budget = default_check_budget(gamma, delta);

    std::vector<HypothesisPtr> candidates;
    candidates.reserve(static_cast<std::size_t>(r));
    std::vector<LabeledExample> batch;
    for (int c = 0; c < r; ++c) {
        batch.clear();
        for (int i = 0; i < learner.sample_budget(); ++i) batch.push_back(source());
        candidates.push_back(learner.train(batch, rng));
    }

    ConfidenceBoostResult result;
    result.learner_calls = r;
    double best_est = std::numeric_limits<double>::infinity();
    for (const auto& h : candidates) {
        std::size_t bad = 0;
        for (int i = 0; i < check_budget; ++i) {
            LabeledExample e = source();
            if (h->evaluate(e.x) != e.y) ++bad;
        }
        double est = static_cast<double>(bad) / static_cast<double>(check_budget);
        if (!result.passed && est <= 0.5 - gamma / 2.0) {
            result.hypothesis = h;
            result.estimated_error = est;
            result.passed = true;
        }
        if (est < best_est) {
            best_est = est;
            if (!result.passed) {
                result.hypothesis = h;
                result.estimated_error = est;
            }
        }
    }
    return result;
}

} // namespace qsb
