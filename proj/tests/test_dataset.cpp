// Dataset and sample-planner tests.  Every label-producing path is checked
// against an inline recomputation of the target rule, and the planner's
// "least sufficient m" is checked against a brute-force scan of the same
// inequality, so a transcription slip in either cannot hide.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>

#include "qsb/dataset.hpp"
#include "qsb/errors.hpp"
#include "qsb/hypothesis.hpp"
#include "qsb/numeric.hpp"
#include "qsb/planner.hpp"

using namespace qsb;

TEST_CASE("noiseless labels agree with the target rule") {
    const SyntheticTask task = make_majority_task(7, 3);
    const LabeledSample s = draw_sample(task, 64, 11);
    REQUIRE(s.size() == 64);
    for (const auto& ex : s.examples) {
        CHECK(ex.x.size() == 7);
        CHECK(ex.y == task.target(ex.x));
    }
}

TEST_CASE("majority labels recomputed by a bit count") {
    const SyntheticTask task = make_majority_task(20, 5);
    const LabeledSample s = draw_sample(task, 64, 7);
    for (const auto& ex : s.examples) {
        int ones = 0;
        for (int j = 0; j < 5; ++j) ones += ex.x[static_cast<std::size_t>(j)] > 0.5 ? 1 : 0;
        CHECK(ex.y == (2 * ones > 5 ? 1 : -1));
    }
}

TEST_CASE("conjunction labels recomputed coordinate by coordinate") {
    const SyntheticTask task = make_conjunction_task(6, 2);
    const LabeledSample s = draw_sample(task, 48, 3);
    for (const auto& ex : s.examples) {
        const bool both = ex.x[0] > 0.5 && ex.x[1] > 0.5;
        CHECK(ex.y == (both ? 1 : -1));
    }
}

TEST_CASE("threshold labels split at the location with ties positive") {
    const SyntheticTask task = make_threshold_task(0.3);
    const LabeledSample s = draw_sample(task, 48, 5);
    for (const auto& ex : s.examples) CHECK(ex.y == (ex.x[0] >= 0.3 ? 1 : -1));
}

TEST_CASE("sampling is a pure function of task, m, seed") {
    const SyntheticTask task = make_majority_task(9, 3, 0.1);
    const LabeledSample a = draw_sample(task, 40, 42);
    const LabeledSample b = draw_sample(task, 40, 42);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].y == b[i].y);
        CHECK(a[i].x == b[i].x);
    }
    const LabeledSample c = draw_sample(task, 40, 43);
    bool differs = false;
    for (std::size_t i = 0; i < a.size() && !differs; ++i)
        differs = a[i].x != c[i].x || a[i].y != c[i].y;
    CHECK(differs);
}

TEST_CASE("noise flips exactly floor(noise * m) labels") {
    const SyntheticTask task = make_majority_task(7, 3, 0.25);
    const LabeledSample s = draw_sample(task, 40, 9);
    std::size_t flipped = 0;
    for (const auto& ex : s.examples)
        if (ex.y != task.target(ex.x)) ++flipped;
    CHECK(flipped == 10); // floor(0.25 * 40); mismatch count == 10 also proves distinct positions

    const LabeledSample clean = draw_sample(make_majority_task(7, 3), 40, 9);
    std::size_t flipped_clean = 0;
    for (const auto& ex : clean.examples)
        if (ex.y != task.target(ex.x)) ++flipped_clean;
    CHECK(flipped_clean == 0);
}

TEST_CASE("task validation rejects malformed parameters") {
    CHECK_THROWS_AS(make_majority_task(4, 2), ConfigError);    // even k
    CHECK_THROWS_AS(make_majority_task(3, 5), ConfigError);    // k > n
    CHECK_THROWS_AS(make_majority_task(3, 3, 1.0), ConfigError);
    CHECK_THROWS_AS(make_threshold_task(1.5), ConfigError);
    CHECK_THROWS_AS(make_conjunction_task(0, 1), ConfigError);
    CHECK_THROWS_AS(parse_task("parity", 4, 2, 0.5, 0.0), ConfigError);
    CHECK_NOTHROW(parse_task("majority", 5, 3, 0.5, 0.0));
}

TEST_CASE("planner inequality scan matches the reported least m") {
    // Parameters picked so the brute-force scan stays in the hundreds of
    // thousands: lhs(m) = ln 8 + D (1 + ln(m/D)) - m (eps/2)^2 / 32 <= ln delta.
    const int d = 1;
    const double eps = 0.9, delta = 0.5, gamma = 0.45;
    const SampleSizePlan plan = sample_size(d, eps, delta, gamma);

    CHECK(plan.D_strong >= d);
    CHECK(plan.T_bound >= 1);
    REQUIRE(plan.m_required >= 1);

    // intermediate quantities recomputed from their definitions
    const double kappa = eps / 2.2;
    const long long t_bound = static_cast<long long>(
        std::ceil(2.2 / (kappa * gamma * gamma * std::sqrt(1.0 - gamma))));
    CHECK(plan.T_bound == t_bound);
    const long long d_strong = static_cast<long long>(std::ceil(
        1.0 * static_cast<double>(t_bound) * d *
        std::log2(static_cast<double>(t_bound) * d + 2.0)));
    CHECK(plan.D_strong == d_strong);

    auto holds = [&](long long m) {
        const long double D = static_cast<long double>(plan.D_strong);
        const long double lhs = std::log(8.0L) + D * (1.0L + std::log(static_cast<long double>(m) / D)) -
                                static_cast<long double>(m) * (eps / 2.0) * (eps / 2.0) / 32.0L;
        return lhs <= std::log(static_cast<long double>(delta));
    };

    long long last_violator = 0;
    const long long hi = 2 * plan.m_required + 10;
    for (long long m = 1; m <= hi; ++m)
        if (!holds(m)) last_violator = m;
    REQUIRE(last_violator > 0);
    REQUIRE(last_violator < hi - 2); // the scan saw the final satisfied run
    CHECK(plan.m_required == last_violator + 1);

    // the library's own predicate agrees at the boundary
    CHECK(planner_inequality_holds(plan.D_strong, eps, delta, plan.m_required));
    CHECK_FALSE(planner_inequality_holds(plan.D_strong, eps, delta, plan.m_required - 1));

    // the rising flank: tiny m satisfies the bound vacuously, which is why
    // "least m" must mean the start of the final satisfied run
    CHECK(planner_inequality_holds(plan.D_strong, eps, delta, 1));
}

TEST_CASE("planner demand grows as epsilon shrinks") {
    const SampleSizePlan loose = sample_size(1, 0.9, 0.5, 0.45);
    const SampleSizePlan tight = sample_size(1, 0.6, 0.5, 0.45);
    CHECK(tight.m_required > loose.m_required);
    const SampleSizePlan tighter = sample_size(1, 0.6, 0.25, 0.45);
    CHECK(tighter.m_required >= tight.m_required); // smaller delta never cheaper
}

TEST_CASE("empirical error is an exact count over the sample") {
    const SyntheticTask task = make_majority_task(5, 3);
    const LabeledSample s = draw_sample(task, 16, 21);

    const FunctionHypothesis always_plus("always+1", [](PointView) { return 1; });
    std::size_t minus = 0;
    for (const auto& ex : s.examples)
        if (ex.y == -1) ++minus;
    CHECK(misclassified_count(always_plus, s) == minus);
    CHECK(empirical_error(always_plus, s) == static_cast<double>(minus) / 16.0);

    const DecisionStump stump(2, 0.5, 1);
    std::size_t bad = 0;
    for (const auto& ex : s.examples)
        if (stump.evaluate(ex.x) != ex.y) ++bad;
    CHECK(misclassified_count(stump, s) == bad);
    CHECK(empirical_error(stump, s) == static_cast<double>(bad) / 16.0);
}

TEST_CASE("ensemble prediction breaks score ties toward +1") {
    Ensemble e;
    e.members.push_back(std::make_shared<FunctionHypothesis>("p", [](PointView) { return 1; }));
    e.members.push_back(std::make_shared<FunctionHypothesis>("n", [](PointView) { return -1; }));
    e.weights = {1.0, 1.0};
    const Point x{0.0};
    CHECK(e.score(x) == 0.0);
    CHECK(e.predict(x) == 1);
}

TEST_CASE("generalization estimate hits 0 for the target and 1 for its negation") {
    const SyntheticTask task = make_majority_task(6, 3, 0.2); // noise must not leak into evaluation
    const FunctionHypothesis truth("truth", [task](PointView x) { return task.target(x); });
    const FunctionHypothesis anti("anti", [task](PointView x) { return -task.target(x); });

    const GeneralizationEstimate g0 = generalization_error_estimate(truth, task, 500, 77);
    CHECK(g0.estimate == 0.0);
    CHECK(g0.n_test == 500);
    const GeneralizationEstimate g1 = generalization_error_estimate(anti, task, 500, 77);
    CHECK(g1.estimate == 1.0);

    CHECK_THROWS_AS(generalization_error_estimate(truth, task, 0, 1), DomainError);
}

TEST_CASE("binomial half-width matches the normal-approximation formula") {
    // z pinned at 1.96, the same constant the t-table falls back to
    const double hw = binomial_halfwidth95(0.2, 100);
    CHECK(hw == doctest::Approx(1.96 * std::sqrt(0.2 * 0.8 / 100.0)).epsilon(1e-9));
    CHECK(binomial_halfwidth95(0.0, 50) == 0.0);

    // the estimate helper reports exactly this half-width for its own p-hat
    const SyntheticTask task = make_majority_task(5, 3);
    const DecisionStump stump(0, 0.5, 1);
    const GeneralizationEstimate g = generalization_error_estimate(stump, task, 400, 5);
    CHECK(g.halfwidth95 == binomial_halfwidth95(g.estimate, 400));
}

TEST_CASE("sample oracle bills every lookup and rejects bad indices") {
    const LabeledSample s = draw_sample(make_majority_task(5, 3), 16, 2);
    CostLedger ledger;
    SampleOracle view = oracle_view(s, ledger);
    CHECK(ledger.snapshot().sample_queries == 0);

    (void)view.query(3);
    (void)view.query(3);
    CHECK(ledger.snapshot().sample_queries == 2);

    for (std::size_t i = 0; i < view.size(); ++i) {
        CHECK(view.query(i).y == s[i].y);
    }
    CHECK(ledger.snapshot().sample_queries == 18);
    CHECK_THROWS_AS(view.query(16), DomainError);
}

TEST_CASE("csv round trip is exact") {
    SUBCASE("boolean features") {
        const LabeledSample s = draw_sample(make_majority_task(4, 3, 0.2), 20, 13);
        std::stringstream buf;
        write_sample_csv(buf, s);
        std::string header;
        std::getline(buf, header);
        CHECK(header == "x_1,x_2,x_3,x_4,label");
        buf.clear();
        buf.seekg(0);
        const LabeledSample back = read_sample_csv(buf);
        REQUIRE(back.size() == s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(back[i].x == s[i].x);
            CHECK(back[i].y == s[i].y);
        }
    }
    SUBCASE("continuous features survive bit for bit") {
        const LabeledSample s = draw_sample(make_threshold_task(0.37), 16, 19);
        std::stringstream buf;
        write_sample_csv(buf, s);
        const LabeledSample back = read_sample_csv(buf);
        REQUIRE(back.size() == s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(back[i].x == s[i].x); // round-trip precision printing
            CHECK(back[i].y == s[i].y);
        }
    }
    SUBCASE("malformed input is rejected") {
        std::stringstream buf("x_1,label\n0.5,2\n");
        CHECK_THROWS_AS(read_sample_csv(buf), Error);
    }
}
