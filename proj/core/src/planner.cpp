#include "qsb/planner.hpp"

#include <cmath>

#include "qsb/errors.hpp"

namespace qsb {

long double planner_log_margin(long long D_strong, double epsilon, double delta, long long m) {
    const long double D = static_cast<long double>(D_strong);
    const long double eta = static_cast<long double>(epsilon) / 2.0L;
    const long double lm = static_cast<long double>(m);
    return std::log(8.0L) + D * (1.0L + std::log(lm) - std::log(D)) - lm * eta * eta / 32.0L -
           std::log(static_cast<long double>(delta));
}

bool planner_inequality_holds(long long D_strong, double epsilon, double delta, long long m) {
    return planner_log_margin(D_strong, epsilon, delta, m) <= 0.0L;
}

SampleSizePlan sample_size(int d, double epsilon, double delta, double gamma, double c_D) {
    if (d < 1) throw DomainError("sample_size: d must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("sample_size: epsilon in (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("sample_size: delta in (0,1)");
    if (!(gamma > 0.0 && gamma < 0.5)) throw DomainError("sample_size: gamma in (0,1/2)");
    if (!(c_D > 0.0)) throw DomainError("sample_size: c_D must be positive");

    SampleSizePlan plan;
    plan.d = d;
    plan.epsilon = epsilon;
    plan.delta = delta;
    plan.gamma = gamma;
    plan.c_D = c_D;

    const double kappa = epsilon / 2.2;
    plan.T_bound = static_cast<long long>(
        std::ceil(2.2 / (kappa * gamma * gamma * std::sqrt(1.0 - gamma))));

    const double Td = static_cast<double>(plan.T_bound) * static_cast<double>(d);
    plan.D_strong = static_cast<long long>(std::ceil(c_D * Td * std::log2(Td + 2.0)));
    if (plan.D_strong < d) plan.D_strong = d; // capacity can never undercut the base class

    // At m = D_strong the bound is 8 e^D exp(-D eta^2/32) > delta, so the
    // violating region is non-empty and we are inside or left of it.  From
    // there the predicate "bound holds" is false up to the downward crossing
    // and true after (log-concavity in m), so gallop + bisect is exact.
    const long long start = plan.D_strong;
    if (planner_inequality_holds(plan.D_strong, epsilon, delta, start))
        throw ContractError("sample_size: deviation bound unexpectedly holds at m = D_strong");

    long long lo = start; // inequality violated here
    long long hi = start;
    while (!planner_inequality_holds(plan.D_strong, epsilon, delta, hi)) {
        lo = hi;
        if (hi > (1LL << 61)) throw DomainError("sample_size: required m overflows the search range");
        hi *= 2;
    }
    while (hi - lo > 1) {
        long long mid = lo + (hi - lo) / 2;
        if (planner_inequality_holds(plan.D_strong, epsilon, delta, mid))
            hi = mid;
        else
            lo = mid;
    }
    plan.m_required = hi;

    if (!planner_inequality_holds(plan.D_strong, epsilon, delta, plan.m_required) ||
        planner_inequality_holds(plan.D_strong, epsilon, delta, plan.m_required - 1))
        throw ContractError("sample_size: boundary check failed");
    return plan;
}

} // namespace qsb
