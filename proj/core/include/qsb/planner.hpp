#pragma once

#include <cstdint>

namespace qsb {

// How many examples to draw so that a hypothesis whose training error is
// small is, with probability 1 - delta, within epsilon/2 of its true error.
//
// Built from three pieces:
//   T_bound  = ceil(2.2 / (kappa gamma^2 sqrt(1-gamma))), kappa = epsilon/2.2
//              (iteration ceiling of the estimated-sum booster)
//   D_strong = ceil(c_D * T_bound * d * log2(T_bound * d + 2))
//              (capacity of sign-of-sum ensembles of T_bound members from a
//              VC-dimension-d base class; c_D is an explicit knob because
//              only the order of this bound is pinned down)
//   m_required = least m making
//                8 (e m / D_strong)^D_strong exp(-m (epsilon/2)^2 / 32) <= delta
//                hold from that point on.
//
// The deviation bound is not monotone in m: for m far below D_strong it is
// vacuously tiny, rises above delta, then decays for good.  "Least m" here
// means one past the last violating m, i.e. the start of the final run of
// satisfied m; anything smaller would be a meaningless answer from the
// rising flank.
struct SampleSizePlan {
    int d = 1;
    double epsilon = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
    double c_D = 1.0;
    long long T_bound = 0;
    long long D_strong = 0;
    long long m_required = 0;
};

SampleSizePlan sample_size(int d, double epsilon, double delta, double gamma, double c_D = 1.0);

// log of the deviation bound minus log(delta); <= 0 iff the bound holds.
// Exposed so tests can scan the inequality independently.
long double planner_log_margin(long long D_strong, double epsilon, double delta, long long m);
bool planner_inequality_holds(long long D_strong, double epsilon, double delta, long long m);

} // namespace qsb
