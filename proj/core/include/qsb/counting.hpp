#pragma once

#include <cstdint>

#include "qsb/ledger.hpp"
#include "qsb/rng.hpp"

namespace qsb {

// Amplitude-estimation-based counting.  A Grover iterate built from the
// marking oracle has eigenphases +-2*asin(sqrt(a)); phase estimation with M
// grid points reads the phase off a register whose outcome law is the
// squared Dirichlet kernel centred at +-M*theta/pi.  We sample outcomes from
// that law directly, which is observationally identical to running the
// circuit and keeps memory flat regardless of M.

struct CountEstimate {
    double estimate = 0.0;           // median over repetitions
    int repetitions = 0;             // odd majority-vote count
    std::uint64_t precision_points = 0; // phase grid size M = 2^tau
    std::uint64_t oracle_queries = 0;   // charged to the ledger
};

// tau such that M = 2^tau >= 8 * sqrt(n_items) / eps_rel, the precision at
// which a single estimate lands within eps_rel * s with probability 8/pi^2.
int counting_precision_bits(double n_items, double eps_rel);

// Smallest odd r >= ceil(8 * ln(1/delta)); a median over r independent
// estimates fails only if half of them miss, which Chernoff drives below
// delta.
int odd_median_repetitions(double delta);

// One phase-estimation outcome for true good mass `amplitude`: picks an
// eigenvector branch by fair coin, samples the grid point y from the kernel
// law, and returns sin^2(pi y / M).
double sample_phase_outcome(double amplitude, std::uint64_t grid_points, Rng& rng);

// Estimate the number of marked items among n_items = 2^k.  Guarantee:
// |estimate - marked| <= eps_rel * marked with probability >= 1 - delta.
CountEstimate approx_count(std::uint64_t n_items, std::uint64_t marked, double eps_rel,
                           double delta, Rng& rng, CostLedger* ledger = nullptr);

} // namespace qsb
