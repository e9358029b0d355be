#pragma once

#include <atomic>
#include <cstdint>
#include <string>

namespace qsb {

// Snapshot of the cost counters, safe to copy and serialize.
struct LedgerSnapshot {
    std::uint64_t oracle_queries = 0;      // applications of the weight / string oracle
    std::uint64_t hypothesis_queries = 0;  // applications of a hypothesis evaluation
    std::uint64_t sample_queries = 0;      // lookups of a stored labeled example
    std::uint64_t amplification_rounds = 0;
    std::uint64_t weak_learner_calls = 0;
    bool memoized = false; // true if any weight value was served from a memo

    std::uint64_t total_queries() const {
        return oracle_queries + hypothesis_queries + sample_queries;
    }
    std::string to_json() const;
};

// Query accounting shared by the classical and simulated-quantum paths.
// Increments are relaxed atomics: sweep workers each own their ledger, but
// nothing breaks if one is shared.
class CostLedger {
public:
    void add_oracle(std::uint64_t n = 1) { oracle_.fetch_add(n, std::memory_order_relaxed); }
    void add_hypothesis(std::uint64_t n = 1) { hypothesis_.fetch_add(n, std::memory_order_relaxed); }
    void add_sample(std::uint64_t n = 1) { sample_.fetch_add(n, std::memory_order_relaxed); }
    void add_amplification_rounds(std::uint64_t n = 1) { rounds_.fetch_add(n, std::memory_order_relaxed); }
    void add_weak_learner_call(std::uint64_t n = 1) { weak_calls_.fetch_add(n, std::memory_order_relaxed); }
    void flag_memoized() { memoized_.store(true, std::memory_order_relaxed); }

    LedgerSnapshot snapshot() const {
        LedgerSnapshot s;
        s.oracle_queries = oracle_.load(std::memory_order_relaxed);
        s.hypothesis_queries = hypothesis_.load(std::memory_order_relaxed);
        s.sample_queries = sample_.load(std::memory_order_relaxed);
        s.amplification_rounds = rounds_.load(std::memory_order_relaxed);
        s.weak_learner_calls = weak_calls_.load(std::memory_order_relaxed);
        s.memoized = memoized_.load(std::memory_order_relaxed);
        return s;
    }

private:
    std::atomic<std::uint64_t> oracle_{0};
    std::atomic<std::uint64_t> hypothesis_{0};
    std::atomic<std::uint64_t> sample_{0};
    std::atomic<std::uint64_t> rounds_{0};
    std::atomic<std::uint64_t> weak_calls_{0};
    std::atomic<bool> memoized_{false};
};

} // namespace qsb
