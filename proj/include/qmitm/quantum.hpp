// Emulated quantum subroutines. Every routine returns the exact classical
// answer (found by brute force) and charges a modeled quantum cost to a
// ledger, so attack correctness and cost accounting stay separate. A small
// exact statevector simulator validates the Grover charge model.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "qmitm/ledger.hpp"

namespace qmitm {

// Charged iterations for a Grover search over N candidates with M marked:
// ceil((pi/4) * sqrt(N / max(1, M))).
std::uint64_t grover_iterations(std::uint64_t domain_size, std::uint64_t marked_count);

struct GroverReport {
    std::optional<std::uint64_t> result;  // lowest marked element, if any
    std::uint64_t iterations = 0;         // charged iterations
    std::uint64_t domain_size = 0;
    std::uint64_t marked_count = 0;

    bool no_solution() const { return marked_count == 0; }
};

// Exhaustively scans [0, N) for predicate hits, returns the lowest one and
// charges grover_iterations(N, M). M = 0 is a flagged outcome (not an
// error) charged at the full ceil((pi/4) sqrt(N)).
GroverReport grover_emulate(std::uint64_t domain_size,
                            const std::function<bool(std::uint64_t)>& predicate,
                            CostLedger* ledger = nullptr);

// Success probability after k iterations of the diffusion+oracle operator
// on the uniform state, computed with the exact two-amplitude recurrence on
// the marked/unmarked invariant subspace. N must be a power of two.
double grover_success_probability(std::uint64_t domain_size,
                                  const std::vector<std::uint64_t>& marked, std::uint64_t k);

// Iteration count closest to the success-probability peak; used when
// validating charges against the statevector simulator.
std::uint64_t grover_optimal_iterations(std::uint64_t domain_size, std::uint64_t marked_count);

// Repetitions of a subroutine with per-run success probability p under
// amplitude amplification: ceil(1 / sqrt(p)). p = 0 is unbounded and throws.
std::uint64_t amplification_cost(double p);

// Memory access under (emulated) superposed addressing: identical to a
// classical read, plus one qram_lookups charge.
template <class T>
const T& qram_lookup(const std::vector<T>& table, std::size_t address,
                     CostLedger* ledger = nullptr) {
    if (address >= table.size()) throw std::out_of_range("address outside table");
    if (ledger) ledger->qram_lookups += 1;
    return table[address];
}

// Per-processor time of a Grover search spread over P processors:
// ceil((pi/4) sqrt(N / (M * P))); raises the ledger's parallel width to P.
std::uint64_t parallel_grover_cost(std::uint64_t domain_size, std::uint64_t marked_count,
                                   std::uint64_t processors, CostLedger* ledger = nullptr);

// ---------------------------------------------------------------------------
// Claw finding between f over [N] and g over [M]: find (x, y) with
// f(x) = g(y). The subset-based search samples A of size l and B of size
// l^2, sorts A by value and scans B against it, repeating under an
// amplitude-amplification budget. The modeled charge per attempt is
// l*ceil(log2 l) comparisons for the sort plus sqrt(|B|)*ceil(log2 l) for
// the search over B, plus any caller-supplied per-attempt evaluation cost;
// the total charge is ceil(sqrt(N*M / l^3)) attempts regardless of how many
// the classical emulation actually needed.

enum class ClawMode { Faithful, Oracle };

struct ClawParams {
    std::uint64_t l = 0;              // 0: use min(N, floor(sqrt(M)))
    std::uint64_t iteration_cap = 0;  // 0: 64 * ceil(sqrt(2NM / l^3))
    std::uint64_t seed = 0;
    ClawMode mode = ClawMode::Faithful;
    double extra_per_round_charge = 0.0;  // e.g. cost of preparing g in superposition
};

struct ClawResult {
    bool found = false;
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    std::uint64_t rounds_executed = 0;    // classical attempts actually run
    std::uint64_t modeled_iterations = 0; // charged attempts
    std::uint64_t l = 0;
};

namespace detail {

// Floyd's algorithm: k distinct values from [0, n), deterministic in rng.
inline std::vector<std::uint64_t> sample_distinct(std::uint64_t n, std::uint64_t k,
                                                  std::mt19937_64& rng) {
    if (k >= n) {
        std::vector<std::uint64_t> all(n);
        for (std::uint64_t i = 0; i < n; ++i) all[i] = i;
        return all;
    }
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(k);
    std::vector<std::uint64_t> out;
    out.reserve(k);
    for (std::uint64_t j = n - k; j < n; ++j) {
        std::uint64_t t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
        if (chosen.count(t)) t = j;
        chosen.insert(t);
        out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

std::uint64_t claw_modeled_iterations(std::uint64_t domain_x, std::uint64_t domain_y,
                                      std::uint64_t l);
std::uint64_t claw_default_cap(std::uint64_t domain_x, std::uint64_t domain_y, std::uint64_t l);
double claw_round_charge(std::uint64_t l, double extra_per_round_charge);

// Multi-valued core: fx and gy map an index to the (possibly empty) list of
// values it evaluates to; a claw is any pair sharing a value. `reject`
// skips known-spurious (x, y) matches. Ties break deterministically: the
// scan prefers the lowest y, then the lowest x.
template <class V>
ClawResult claw_search(std::uint64_t domain_x, std::uint64_t domain_y,
                       const std::function<std::vector<V>(std::uint64_t)>& fx,
                       const std::function<std::vector<V>(std::uint64_t)>& gy,
                       const ClawParams& params, CostLedger* ledger = nullptr,
                       const std::function<bool(std::uint64_t, std::uint64_t)>& reject = nullptr) {
    if (domain_x == 0 || domain_y == 0) throw std::invalid_argument("empty claw domain");
    std::uint64_t l = params.l;
    if (l == 0) {
        l = std::min<std::uint64_t>(domain_x,
                                    static_cast<std::uint64_t>(std::sqrt(double(domain_y))));
        if (l == 0) l = 1;
    }
    if (l > domain_x) throw std::invalid_argument("subset size exceeds the x-domain");

    ClawResult res;
    res.l = l;
    res.modeled_iterations = claw_modeled_iterations(domain_x, domain_y, l);
    if (ledger) {
        ledger->modeled_quantum_time +=
            double(res.modeled_iterations) *
            claw_round_charge(l, params.extra_per_round_charge);
    }

    const std::uint64_t cap =
        params.iteration_cap ? params.iteration_cap : claw_default_cap(domain_x, domain_y, l);

    auto try_match = [&](const std::vector<std::pair<V, std::uint64_t>>& sorted_a,
                         std::uint64_t y) -> bool {
        for (const V& val : gy(y)) {
            auto it = std::lower_bound(
                sorted_a.begin(), sorted_a.end(), val,
                [](const std::pair<V, std::uint64_t>& e, const V& v) { return e.first < v; });
            for (; it != sorted_a.end() && it->first == val; ++it) {
                if (reject && reject(it->second, y)) continue;
                res.found = true;
                res.x = it->second;
                res.y = y;
                return true;
            }
        }
        return false;
    };

    if (params.mode == ClawMode::Oracle) {
        std::vector<std::pair<V, std::uint64_t>> all;
        for (std::uint64_t x = 0; x < domain_x; ++x)
            for (V& v : fx(x)) all.emplace_back(std::move(v), x);
        std::sort(all.begin(), all.end());
        for (std::uint64_t y = 0; y < domain_y; ++y)
            if (try_match(all, y)) return res;
        return res;
    }

    std::mt19937_64 rng(params.seed);
    const std::uint64_t b_size = (l > 0xffffffffull) ? domain_y
                                                     : std::min<std::uint64_t>(domain_y, l * l);
    const bool b_saturated = b_size == domain_y;

    // One sorted index over every y value: a round can only succeed at a y
    // whose value also appears under a sampled A element, so each attempt
    // probes the sampled values here and checks only those y against the
    // round's B subset. Outcomes are identical to scanning B directly
    // (lowest matching y in B wins); B is drawn lazily because an attempt
    // with no value match fails for every choice of B.
    std::vector<std::pair<V, std::uint64_t>> g_index;
    for (std::uint64_t y = 0; y < domain_y; ++y)
        for (V& v : gy(y)) g_index.emplace_back(std::move(v), y);
    std::sort(g_index.begin(), g_index.end());

    std::vector<std::uint64_t> hits;
    for (std::uint64_t round = 0; round < cap; ++round) {
        res.rounds_executed = round + 1;
        std::vector<std::uint64_t> a_idx = detail::sample_distinct(domain_x, l, rng);
        std::vector<std::pair<V, std::uint64_t>> sorted_a;
        sorted_a.reserve(a_idx.size());
        for (std::uint64_t x : a_idx)
            for (V& v : fx(x)) sorted_a.emplace_back(std::move(v), x);
        std::sort(sorted_a.begin(), sorted_a.end());

        hits.clear();
        for (const auto& [val, x] : sorted_a) {
            auto lo = std::lower_bound(
                g_index.begin(), g_index.end(), val,
                [](const std::pair<V, std::uint64_t>& e, const V& v) { return e.first < v; });
            for (; lo != g_index.end() && lo->first == val; ++lo) hits.push_back(lo->second);
        }
        if (hits.empty()) continue;
        std::sort(hits.begin(), hits.end());
        hits.erase(std::unique(hits.begin(), hits.end()), hits.end());

        std::vector<std::uint64_t> b_idx;
        if (!b_saturated) b_idx = detail::sample_distinct(domain_y, b_size, rng);
        for (std::uint64_t y : hits) {
            if (!b_saturated && !std::binary_search(b_idx.begin(), b_idx.end(), y)) continue;
            if (try_match(sorted_a, y)) return res;
        }
    }
    return res;
}

// Single-valued instance (the generic claw-finding surface).
struct ClawInstance {
    std::uint64_t domain_x = 0;  // |X| = N
    std::uint64_t domain_y = 0;  // |Y| = M
    std::function<std::uint64_t(std::uint64_t)> f;
    std::function<std::uint64_t(std::uint64_t)> g;
};

ClawResult claw_find(const ClawInstance& inst, const ClawParams& params,
                     CostLedger* ledger = nullptr);

}  // namespace qmitm
