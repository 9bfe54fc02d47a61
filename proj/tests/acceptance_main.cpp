// Acceptance suite: one line per criterion, nonzero exit if any fail.
//
// Criterion 1 bundles two cipher-core checks that cannot both hold: the
// round-trip identity demands an invertible round (the half entering the
// round function must survive into the next state), while the stated
// zero-table collapse (a||b) -> (a||a) demands a round that discards that
// half. The cipher implements the invertible rule used by every
// difference equation in the attack, so check 1a passes and 1b fails by
// construction; 1b is reported honestly rather than redefined.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qmitm/attack.hpp"
#include "qmitm/cost_model.hpp"
#include "qmitm/diffeq.hpp"
#include "qmitm/feistel.hpp"
#include "qmitm/quantum.hpp"

using namespace qmitm;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct RightPair {
    Block p, pp;
    std::vector<Half> trace, trace2;
};

std::optional<RightPair> make_right_pair(const CipherSpec& spec, Half x, std::mt19937_64& rng,
                                         int adm_free_bits, int max_tries = 1 << 16) {
    const Half mask = spec.half_mask();
    for (int i = 0; i < max_tries; ++i) {
        Block p{static_cast<Half>(rng()) & mask, static_cast<Half>(rng()) & mask};
        Half t0 = (spec.subkeys[0] ^ p.left) & mask;
        Half df0 = spec.round_fns[0][t0] ^ spec.round_fns[0][t0 ^ x];
        Block pp{static_cast<Half>(p.left ^ x), static_cast<Half>(p.right ^ df0)};
        auto tr = encrypt_trace(spec, p);
        auto tr2 = encrypt_trace(spec, pp);
        if ((tr[6] ^ tr2[6]) != 0) continue;
        if (adm_free_bits > 0 && (tr[7] ^ tr2[7]) >= (Half{1} << adm_free_bits)) continue;
        return RightPair{p, pp, tr, tr2};
    }
    return std::nullopt;
}

char buf[512];

Outcome criterion1() {
    std::mt19937_64 rng(1);
    for (int n = 4; n <= 24; n += 2)
        for (int r = 1; r <= 9; ++r) {
            CipherSpec spec = generate_cipher(n, r, rng());
            const Half mask = spec.half_mask();
            for (int i = 0; i < 10000; ++i) {
                Block p{static_cast<Half>(rng()) & mask, static_cast<Half>(rng()) & mask};
                if (decrypt(spec, encrypt(spec, p)) != p)
                    return {false, "round-trip violated at n=" + std::to_string(n)};
                if (encrypt(spec, decrypt(spec, p)) != p)
                    return {false, "reverse round-trip violated at n=" + std::to_string(n)};
            }
        }

    // Zero-table collapse as stated: encrypt(a||b) == (a||a) for r >= 1.
    bool collapse_holds = true;
    std::string counter;
    for (int r = 1; r <= 3 && collapse_holds; ++r) {
        CipherSpec zspec;
        zspec.n = 4;
        zspec.r = r;
        zspec.round_fns.assign(r, FunctionTable(4, 0));
        zspec.subkeys.assign(r, 0);
        for (Half a = 0; a < 4 && collapse_holds; ++a)
            for (Half b = 0; b < 4 && collapse_holds; ++b) {
                Block out = encrypt(zspec, Block{a, b});
                if (!(out.left == a && out.right == a)) {
                    collapse_holds = false;
                    std::snprintf(buf, sizeof buf,
                                  "r=%d (%u||%u)->(%u||%u), not (%u||%u)", r, a, b, out.left,
                                  out.right, a, a);
                    counter = buf;
                }
            }
    }
    if (!collapse_holds)
        return {false,
                "1a round-trip exact over the full grid (PASS); 1b zero-table collapse to "
                "(a||a) (FAIL: " + counter +
                    " — the invertible round maps zero tables to a half swap per round; a "
                    "collapsing round would discard the function input half and break the "
                    "round-trip identity checked in 1a)"};
    return {true, "round-trip and zero-table collapse"};
}

Outcome criterion2() {
    std::mt19937_64 rng(2);
    for (int n : {8, 12}) {
        const std::size_t m = std::size_t{1} << (n / 2);
        for (int trial = 0; trial < 100; ++trial) {
            FunctionTable f(m);
            for (auto& v : f) v = static_cast<Half>(rng()) & static_cast<Half>(m - 1);
            Half a = static_cast<Half>(1 + rng() % (m - 1));
            auto hist = difference_census(f, a);
            std::uint64_t total = 0;
            for (std::uint64_t c : hist) total += c;
            if (total != m) return {false, "census sum mismatch"};
            Half b = static_cast<Half>(rng() % m);
            for (Half t : solve_difference_equation(f, a, b))
                if ((f[t] ^ f[t ^ a]) != b) return {false, "solution fails substitution"};
        }
    }
    return {true, "census sums exact, solutions re-verify"};
}

Outcome criterion3() {
    std::mt19937_64 rng(3);
    int built = 0;
    std::uint64_t checked = 0;
    while (built < 200) {
        CipherSpec spec = generate_cipher(12, 7, rng());
        const Half mask = spec.half_mask();
        Half x = static_cast<Half>(32 | (rng() & 31));
        auto rp = make_right_pair(spec, x, rng, 0, 4096);
        if (!rp) continue;
        ++built;
        Characteristic ch;
        ch.x = x;
        ch.t2 = (spec.subkeys[2] ^ rp->trace[3]) & mask;
        ch.t3 = (spec.subkeys[3] ^ rp->trace[4]) & mask;
        ch.t4 = (spec.subkeys[4] ^ rp->trace[5]) & mask;
        ch.y = spec.round_fns[2][ch.t2] ^ spec.round_fns[2][ch.t2 ^ x];
        ch.xp = rp->trace[5] ^ rp->trace2[5];
        for (int delta : {1, 3, 4, 6}) {
            auto seq = delta_sequence(spec.public_part(), ch, delta);
            for (int j = 1; j <= delta; ++j) {
                Half t0 = (spec.subkeys[0] ^ rp->p.left) & mask;
                Half df0 = spec.round_fns[0][t0] ^ spec.round_fns[0][t0 ^ j];
                Block pj{static_cast<Half>(rp->p.left ^ j),
                         static_cast<Half>(rp->p.right ^ df0)};
                auto trj = encrypt_trace(spec, pj);
                ++checked;
                if (seq[j - 1] != (rp->trace[6] ^ trj[6]))
                    return {false, "formula/measurement mismatch"};
            }
        }
    }
    std::snprintf(buf, sizeof buf, "200 right pairs, %llu positions bit-exact",
                  static_cast<unsigned long long>(checked));
    return {true, buf};
}

Outcome criterion4() {
    std::mt19937_64 rng(2024);
    double total = 0;
    const int seeds = 50;
    for (int s = 1; s <= seeds; ++s) {
        CipherSpec spec = generate_cipher(12, 7, static_cast<std::uint64_t>(s));
        Half x = static_cast<Half>(32 | (rng() & 31));
        Half xp;
        do {
            xp = static_cast<Half>(rng() & 63);
        } while (xp == 0 || xp == x);
        total += double(enumerate_characteristics(spec.public_part(), x, xp).size());
    }
    double mean = total / seeds;
    std::snprintf(buf, sizeof buf, "mean %.2f over %d seeds (band [57.6, 70.4])", mean, seeds);
    return {mean >= 57.6 && mean <= 70.4, buf};
}

Outcome criterion5() {
    double worst = 0;
    for (std::uint64_t p = 1; p <= 10; ++p) {
        std::uint64_t n = std::uint64_t{1} << p;
        for (std::uint64_t m = 1; m <= std::min<std::uint64_t>(8, n); ++m) {
            std::vector<std::uint64_t> marked;
            for (std::uint64_t i = 0; i < m; ++i) marked.push_back(i * (n / m));
            double theta = std::asin(std::sqrt(double(m) / double(n)));
            for (std::uint64_t k = 0; k <= 200; ++k) {
                double expect = std::sin((2.0 * k + 1.0) * theta);
                expect *= expect;
                double got = grover_success_probability(n, marked, k);
                worst = std::max(worst, std::fabs(got - expect));
            }
        }
    }
    std::snprintf(buf, sizeof buf, "max |deviation| = %.3g (tolerance 1e-9)", worst);
    return {worst < 1e-9, buf};
}

Outcome criterion6() {
    std::mt19937_64 rng(6);
    int found_both = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::uint64_t n = 16 + rng() % 1009;
        std::uint64_t m = 16 + rng() % 1009;
        std::uint64_t px = rng() % n, py = rng() % m;
        std::vector<std::uint64_t> fv(n), gv(m);
        for (auto& v : fv) v = rng() << 1;
        for (auto& v : gv) v = (rng() << 1) | 1;
        gv[py] = fv[px];
        ClawInstance inst;
        inst.domain_x = n;
        inst.domain_y = m;
        inst.f = [&](std::uint64_t x) { return fv[x]; };
        inst.g = [&](std::uint64_t y) { return gv[y]; };
        bool ok = true;
        for (ClawMode mode : {ClawMode::Oracle, ClawMode::Faithful}) {
            ClawParams params;
            params.mode = mode;
            params.seed = rng();
            auto res = claw_find(inst, params);
            if (!res.found || fv[res.x] != gv[res.y]) ok = false;
        }
        if (ok) ++found_both;
    }
    int clean_misses = 0;
    for (int trial = 0; trial < 50; ++trial) {
        std::uint64_t n = 16 + rng() % 1009;
        std::uint64_t m = 16 + rng() % 1009;
        std::vector<std::uint64_t> fv(n), gv(m);
        for (auto& v : fv) v = rng() << 1;
        for (auto& v : gv) v = (rng() << 1) | 1;
        ClawInstance inst;
        inst.domain_x = n;
        inst.domain_y = m;
        inst.f = [&](std::uint64_t x) { return fv[x]; };
        inst.g = [&](std::uint64_t y) { return gv[y]; };
        ClawParams params;
        params.seed = rng();
        bool faithful_miss = !claw_find(inst, params).found;
        params.mode = ClawMode::Oracle;
        bool oracle_miss = !claw_find(inst, params).found;
        if (faithful_miss && oracle_miss) ++clean_misses;
    }
    std::snprintf(buf, sizeof buf, "%d/100 planted found in both modes, %d/50 no-claw reported",
                  found_both, clean_misses);
    return {found_both == 100 && clean_misses == 50, buf};
}

Outcome criterion7() {
    int successes = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        CipherSpec spec = generate_cipher(12, 6, seed);
        AttackParams params;
        params.seed = seed;
        AttackReport rep = run_attack_6round(spec, params);
        if (rep.success) {
            if (rep.recovered_subkeys != spec.subkeys) return {false, "recovered wrong keys"};
            ++successes;
        }
    }
    std::snprintf(buf, sizeof buf, "%d/20 full-key recoveries (need >= 10)", successes);
    return {successes >= 10, buf};
}

Outcome criterion8() {
    int successes = 0;
    double worst_ratio_hi = 0, worst_ratio_lo = 1e18;
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        CipherSpec spec = generate_cipher(12, 7, seed);
        AttackParams params;
        params.seed = seed;
        AttackReport rep = run_attack_7round(spec, params);
        if (!rep.query_accounting_exact) return {false, "query accounting not exact"};
        double ratio = rep.ledger.modeled_quantum_time / std::exp2(2.0 * 12 / 3.0);
        worst_ratio_hi = std::max(worst_ratio_hi, ratio);
        worst_ratio_lo = std::min(worst_ratio_lo, ratio);
        if (rep.success) {
            if (rep.recovered_subkeys != spec.subkeys) return {false, "recovered wrong keys"};
            ++successes;
        }
    }
    // Documented constant: modeled time stays within a factor 64 of 2^{2n/3}.
    bool ratio_ok = worst_ratio_hi <= 64.0 && worst_ratio_lo >= 1.0 / 64.0;
    std::snprintf(buf, sizeof buf,
                  "%d/25 recoveries (need >= 10); time/2^(2n/3) in [%.2f, %.2f] (documented "
                  "constant 64); query ledgers exact",
                  successes, worst_ratio_lo, worst_ratio_hi);
    return {successes >= 10 && ratio_ok, buf};
}

Outcome criterion9() {
    int successes = 0;
    std::uint64_t wrong_tested = 0, false_pos = 0;
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        CipherSpec spec = generate_cipher(12, 8, seed);
        AttackParams params;
        params.seed = seed;
        AttackReport rep = run_attack_rround(spec, params);
        if (rep.success) {
            if (rep.recovered_subkeys != spec.subkeys) return {false, "recovered wrong keys"};
            if (rep.recovered_subkeys[7] != spec.subkeys[7])
                return {false, "trailing subkey wrong"};
            ++successes;
            wrong_tested += rep.outer_keys_tested - 1;  // all but the hit were wrong keys
        } else {
            wrong_tested += rep.outer_keys_tested;
        }
        false_pos += rep.outer_false_positives;
    }
    double rate = wrong_tested ? double(false_pos) / double(wrong_tested) : 0.0;
    std::snprintf(buf, sizeof buf,
                  "%d/25 recoveries (need >= 10); wrong-key claw rate %.4f over %llu tested "
                  "(need < 0.05)",
                  successes, rate, static_cast<unsigned long long>(wrong_tested));
    return {successes >= 10 && rate < 0.05, buf};
}

Outcome criterion10(bool with_n24) {
    // Synthetic self-test first: exact recovery of the claimed exponents.
    std::vector<std::pair<int, CostLedger>> synth;
    for (int n : {12, 18, 24}) synth.emplace_back(n, synthetic_ledger(n, 7));
    ScalingResult sres = scaling_check(synth, 7);
    ComplexityClaim claim = predicted_costs(7);
    if (std::fabs(sres.time.slope - claim.time_coeff) > 1e-12 ||
        std::fabs(sres.data.slope - claim.data_coeff) > 1e-12 ||
        std::fabs(sres.memory.slope - claim.memory_coeff) > 1e-12 ||
        std::fabs(sres.qubits.slope - claim.qubit_coeff) > 1e-12)
        return {false, "synthetic self-test not exact"};

    std::vector<std::pair<int, CostLedger>> measured;
    std::vector<int> ns{12, 18};
    if (with_n24) ns.push_back(24);
    for (int n : ns) {
        CipherSpec spec = generate_cipher(n, 7, 1);
        AttackParams params;
        params.seed = 1;
        AttackReport rep = run_attack_7round(spec, params);
        measured.emplace_back(n, rep.ledger);
    }
    ScalingResult res = scaling_check(measured, 7);
    std::snprintf(buf, sizeof buf,
                  "slopes: time %.3f (2/3), data %.3f (2/3), memory %.3f (5/6), qubits %.3f "
                  "(5/6); synthetic exact",
                  res.time.slope, res.data.slope, res.memory.slope, res.qubits.slope);
    return {res.all_pass, buf};
}

}  // namespace

int main(int argc, char** argv) {
    bool with_n24 = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--with-n24") == 0) with_n24 = true;

    struct Row {
        std::string name;
        std::function<Outcome()> fn;
        double budget_s;  // 0 = no stated limit
    };
    std::vector<Row> rows = {
        {"1 cipher core round-trip + zero-table collapse", criterion1, 5},
        {"2 difference-equation census and substitution", criterion2, 5},
        {"3 delta-sequence / oracle equivalence", criterion3, 10},
        {"4 characteristic count near 2^{n/2}", criterion4, 0},
        {"5 statevector matches the closed form", criterion5, 10},
        {"6 claw finder on planted instances", criterion6, 30},
        {"7 six-round classical key recovery", criterion7, 120},
        {"8 seven-round quantum-emulated key recovery", criterion8, 300},
        {"9 extension to eight rounds", criterion9, 900},
        {"10 ledger exponent scaling", [with_n24]() { return criterion10(with_n24); }, 1800},
    };

    int failures = 0;
    for (auto& row : rows) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = row.fn();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (row.budget_s > 0 && secs > row.budget_s) {
            out.pass = false;
            out.detail += " [over the " + std::to_string(int(row.budget_s)) + "s budget]";
        }
        std::printf("CRITERION %-48s [%s] %s (%.1fs)\n", row.name.c_str(),
                    out.pass ? "PASS" : "FAIL", out.detail.c_str(), secs);
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failing\n", failures);
    return failures ? 1 : 0;
}
