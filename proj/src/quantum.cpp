#include "qmitm/quantum.hpp"

namespace qmitm {

namespace {
constexpr double kPi = 3.14159265358979323846;

bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }
}  // namespace

std::uint64_t grover_iterations(std::uint64_t domain_size, std::uint64_t marked_count) {
    if (domain_size == 0) throw std::invalid_argument("empty search domain");
    double m = marked_count == 0 ? 1.0 : double(marked_count);
    return static_cast<std::uint64_t>(std::ceil((kPi / 4.0) * std::sqrt(double(domain_size) / m)));
}

std::uint64_t grover_optimal_iterations(std::uint64_t domain_size, std::uint64_t marked_count) {
    if (marked_count == 0 || marked_count >= domain_size) return 0;
    double theta = std::asin(std::sqrt(double(marked_count) / double(domain_size)));
    double k = kPi / (4.0 * theta) - 0.5;
    return k <= 0 ? 0 : static_cast<std::uint64_t>(std::llround(k));
}

GroverReport grover_emulate(std::uint64_t domain_size,
                            const std::function<bool(std::uint64_t)>& predicate,
                            CostLedger* ledger) {
    if (domain_size == 0) throw std::invalid_argument("empty search domain");
    GroverReport rep;
    rep.domain_size = domain_size;
    for (std::uint64_t x = 0; x < domain_size; ++x) {
        if (predicate(x)) {
            if (!rep.result) rep.result = x;
            ++rep.marked_count;
        }
    }
    rep.iterations = grover_iterations(domain_size, rep.marked_count);
    if (ledger) ledger->modeled_quantum_time += double(rep.iterations);
    return rep;
}

double grover_success_probability(std::uint64_t domain_size,
                                  const std::vector<std::uint64_t>& marked, std::uint64_t k) {
    if (!is_power_of_two(domain_size))
        throw std::invalid_argument("statevector domain must be a power of two");
    std::unordered_set<std::uint64_t> distinct;
    for (std::uint64_t m : marked) {
        if (m >= domain_size) throw std::invalid_argument("marked element outside domain");
        distinct.insert(m);
    }
    const double n = double(domain_size);
    const double m = double(distinct.size());
    if (distinct.empty()) return 0.0;

    // Amplitudes are constant on the marked and unmarked classes, so the
    // walk lives in a two-dimensional subspace.
    double a = 1.0 / std::sqrt(n);  // amplitude of each marked element
    double b = 1.0 / std::sqrt(n);  // amplitude of each unmarked element
    for (std::uint64_t i = 0; i < k; ++i) {
        a = -a;                                      // oracle phase flip
        double mean = (m * a + (n - m) * b) / n;     // reflect about the uniform state
        a = 2.0 * mean - a;
        b = 2.0 * mean - b;
    }
    return m * a * a;
}

std::uint64_t amplification_cost(double p) {
    if (p <= 0.0) throw std::domain_error("success probability must be positive");
    if (p > 1.0) throw std::invalid_argument("success probability above one");
    return static_cast<std::uint64_t>(std::ceil(1.0 / std::sqrt(p)));
}

std::uint64_t parallel_grover_cost(std::uint64_t domain_size, std::uint64_t marked_count,
                                   std::uint64_t processors, CostLedger* ledger) {
    if (processors == 0) throw std::invalid_argument("need at least one processor");
    double m = marked_count == 0 ? 1.0 : double(marked_count);
    std::uint64_t t = static_cast<std::uint64_t>(
        std::ceil((kPi / 4.0) * std::sqrt(double(domain_size) / (m * double(processors)))));
    if (ledger) {
        ledger->modeled_quantum_time += double(t);
        if (processors > ledger->parallel_width) ledger->parallel_width = processors;
    }
    return t;
}

std::uint64_t claw_modeled_iterations(std::uint64_t domain_x, std::uint64_t domain_y,
                                      std::uint64_t l) {
    double it = std::sqrt(double(domain_x) * double(domain_y) / std::pow(double(l), 3.0));
    std::uint64_t v = static_cast<std::uint64_t>(std::ceil(it));
    return v ? v : 1;
}

std::uint64_t claw_default_cap(std::uint64_t domain_x, std::uint64_t domain_y, std::uint64_t l) {
    double expected =
        std::sqrt(2.0 * double(domain_x) * double(domain_y) / std::pow(double(l), 3.0));
    std::uint64_t cap = 64 * static_cast<std::uint64_t>(std::ceil(expected));
    return std::max<std::uint64_t>(cap, 64);
}

double claw_round_charge(std::uint64_t l, double extra_per_round_charge) {
    double log_l = l > 1 ? std::ceil(std::log2(double(l))) : 1.0;
    double sort_cost = double(l) * log_l;
    double search_cost = double(l) * log_l;  // sqrt(|B|) = l comparisons of log2 l each
    return sort_cost + search_cost + extra_per_round_charge;
}

ClawResult claw_find(const ClawInstance& inst, const ClawParams& params, CostLedger* ledger) {
    if (!inst.f || !inst.g) throw std::invalid_argument("claw instance needs both evaluators");
    std::uint64_t l = params.l;
    if (l != 0) {
        std::uint64_t sqrt_m = static_cast<std::uint64_t>(
            std::ceil(std::sqrt(double(inst.domain_y))));
        if (l > std::min(inst.domain_x, sqrt_m))
            throw std::invalid_argument("subset size exceeds min(N, ceil(sqrt(M)))");
    }
    auto fx = [&](std::uint64_t x) { return std::vector<std::uint64_t>{inst.f(x)}; };
    auto gy = [&](std::uint64_t y) { return std::vector<std::uint64_t>{inst.g(y)}; };
    return claw_search<std::uint64_t>(inst.domain_x, inst.domain_y, fx, gy, params, ledger);
}

}  // namespace qmitm
