#include "qmitm/cost_model.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace qmitm {

ComplexityClaim predicted_costs(int r) {
    if (r < 7) throw std::invalid_argument("the attack family starts at seven rounds");
    ComplexityClaim c;
    c.rounds = r;
    c.time_coeff = 2.0 / 3.0 + (r - 7) / 4.0;
    c.data_coeff = 2.0 / 3.0;
    c.memory_coeff = 5.0 / 6.0;
    c.qubit_coeff = 5.0 / 6.0;
    return c;
}

namespace {

ScalingFit fit_field(const std::vector<std::pair<int, double>>& points, double target) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = double(points.size());
    for (const auto& [n, v] : points) {
        double x = double(n);
        double y = std::log2(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    ScalingFit f;
    f.target = target;
    f.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / k;
    f.pass = std::fabs(f.slope - target) <= 0.15 * target;
    return f;
}

}  // namespace

ScalingResult scaling_check(const std::vector<std::pair<int, CostLedger>>& measurements, int r) {
    std::unordered_set<int> ns;
    for (const auto& [n, ledger] : measurements) {
        if (n % 6 != 0) throw std::invalid_argument("scaling points need n divisible by 6");
        ns.insert(n);
    }
    if (ns.size() < 2)
        throw std::invalid_argument("scaling check needs at least two distinct block sizes");

    ComplexityClaim claim = predicted_costs(r);
    std::vector<std::pair<int, double>> time_pts, data_pts, mem_pts, qubit_pts;
    for (const auto& [n, ledger] : measurements) {
        time_pts.emplace_back(n, ledger.modeled_quantum_time);
        data_pts.emplace_back(n, double(ledger.classical_queries));
        mem_pts.emplace_back(n, double(ledger.classical_memory));
        qubit_pts.emplace_back(n, double(ledger.qubit_count));
    }
    ScalingResult res;
    res.time = fit_field(time_pts, claim.time_coeff);
    res.data = fit_field(data_pts, claim.data_coeff);
    res.memory = fit_field(mem_pts, claim.memory_coeff);
    res.qubits = fit_field(qubit_pts, claim.qubit_coeff);
    res.all_pass = res.time.pass && res.data.pass && res.memory.pass && res.qubits.pass;
    return res;
}

CostLedger synthetic_ledger(int n, int r) {
    ComplexityClaim claim = predicted_costs(r);
    CostLedger l;
    l.modeled_quantum_time = std::exp2(claim.time_exponent(n));
    l.classical_queries = static_cast<std::uint64_t>(std::exp2(claim.data_exponent(n)));
    l.classical_memory = static_cast<std::uint64_t>(std::exp2(claim.memory_exponent(n)));
    l.qubit_count = static_cast<std::uint64_t>(std::exp2(claim.qubit_exponent(n)));
    l.parallel_width = l.qubit_count;
    return l;
}

}  // namespace qmitm
