// Complexity claims for the attack family and the exponent-scaling check
// that compares measured ledgers against them across block sizes.

#pragma once

#include <cstdint>
#include <vector>

#include "qmitm/ledger.hpp"

namespace qmitm {

struct ComplexityClaim {
    int rounds = 0;
    // Exponent coefficients as multiples of n.
    double time_coeff = 0.0;    // 2/3 + (r - 7)/4
    double data_coeff = 0.0;    // 2/3
    double memory_coeff = 0.0;  // 5/6
    double qubit_coeff = 0.0;   // 5/6

    double time_exponent(int n) const { return time_coeff * n; }
    double data_exponent(int n) const { return data_coeff * n; }
    double memory_exponent(int n) const { return memory_coeff * n; }
    double qubit_exponent(int n) const { return qubit_coeff * n; }
};

// Claimed costs for the r-round attack (r >= 7): time 2^{2n/3 + (r-7)n/4},
// data 2^{2n/3}, classical memory 2^{5n/6}, qubits 2^{5n/6}.
ComplexityClaim predicted_costs(int r);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double target = 0.0;
    bool pass = false;  // |slope - target| <= 0.15 * target
};

struct ScalingResult {
    ScalingFit time, data, memory, qubits;
    bool all_pass = false;
};

// Least-squares fit of log2(field) against n for each checked ledger field.
// Needs at least two distinct block sizes, all divisible by 12.
ScalingResult scaling_check(const std::vector<std::pair<int, CostLedger>>& measurements, int r);

// Ledger whose fields follow the claimed exponents exactly; feeding a set
// of these through scaling_check must recover the coefficients precisely.
CostLedger synthetic_ledger(int n, int r);

}  // namespace qmitm
