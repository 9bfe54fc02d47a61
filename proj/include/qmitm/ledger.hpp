// Modeled resource ledger for emulated quantum subroutines. Time is in
// units of one round-function (oracle) evaluation; sequential stages add,
// capacity-like fields take the maximum.

#pragma once

#include <cstdint>

namespace qmitm {

struct CostLedger {
    double modeled_quantum_time = 0.0;  // oracle-evaluation units
    std::uint64_t parallel_width = 0;   // max simultaneous processors assumed
    std::uint64_t qubit_count = 0;      // peak logical qubits assumed
    std::uint64_t qram_lookups = 0;
    std::uint64_t classical_queries = 0;  // distinct plaintexts sent to the oracle
    std::uint64_t classical_memory = 0;   // peak table cells

    void merge(const CostLedger& o) {
        modeled_quantum_time += o.modeled_quantum_time;
        qram_lookups += o.qram_lookups;
        classical_queries += o.classical_queries;
        if (o.parallel_width > parallel_width) parallel_width = o.parallel_width;
        if (o.qubit_count > qubit_count) qubit_count = o.qubit_count;
        if (o.classical_memory > classical_memory) classical_memory = o.classical_memory;
    }

    static CostLedger merged(CostLedger a, const CostLedger& b) {
        a.merge(b);
        return a;
    }

    friend bool operator==(const CostLedger& a, const CostLedger& b) {
        return a.modeled_quantum_time == b.modeled_quantum_time &&
               a.parallel_width == b.parallel_width && a.qubit_count == b.qubit_count &&
               a.qram_lookups == b.qram_lookups && a.classical_queries == b.classical_queries &&
               a.classical_memory == b.classical_memory;
    }
};

}  // namespace qmitm
