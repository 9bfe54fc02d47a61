#include "qmitm/diffeq.hpp"

#include <stdexcept>

#include "qmitm/quantum.hpp"

namespace qmitm {

std::vector<Half> solve_difference_equation(const FunctionTable& F, Half a, Half b,
                                            CostLedger* ledger) {
    const std::size_t m = F.size();
    if (a >= m || b >= m) throw std::invalid_argument("difference out of range");
    std::vector<Half> out;
    for (std::size_t t = 0; t < m; ++t)
        if ((F[t] ^ F[t ^ a]) == b) out.push_back(static_cast<Half>(t));
    if (ledger)
        ledger->modeled_quantum_time += double(grover_iterations(m, out.size()));
    return out;
}

std::vector<std::uint64_t> difference_census(const FunctionTable& F, Half a) {
    if (a == 0) throw std::invalid_argument("census requires a nonzero difference");
    if (a >= F.size()) throw std::invalid_argument("difference out of range");
    std::vector<std::uint64_t> hist(F.size(), 0);
    for (std::size_t t = 0; t < F.size(); ++t) ++hist[F[t] ^ F[t ^ a]];
    return hist;
}

std::vector<Characteristic> enumerate_characteristics(const PublicCipher& pub, Half x, Half xp,
                                                      int dist_start, CostLedger* ledger) {
    if (x == xp) throw std::invalid_argument("input and output differences must differ");
    if (dist_start < 0 || dist_start + 5 > pub.r)
        throw std::invalid_argument("distinguisher rounds outside the cipher");
    const FunctionTable& f2 = pub.round_fns[dist_start + 1];
    const FunctionTable& f3 = pub.round_fns[dist_start + 2];
    const FunctionTable& f4 = pub.round_fns[dist_start + 3];
    const Half xpp = x ^ xp;

    std::vector<Characteristic> out;
    const std::size_t m = pub.half_space();
    for (std::size_t y = 0; y < m; ++y) {
        auto s2 = solve_difference_equation(f2, x, static_cast<Half>(y), ledger);
        if (s2.empty()) continue;
        auto s3 = solve_difference_equation(f3, static_cast<Half>(y), xpp, ledger);
        if (s3.empty()) continue;
        auto s4 = solve_difference_equation(f4, xp, static_cast<Half>(y), ledger);
        for (Half t2 : s2)
            for (Half t3 : s3)
                for (Half t4 : s4)
                    out.push_back(Characteristic{x, xp, static_cast<Half>(y), t2, t3, t4});
    }
    return out;
}

DeltaSequence delta_sequence(const PublicCipher& pub, const Characteristic& ch, int delta,
                             int dist_start) {
    if (delta < 1 || static_cast<std::size_t>(delta) >= pub.half_space())
        throw std::invalid_argument("delta outside [1, 2^{n/2} - 1]");
    if (dist_start < 0 || dist_start + 5 > pub.r)
        throw std::invalid_argument("distinguisher rounds outside the cipher");
    const FunctionTable& f2 = pub.round_fns[dist_start + 1];
    const FunctionTable& f3 = pub.round_fns[dist_start + 2];
    const FunctionTable& f4 = pub.round_fns[dist_start + 3];
    const Half mask = pub.half_mask();

    DeltaSequence seq(delta);
    for (int j = 1; j <= delta; ++j) {
        Half d2 = f2[ch.t2] ^ f2[(ch.t2 ^ j) & mask];
        Half d3 = f3[ch.t3] ^ f3[(ch.t3 ^ d2) & mask];
        seq[j - 1] = d2 ^ f4[ch.t4] ^ f4[(ch.t4 ^ d3 ^ j) & mask];
    }
    return seq;
}

std::vector<std::uint8_t> pack_delta_sequence(const DeltaSequence& seq, int half_bits) {
    std::vector<std::uint8_t> out((seq.size() * half_bits + 7) / 8, 0);
    std::size_t bit = 0;
    for (Half v : seq) {
        for (int i = half_bits - 1; i >= 0; --i, ++bit)
            if ((v >> i) & 1u) out[bit / 8] |= static_cast<std::uint8_t>(0x80u >> (bit % 8));
    }
    return out;
}

}  // namespace qmitm
