// Difference-equation solver and the five-round distinguisher machinery:
// enumerating characteristics for a given input/output difference pair and
// computing the delta sequence a characteristic induces at the
// distinguisher's output.

#pragma once

#include <cstdint>
#include <vector>

#include "qmitm/feistel.hpp"
#include "qmitm/ledger.hpp"

namespace qmitm {

// All t with F(t) ^ F(t ^ a) == b, ascending. Emulates one Grover search
// over the input space and charges ceil((pi/4) sqrt(|F| / max(1, #sol)))
// to the ledger. An empty result is a valid outcome.
std::vector<Half> solve_difference_equation(const FunctionTable& F, Half a, Half b,
                                            CostLedger* ledger = nullptr);

// Histogram over b of the solution count of F(t) ^ F(t ^ a) = b. Requires
// a != 0; the counts are even (t and t^a pair up) and sum to |F| exactly.
std::vector<std::uint64_t> difference_census(const FunctionTable& F, Half a);

// One solved five-round characteristic for input difference (0 || x) and
// output difference (xp || 0): y is the second-round output difference and
// t2/t3/t4 are the state values entering the middle three round functions.
struct Characteristic {
    Half x = 0;
    Half xp = 0;
    Half y = 0;
    Half t2 = 0, t3 = 0, t4 = 0;

    Half xpp() const { return x ^ xp; }
};

// Solves, for every y, the three middle-round difference equations
//   F_{s+1}(t2) ^ F_{s+1}(t2 ^ x)  = y
//   F_{s+2}(t3) ^ F_{s+2}(t3 ^ y)  = x ^ xp
//   F_{s+3}(t4) ^ F_{s+3}(t4 ^ xp) = y
// where s is the first distinguisher round, and emits one characteristic
// per combination of solutions. Requires x != xp.
std::vector<Characteristic> enumerate_characteristics(const PublicCipher& pub, Half x, Half xp,
                                                      int dist_start = 1,
                                                      CostLedger* ledger = nullptr);

using DeltaSequence = std::vector<Half>;

// Difference at the distinguisher output when the base state's second half
// is offset by j = 1..delta, computed purely from the characteristic's
// (t2, t3, t4) and the public tables:
//   d2 = F_{s+1}(t2) ^ F_{s+1}(t2 ^ j)
//   d3 = F_{s+2}(t3) ^ F_{s+2}(t3 ^ d2)
//   delta_j = d2 ^ F_{s+3}(t4) ^ F_{s+3}(t4 ^ d3 ^ j)
DeltaSequence delta_sequence(const PublicCipher& pub, const Characteristic& ch, int delta,
                             int dist_start = 1);

// Canonical fixed-width bit concatenation of a sequence (half_bits bits per
// element, most significant bit first). Returns the packed bytes; the bit
// length is seq.size() * half_bits.
std::vector<std::uint8_t> pack_delta_sequence(const DeltaSequence& seq, int half_bits);

}  // namespace qmitm
