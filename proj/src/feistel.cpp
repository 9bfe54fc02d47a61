#include "qmitm/feistel.hpp"

namespace qmitm {

CipherSpec generate_cipher(int n, int r, std::uint64_t seed) {
    if (n < 4 || n > 32 || n % 2 != 0)
        throw std::invalid_argument("block size must be even and in [4, 32], got " +
                                    std::to_string(n));
    if (r < 1)
        throw std::invalid_argument("round count must be >= 1, got " + std::to_string(r));

    CipherSpec spec;
    spec.n = n;
    spec.r = r;
    spec.seed = seed;

    std::mt19937_64 rng(seed);
    const Half mask = spec.half_mask();
    const std::size_t m = spec.half_space();

    spec.round_fns.resize(r);
    for (int i = 0; i < r; ++i) {
        spec.round_fns[i].resize(m);
        for (std::size_t t = 0; t < m; ++t)
            spec.round_fns[i][t] = static_cast<Half>(rng()) & mask;
    }
    spec.subkeys.resize(r);
    for (int i = 0; i < r; ++i) spec.subkeys[i] = static_cast<Half>(rng()) & mask;
    return spec;
}

void validate_cipher(const CipherSpec& spec) {
    if (spec.n < 4 || spec.n > 32 || spec.n % 2 != 0)
        throw std::invalid_argument("invalid block size");
    if (spec.r < 1) throw std::invalid_argument("invalid round count");
    if (spec.round_fns.size() != static_cast<std::size_t>(spec.r) ||
        spec.subkeys.size() != static_cast<std::size_t>(spec.r))
        throw std::invalid_argument("table/subkey count must equal the round count");
    const std::size_t m = spec.half_space();
    const Half mask = spec.half_mask();
    for (const auto& fn : spec.round_fns) {
        if (fn.size() != m) throw std::invalid_argument("function table has wrong size");
        for (Half v : fn)
            if (v > mask) throw std::invalid_argument("function table entry out of range");
    }
    for (Half k : spec.subkeys)
        if (k > mask) throw std::invalid_argument("subkey out of range");
}

static void check_block(const CipherSpec& spec, Block b) {
    if (b.left > spec.half_mask() || b.right > spec.half_mask())
        throw std::invalid_argument("block half out of range for block size");
}

Block encrypt(const CipherSpec& spec, Block p) {
    check_block(spec, p);
    Half cur = p.left;    // v_i
    Half prev = p.right;  // v_{i-1}
    for (int i = 0; i < spec.r; ++i) {
        Half next = prev ^ spec.round_fns[i][(spec.subkeys[i] ^ cur) & spec.half_mask()];
        prev = cur;
        cur = next;
    }
    return Block{cur, prev};
}

std::vector<Half> encrypt_trace(const CipherSpec& spec, Block p) {
    check_block(spec, p);
    std::vector<Half> trace;
    trace.reserve(spec.r + 2);
    trace.push_back(p.right);  // v_{-1}
    trace.push_back(p.left);   // v_0
    Half cur = p.left, prev = p.right;
    for (int i = 0; i < spec.r; ++i) {
        Half next = prev ^ spec.round_fns[i][(spec.subkeys[i] ^ cur) & spec.half_mask()];
        prev = cur;
        cur = next;
        trace.push_back(cur);
    }
    return trace;
}

Block decrypt(const CipherSpec& spec, Block c) {
    check_block(spec, c);
    Half cur = c.left;    // v_r
    Half prev = c.right;  // v_{r-1}
    for (int i = spec.r - 1; i >= 0; --i) {
        // Undo v_{i+1} = v_{i-1} ^ F_i(k_i ^ v_i): the round function input
        // half v_i is available as prev, so no table inversion is needed.
        Half older = cur ^ spec.round_fns[i][(spec.subkeys[i] ^ prev) & spec.half_mask()];
        cur = prev;
        prev = older;
    }
    return Block{cur, prev};
}

Block partial_decrypt(const PublicCipher& pub, Block c,
                      const std::vector<std::pair<int, Half>>& guesses) {
    if (c.left > pub.half_mask() || c.right > pub.half_mask())
        throw std::invalid_argument("block half out of range");
    if (guesses.empty()) return c;

    // The guessed rounds must be the contiguous suffix r-1, r-2, ...
    int expect = pub.r - 1;
    for (const auto& [round, key] : guesses) {
        if (round != expect)
            throw std::invalid_argument("guessed subkeys must cover a contiguous round suffix");
        if (key > pub.half_mask()) throw std::invalid_argument("guessed subkey out of range");
        --expect;
    }

    Half cur = c.left, prev = c.right;
    for (const auto& [round, key] : guesses) {
        Half older = cur ^ pub.round_fns[round][(key ^ prev) & pub.half_mask()];
        cur = prev;
        prev = older;
    }
    return Block{cur, prev};
}

}  // namespace qmitm
