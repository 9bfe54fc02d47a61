// Reduced-scale Feistel target: per-round random function tables F_i and
// independent subkeys k_i on an n-bit block (two n/2-bit halves).
//
// Round i maps the state (v_i, v_{i-1}) to (v_{i+1}, v_i) with
//     v_{i+1} = v_{i-1} ^ F_i(k_i ^ v_i),
// so the half entering the round function always survives into the next
// state and the cipher is invertible for arbitrary (non-bijective) tables.
// A block prints as left||right = (newest, oldest); the plaintext is
// (v_0, v_-1) and the ciphertext after r rounds is (v_r, v_{r-1}).

#pragma once

#include <atomic>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace qmitm {

using Half = std::uint32_t;

struct Block {
    Half left = 0;
    Half right = 0;

    friend bool operator==(const Block& a, const Block& b) {
        return a.left == b.left && a.right == b.right;
    }
    friend bool operator!=(const Block& a, const Block& b) { return !(a == b); }
};

// Packs a block into one word; halves are at most 16 bits (n <= 32).
inline std::uint64_t pack_block(Block b) {
    return (static_cast<std::uint64_t>(b.left) << 32) | b.right;
}
inline Block unpack_block(std::uint64_t v) {
    return Block{static_cast<Half>(v >> 32), static_cast<Half>(v & 0xffffffffu)};
}

using FunctionTable = std::vector<Half>;

// Public data of a cipher instance: everything except the subkeys.
struct PublicCipher {
    int n = 0;  // block size in bits, even
    int r = 0;  // round count
    std::vector<FunctionTable> round_fns;

    int half_bits() const { return n / 2; }
    Half half_mask() const { return static_cast<Half>((1u << (n / 2)) - 1); }
    std::size_t half_space() const { return std::size_t{1} << (n / 2); }
};

struct CipherSpec {
    int n = 0;
    int r = 0;
    std::uint64_t seed = 0;
    std::vector<FunctionTable> round_fns;
    std::vector<Half> subkeys;

    int half_bits() const { return n / 2; }
    Half half_mask() const { return static_cast<Half>((1u << (n / 2)) - 1); }
    std::size_t half_space() const { return std::size_t{1} << (n / 2); }

    PublicCipher public_part() const { return PublicCipher{n, r, round_fns}; }
};

// Deterministic in (n, r, seed); rejects odd n and n outside [4, 32].
CipherSpec generate_cipher(int n, int r, std::uint64_t seed);

// Validates invariants of an explicitly constructed spec (table sizes,
// entry ranges, key ranges); throws std::invalid_argument on violation.
void validate_cipher(const CipherSpec& spec);

Block encrypt(const CipherSpec& spec, Block p);
Block decrypt(const CipherSpec& spec, Block c);

// Full value trace v_{-1}, v_0, ..., v_r; trace[i + 1] == v_i.
std::vector<Half> encrypt_trace(const CipherSpec& spec, Block p);

// Undoes the rounds named in `guesses` (pairs of round index and subkey
// guess) from the ciphertext. The guessed rounds must form a contiguous
// suffix {t+1, ..., r-1}; returns the state (v_{t+1}, v_t). Guessed keys
// may differ from the true ones.
Block partial_decrypt(const PublicCipher& pub, Block c,
                      const std::vector<std::pair<int, Half>>& guesses);

// Chosen-plaintext interface handed to attacks. The total counter
// increments atomically; distinct-plaintext sets from per-worker oracles
// merge by union (associative).
class EncryptionOracle {
public:
    explicit EncryptionOracle(const CipherSpec& spec) : spec_(&spec) {}

    Block query(Block p) {
        total_.fetch_add(1, std::memory_order_relaxed);
        seen_.insert(pack_block(p));
        return encrypt(*spec_, p);
    }

    std::uint64_t total_queries() const { return total_.load(std::memory_order_relaxed); }
    std::uint64_t distinct_queries() const { return seen_.size(); }
    int n() const { return spec_->n; }
    int r() const { return spec_->r; }
    const PublicCipher public_part() const { return spec_->public_part(); }

    void merge(const EncryptionOracle& other) {
        total_.fetch_add(other.total_queries(), std::memory_order_relaxed);
        seen_.insert(other.seen_.begin(), other.seen_.end());
    }

private:
    const CipherSpec* spec_;
    std::atomic<std::uint64_t> total_{0};
    std::unordered_set<std::uint64_t> seen_;
};

}  // namespace qmitm
