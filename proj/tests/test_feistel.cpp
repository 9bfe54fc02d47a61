#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qmitm/feistel.hpp"

using namespace qmitm;

namespace {

// Independent one-round reference: the newest half feeds the round
// function and the result lands on the oldest half.
Block one_round_ref(Block s, const FunctionTable& fn, Half k, Half mask) {
    return Block{static_cast<Half>(s.right ^ fn[(k ^ s.left) & mask]), s.left};
}

CipherSpec explicit_spec(int n, std::vector<FunctionTable> fns, std::vector<Half> keys) {
    CipherSpec spec;
    spec.n = n;
    spec.r = static_cast<int>(fns.size());
    spec.round_fns = std::move(fns);
    spec.subkeys = std::move(keys);
    validate_cipher(spec);
    return spec;
}

}  // namespace

TEST_CASE("generation parameters and determinism") {
    CipherSpec s = generate_cipher(12, 7, 0);
    CHECK(s.round_fns.size() == 7);
    CHECK(s.subkeys.size() == 7);
    for (const auto& fn : s.round_fns) {
        CHECK(fn.size() == 64);
        for (Half v : fn) CHECK(v < 64);
    }
    for (Half k : s.subkeys) CHECK(k < 64);

    CipherSpec again = generate_cipher(12, 7, 0);
    CHECK(s.round_fns == again.round_fns);
    CHECK(s.subkeys == again.subkeys);

    CipherSpec other = generate_cipher(12, 7, 1);
    CHECK(s.round_fns != other.round_fns);

    CHECK_THROWS_AS(generate_cipher(13, 7, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_cipher(2, 7, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_cipher(34, 7, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_cipher(12, 0, 0), std::invalid_argument);
}

TEST_CASE("one-round evaluation against an independent reimplementation") {
    // n=4, F0 = [1,2,3,0], k0 = 1: (2||3) -> v1 = 3 ^ F0(1^2) = 3 ^ 0 = 3,
    // giving the state (3||2).
    CipherSpec spec = explicit_spec(4, {{1, 2, 3, 0}}, {1});
    Block out = encrypt(spec, Block{2, 3});
    CHECK(out == Block{3, 2});
    CHECK(out == one_round_ref(Block{2, 3}, spec.round_fns[0], 1, spec.half_mask()));
    CHECK(decrypt(spec, out) == Block{2, 3});

    std::mt19937_64 rng(7);
    for (int i = 0; i < 64; ++i) {
        Block p{static_cast<Half>(rng() & 3), static_cast<Half>(rng() & 3)};
        CHECK(encrypt(spec, p) == one_round_ref(p, spec.round_fns[0], 1, spec.half_mask()));
    }
}

TEST_CASE("multi-round evaluation equals iterated reference rounds") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 4 + 2 * static_cast<int>(rng() % 7);
        int r = 1 + static_cast<int>(rng() % 9);
        CipherSpec spec = generate_cipher(n, r, rng());
        Block p{static_cast<Half>(rng()) & spec.half_mask(),
                static_cast<Half>(rng()) & spec.half_mask()};
        Block s = p;
        for (int i = 0; i < r; ++i) s = one_round_ref(s, spec.round_fns[i], spec.subkeys[i],
                                                      spec.half_mask());
        CHECK(encrypt(spec, p) == s);
    }
}

TEST_CASE("zero round functions act as a pure half swap per round") {
    for (int r = 1; r <= 4; ++r) {
        std::vector<FunctionTable> fns(r, FunctionTable(4, 0));
        CipherSpec spec = explicit_spec(4, fns, std::vector<Half>(r, 0));
        for (Half a = 0; a < 4; ++a)
            for (Half b = 0; b < 4; ++b) {
                Block expected = (r % 2) ? Block{b, a} : Block{a, b};
                CHECK(encrypt(spec, Block{a, b}) == expected);
                CHECK(decrypt(spec, encrypt(spec, Block{a, b})) == Block{a, b});
            }
    }
}

TEST_CASE("round-trip identity over the parameter grid") {
    std::mt19937_64 rng(1);
    for (int n = 4; n <= 24; n += 2)
        for (int r = 1; r <= 9; r += 2) {
            CipherSpec spec = generate_cipher(n, r, rng());
            for (int i = 0; i < 200; ++i) {
                Block p{static_cast<Half>(rng()) & spec.half_mask(),
                        static_cast<Half>(rng()) & spec.half_mask()};
                Block c = encrypt(spec, p);
                CHECK(decrypt(spec, c) == p);
                CHECK(encrypt(spec, decrypt(spec, p)) == p);
            }
        }
}

TEST_CASE("trace matches encryption and partial decryption recovers it") {
    std::mt19937_64 rng(5);
    CipherSpec spec = generate_cipher(12, 7, 99);
    PublicCipher pub = spec.public_part();
    for (int i = 0; i < 100; ++i) {
        Block p{static_cast<Half>(rng()) & spec.half_mask(),
                static_cast<Half>(rng()) & spec.half_mask()};
        auto tr = encrypt_trace(spec, p);
        REQUIRE(tr.size() == 9);
        Block c = encrypt(spec, p);
        CHECK(c.left == tr[8]);
        CHECK(c.right == tr[7]);

        // True final subkey returns the state before the last round.
        Block s6 = partial_decrypt(pub, c, {{6, spec.subkeys[6]}});
        CHECK(s6.left == tr[7]);   // v6
        CHECK(s6.right == tr[6]);  // v5

        // Full suffix returns the plaintext.
        std::vector<std::pair<int, Half>> all;
        for (int round = 6; round >= 0; --round) all.emplace_back(round, spec.subkeys[round]);
        CHECK(partial_decrypt(pub, c, all) == p);
    }
}

TEST_CASE("partial decryption edge cases") {
    CipherSpec spec = generate_cipher(12, 7, 3);
    PublicCipher pub = spec.public_part();
    Block c{11, 22};
    CHECK(partial_decrypt(pub, c, {}) == c);

    // A wrong guess still round-trips through the same wrong key.
    Half wrong = spec.subkeys[6] ^ 5;
    Block s = partial_decrypt(pub, c, {{6, wrong}});
    Half mask = spec.half_mask();
    Block again{static_cast<Half>(s.right ^ pub.round_fns[6][(wrong ^ s.left) & mask]), s.left};
    CHECK(again == c);

    CHECK_THROWS_AS(partial_decrypt(pub, c, {{5, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(partial_decrypt(pub, c, {{6, 0}, {4, 0}}), std::invalid_argument);
}

TEST_CASE("oracle counts distinct plaintexts only") {
    CipherSpec spec = generate_cipher(12, 7, 11);
    EncryptionOracle oracle(spec);
    CHECK(oracle.distinct_queries() == 0);
    oracle.query(Block{1, 2});
    oracle.query(Block{1, 2});
    oracle.query(Block{2, 1});
    CHECK(oracle.distinct_queries() == 2);
    CHECK(oracle.total_queries() == 3);

    EncryptionOracle other(spec);
    other.query(Block{2, 1});
    other.query(Block{3, 3});
    oracle.merge(other);
    CHECK(oracle.distinct_queries() == 3);
}
