#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include <nlohmann/json.hpp>

#include "qmitm/io.hpp"

using namespace qmitm;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("qmitm_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("cipher descriptor round-trips bit-exactly") {
    TempDir dir;
    CipherSpec spec = generate_cipher(12, 7, 12345);

    save_cipher(spec, dir.file("seeded.json"));
    CipherSpec back = load_cipher(dir.file("seeded.json"));
    CHECK(back.n == spec.n);
    CHECK(back.r == spec.r);
    CHECK(back.seed == spec.seed);
    CHECK(back.round_fns == spec.round_fns);
    CHECK(back.subkeys == spec.subkeys);

    save_cipher(spec, dir.file("explicit.json"), true);
    CipherSpec back2 = load_cipher(dir.file("explicit.json"));
    CHECK(back2.round_fns == spec.round_fns);
    CHECK(back2.subkeys == spec.subkeys);

    // Same seed, same bytes.
    save_cipher(spec, dir.file("again.json"));
    CHECK(read_text_file(dir.file("seeded.json")) == read_text_file(dir.file("again.json")));

    // Tampered explicit tables are rejected.
    auto j = cipher_to_json(spec, true);
    j["round_fns"][0][0] = 9999;
    CHECK_THROWS(cipher_from_json(j));
}

TEST_CASE("delta table file round-trip") {
    TempDir dir;
    CipherSpec spec = generate_cipher(12, 7, 81);
    auto build = build_delta_table(spec.public_part(), 40, 4, 4, 0,
PrecomputeCharging::Classical, 81);
    save_delta_table(build.table, 7, dir.file("table.bin"));
    int r = 0;
    DeltaTable back = load_delta_table(dir.file("table.bin"), &r);
    CHECK(r == 7);
    CHECK(back.n == 12);
    CHECK(back.delta == 4);
    CHECK(back.x == 40);
    CHECK(back.entry_count == build.table.entry_count);
    for (std::uint64_t k = 0; k < back.key_count(); ++k) {
        REQUIRE(back.entries_by_key[k].size() == build.table.entries_by_key[k].size());
        for (std::size_t i = 0; i < back.entries_by_key[k].size(); ++i) {
            const auto& a = back.entries_by_key[k][i];
            const auto& b = build.table.entries_by_key[k][i];
            CHECK(a.xp == b.xp);
            CHECK(a.y == b.y);
            CHECK(a.t2 == b.t2);
            CHECK(a.t3 == b.t3);
            CHECK(a.t4 == b.t4);
            CHECK(a.seq == b.seq);
        }
    }
}

TEST_CASE("delta table file keeps a nonzero fixed top part") {
    TempDir dir;
    CipherSpec spec = generate_cipher(12, 6, 83);
    auto build = build_delta_table(spec.public_part(), 40, 3, 3, 8,
                                   PrecomputeCharging::Classical, 83);
    save_delta_table(build.table, 6, dir.file("table6.bin"));
    DeltaTable back = load_delta_table(dir.file("table6.bin"));
    CHECK(back.xp_base == 8);
    CHECK(back.xp_free_bits == 3);
    CHECK(back.entry_count == build.table.entry_count);
    for (std::uint64_t k = 0; k < back.key_count(); ++k)
        for (std::size_t i = 0; i < back.entries_by_key[k].size(); ++i)
            CHECK(back.entries_by_key[k][i].seq == build.table.entries_by_key[k][i].seq);
}

TEST_CASE("pair table file round-trip") {
    TempDir dir;
    CipherSpec spec = generate_cipher(12, 7, 82);
    EncryptionOracle oracle(spec);
    std::mt19937_64 rng(82);
    PairTable pt = collect_pairs(oracle, 47, 4, 4, 0, 2, PairFilter::SuffixAdmissible, rng);
    save_pair_table(pt, 12, 7, 4, 82, dir.file("pairs.bin"));
    int n = 0, r = 0, delta = 0;
    std::uint64_t seed = 0;
    PairTable back = load_pair_table(dir.file("pairs.bin"), &n, &r, &delta, &seed);
    CHECK(n == 12);
    CHECK(r == 7);
    CHECK(delta == 4);
    CHECK(seed == 82);
    CHECK(back.x == pt.x);
    REQUIRE(back.pairs.size() == pt.pairs.size());
    for (std::size_t i = 0; i < back.pairs.size(); ++i) {
        CHECK(back.pairs[i].p == pt.pairs[i].p);
        CHECK(back.pairs[i].cp == pt.pairs[i].cp);
    }
    CHECK(back.pc == pt.pc);
    CHECK(back.structure_queries == pt.structure_queries);

    // Deterministic bytes for identical content.
    save_pair_table(pt, 12, 7, 4, 82, dir.file("pairs2.bin"));
    CHECK(read_text_file(dir.file("pairs.bin")) == read_text_file(dir.file("pairs2.bin")));
}

TEST_CASE("attack report serialization is deterministic modulo wall clock") {
    CipherSpec spec = generate_cipher(12, 7, 4);
    AttackParams params;
    params.seed = 4;
    AttackReport a = run_attack_7round(spec, params);
    AttackReport b = run_attack_7round(spec, params);
    ordered_json ja = report_to_json(a);
    ordered_json jb = report_to_json(b);
    ja.erase("wall_ms");
    jb.erase("wall_ms");
    CHECK(ja.dump() == jb.dump());

    // Stable field order: the serialized keys begin with the run identity.
    std::string s = report_to_json(a).dump();
    CHECK(s.find("\"n\"") < s.find("\"seed\""));
    CHECK(s.find("\"seed\"") < s.find("\"success\""));
    CHECK(s.find("\"ledger\"") < s.find("\"wall_ms\""));
}

TEST_CASE("cost comparison table carries both prediction and measurement") {
    CostLedger l = synthetic_ledger(12, 7);
    ordered_json j = cost_comparison_json(12, 7, l);
    CHECK(j["applicable"] == true);
    CHECK(j["time"]["predicted_log2"] == doctest::Approx(8.0));
    CHECK(j["time"]["measured_log2"] == doctest::Approx(8.0));
    CHECK(j["memory"]["predicted_log2"] == doctest::Approx(10.0));
}
