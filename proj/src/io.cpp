#include "qmitm/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qmitm {

namespace {

void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("truncated file");
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

std::uint64_t read_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw std::runtime_error("truncated file");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

void expect_magic(std::istream& is, const char* magic) {
    char buf[8];
    is.read(buf, 8);
    if (!is || std::memcmp(buf, magic, 8) != 0)
        throw std::runtime_error("unrecognized file header");
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

ordered_json cipher_to_json(const CipherSpec& spec, bool explicit_tables) {
    ordered_json j;
    j["format"] = "qmitm-cipher";
    j["version"] = 1;
    j["n"] = spec.n;
    j["r"] = spec.r;
    j["seed"] = spec.seed;
    if (explicit_tables) {
        j["round_fns"] = spec.round_fns;
        j["subkeys"] = spec.subkeys;
    }
    return j;
}

CipherSpec cipher_from_json(const ordered_json& j) {
    if (j.value("format", "") != "qmitm-cipher")
        throw std::runtime_error("not a cipher descriptor");
    if (j.value("version", 0) != 1) throw std::runtime_error("unsupported descriptor version");
    const int n = j.at("n").get<int>();
    const int r = j.at("r").get<int>();
    const std::uint64_t seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("round_fns") || j.contains("subkeys")) {
        CipherSpec spec;
        spec.n = n;
        spec.r = r;
        spec.seed = seed;
        spec.round_fns = j.at("round_fns").get<std::vector<FunctionTable>>();
        spec.subkeys = j.at("subkeys").get<std::vector<Half>>();
        validate_cipher(spec);
        return spec;
    }
    return generate_cipher(n, r, seed);
}

void save_cipher(const CipherSpec& spec, const std::string& path, bool explicit_tables) {
    write_text_file(path, cipher_to_json(spec, explicit_tables).dump(2) + "\n");
}

CipherSpec load_cipher(const std::string& path) {
    return cipher_from_json(ordered_json::parse(read_text_file(path)));
}

void save_delta_table(const DeltaTable& table, int r, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os.write("QMTDELT1", 8);
    write_u32(os, static_cast<std::uint32_t>(table.n));
    write_u32(os, static_cast<std::uint32_t>(r));
    write_u32(os, static_cast<std::uint32_t>(table.delta));
    write_u32(os, static_cast<std::uint32_t>(table.dist_start));
    write_u32(os, static_cast<std::uint32_t>(table.xp_free_bits));
    write_u64(os, table.xp_base);
    write_u64(os, table.x);
    write_u64(os, table.seed_meta);
    write_u64(os, table.entry_count);
    for (const auto& bucket : table.entries_by_key)
        for (const DeltaTableEntry& e : bucket) {
            write_u64(os, e.xp);
            write_u64(os, e.y);
            write_u64(os, e.t2);
            write_u64(os, e.t3);
            write_u64(os, e.t4);
            for (Half d : e.seq) write_u64(os, d);
        }
}

DeltaTable load_delta_table(const std::string& path, int* r_out) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    expect_magic(is, "QMTDELT1");
    DeltaTable t;
    t.n = static_cast<int>(read_u32(is));
    int r = static_cast<int>(read_u32(is));
    if (r_out) *r_out = r;
    t.delta = static_cast<int>(read_u32(is));
    t.dist_start = static_cast<int>(read_u32(is));
    t.xp_free_bits = static_cast<int>(read_u32(is));
    t.xp_base = static_cast<Half>(read_u64(is));
    t.x = static_cast<Half>(read_u64(is));
    t.seed_meta = read_u64(is);
    const std::uint64_t count = read_u64(is);
    t.entries_by_key.resize(t.key_count());
    for (std::uint64_t i = 0; i < count; ++i) {
        DeltaTableEntry e;
        e.xp = static_cast<Half>(read_u64(is));
        e.y = static_cast<Half>(read_u64(is));
        e.t2 = static_cast<Half>(read_u64(is));
        e.t3 = static_cast<Half>(read_u64(is));
        e.t4 = static_cast<Half>(read_u64(is));
        e.seq.resize(t.delta);
        for (int d = 0; d < t.delta; ++d) e.seq[d] = static_cast<Half>(read_u64(is));
        t.entries_by_key[t.key_index(e.xp, e.y)].push_back(std::move(e));
        ++t.entry_count;
    }
    return t;
}

void save_pair_table(const PairTable& table, int n, int r, int delta, std::uint64_t seed,
                     const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os.write("QMTPAIR1", 8);
    write_u32(os, static_cast<std::uint32_t>(n));
    write_u32(os, static_cast<std::uint32_t>(r));
    write_u32(os, static_cast<std::uint32_t>(delta));
    write_u32(os, static_cast<std::uint32_t>(table.structures_log2));
    write_u64(os, table.x);
    write_u64(os, seed);
    write_u64(os, table.structure_queries);
    write_u64(os, table.prefetch_queries);
    write_u64(os, table.pairs.size());
    for (const PairRecord& p : table.pairs) {
        write_u64(os, pack_block(p.p));
        write_u64(os, pack_block(p.pp));
        write_u64(os, pack_block(p.c));
        write_u64(os, pack_block(p.cp));
    }
    write_u64(os, table.pc.size());
    // Deterministic order for byte-identical files.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries(table.pc.begin(),
                                                                 table.pc.end());
    std::sort(entries.begin(), entries.end());
    for (const auto& [pt, ct] : entries) {
        write_u64(os, pt);
        write_u64(os, ct);
    }
}

PairTable load_pair_table(const std::string& path, int* n_out, int* r_out, int* delta_out,
                          std::uint64_t* seed_out) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    expect_magic(is, "QMTPAIR1");
    PairTable t;
    int n = static_cast<int>(read_u32(is));
    int r = static_cast<int>(read_u32(is));
    int delta = static_cast<int>(read_u32(is));
    t.structures_log2 = static_cast<int>(read_u32(is));
    t.x = static_cast<Half>(read_u64(is));
    std::uint64_t seed = read_u64(is);
    if (n_out) *n_out = n;
    if (r_out) *r_out = r;
    if (delta_out) *delta_out = delta;
    if (seed_out) *seed_out = seed;
    t.structure_queries = read_u64(is);
    t.prefetch_queries = read_u64(is);
    const std::uint64_t pair_count = read_u64(is);
    t.pairs.reserve(pair_count);
    for (std::uint64_t i = 0; i < pair_count; ++i) {
        PairRecord p;
        p.p = unpack_block(read_u64(is));
        p.pp = unpack_block(read_u64(is));
        p.c = unpack_block(read_u64(is));
        p.cp = unpack_block(read_u64(is));
        t.pairs.push_back(p);
    }
    const std::uint64_t pc_count = read_u64(is);
    t.pc.reserve(pc_count);
    for (std::uint64_t i = 0; i < pc_count; ++i) {
        std::uint64_t pt = read_u64(is);
        std::uint64_t ct = read_u64(is);
        t.pc.emplace(pt, ct);
    }
    return t;
}

ordered_json ledger_to_json(const CostLedger& ledger) {
    ordered_json j;
    j["modeled_quantum_time"] = ledger.modeled_quantum_time;
    j["parallel_width"] = ledger.parallel_width;
    j["qubit_count"] = ledger.qubit_count;
    j["qram_lookups"] = ledger.qram_lookups;
    j["classical_queries"] = ledger.classical_queries;
    j["classical_memory"] = ledger.classical_memory;
    return j;
}

ordered_json report_to_json(const AttackReport& rep) {
    ordered_json j;
    j["n"] = rep.n;
    j["r"] = rep.r;
    j["seed"] = rep.seed;
    j["success"] = rep.success;
    j["recovered_subkeys"] = rep.recovered_subkeys;
    j["claw_found"] = rep.claw_found;
    j["claw_xp"] = rep.claw_xp;
    j["claw_y"] = rep.claw_y;
    j["claw_pair_index"] = rep.claw_pair_index;
    j["claw_rounds"] = rep.claw_rounds;
    j["modeled_claw_iterations"] = rep.modeled_claw_iterations;
    j["candidates_tested"] = rep.candidates_tested;
    j["delta_used"] = rep.delta_used;
    j["x_used"] = rep.x_used;
    j["l_used"] = rep.l_used;
    j["structure_queries"] = rep.structure_queries;
    j["prefetch_queries"] = rep.prefetch_queries;
    j["fallback_queries"] = rep.fallback_queries;
    j["validation_queries"] = rep.validation_queries;
    j["planted_queries"] = rep.planted_queries;
    j["query_accounting_exact"] = rep.query_accounting_exact;
    j["table_entries"] = rep.table_entries;
    j["table_cells"] = rep.table_cells;
    j["all_table_cells"] = rep.all_table_cells;
    j["precompute_equation_work"] = rep.precompute_equation_work;
    j["outer_keys_tested"] = rep.outer_keys_tested;
    j["outer_false_positives"] = rep.outer_false_positives;
    j["ledger"] = ledger_to_json(rep.ledger);
    j["cost_comparison"] = cost_comparison_json(rep.n, rep.r, rep.ledger);
    j["note"] = rep.note;
    j["wall_ms"] = rep.wall_ms;  // excluded from the determinism contract
    return j;
}

ordered_json cost_comparison_json(int n, int r, const CostLedger& measured) {
    ordered_json j;
    if (r < 7) {
        j["applicable"] = false;
        return j;
    }
    ComplexityClaim claim = predicted_costs(r);
    auto row = [&](const char* name, double predicted_exp, double value) {
        ordered_json e;
        e["predicted_log2"] = predicted_exp;
        e["measured_log2"] = value > 0 ? std::log2(value) : 0.0;
        j[name] = e;
    };
    j["applicable"] = true;
    row("time", claim.time_exponent(n), measured.modeled_quantum_time);
    row("data", claim.data_exponent(n), double(measured.classical_queries));
    row("memory", claim.memory_exponent(n), double(measured.classical_memory));
    row("qubits", claim.qubit_exponent(n), double(measured.qubit_count));
    return j;
}

}  // namespace qmitm
