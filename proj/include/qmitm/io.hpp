// File interfaces: the versioned cipher descriptor (JSON, bit-exact
// reload), versioned binary persistence for the precomputed table and the
// collected pairs (fixed-width little-endian cells), and the structured
// attack report (stable field order so runs diff cleanly).

#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "qmitm/attack.hpp"
#include "qmitm/cost_model.hpp"
#include "qmitm/feistel.hpp"

namespace qmitm {

using ordered_json = nlohmann::ordered_json;

// Cipher descriptor. Seeded form regenerates tables from (n, r, seed);
// explicit form embeds round_fns and subkeys verbatim.
ordered_json cipher_to_json(const CipherSpec& spec, bool explicit_tables);
CipherSpec cipher_from_json(const ordered_json& j);
void save_cipher(const CipherSpec& spec, const std::string& path, bool explicit_tables = false);
CipherSpec load_cipher(const std::string& path);

void save_delta_table(const DeltaTable& table, int r, const std::string& path);
DeltaTable load_delta_table(const std::string& path, int* r_out = nullptr);

void save_pair_table(const PairTable& table, int n, int r, int delta, std::uint64_t seed,
                     const std::string& path);
PairTable load_pair_table(const std::string& path, int* n_out = nullptr, int* r_out = nullptr,
                          int* delta_out = nullptr, std::uint64_t* seed_out = nullptr);

ordered_json ledger_to_json(const CostLedger& ledger);
ordered_json report_to_json(const AttackReport& rep);

// Per-field predicted-vs-measured comparison table for one run.
ordered_json cost_comparison_json(int n, int r, const CostLedger& measured);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qmitm
