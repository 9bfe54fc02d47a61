// Command-line workbench: generate reduced-scale ciphers, run the three
// key-recovery attacks over seed grids, validate the quantum emulation
// layer, and check ledger scaling against the claimed exponents.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qmitm/attack.hpp"
#include "qmitm/cost_model.hpp"
#include "qmitm/io.hpp"
#include "qmitm/quantum.hpp"

using namespace qmitm;

namespace {

std::string default_out(const std::string& filename) {
    const char* dir = std::getenv("QMITM_OUT");
    if (dir && *dir) return (std::filesystem::path(dir) / filename).string();
    return filename;
}

struct GenSpec {
    int n = 12, r = 7;
    std::uint64_t seed = 0;
    bool set = false;
};

void add_gen_option(CLI::App* app, GenSpec& gen) {
    app->add_option_function<std::string>(
           "--gen",
           [&gen](const std::string& s) {
               GenSpec g;
               if (std::sscanf(s.c_str(), "%d,%d,%llu", &g.n, &g.r,
                               reinterpret_cast<unsigned long long*>(&g.seed)) != 3)
                   throw CLI::ValidationError("--gen expects n,r,seed");
               g.set = true;
               gen = g;
           },
           "Generate the target cipher as n,r,seed");
}

struct SeedRange {
    std::uint64_t lo = 1, hi = 1;
};

void add_seed_option(CLI::App* app, SeedRange& range) {
    app->add_option_function<std::string>(
           "--seeds",
           [&range](const std::string& s) {
               unsigned long long a = 0, b = 0;
               if (std::sscanf(s.c_str(), "%llu..%llu", &a, &b) == 2) {
                   range = {a, b};
               } else if (std::sscanf(s.c_str(), "%llu", &a) == 1) {
                   range = {a, a};
               } else {
                   throw CLI::ValidationError("--seeds expects a..b or a single seed");
               }
               if (range.hi < range.lo) throw CLI::ValidationError("empty seed range");
           },
           "Seed grid a..b (default 1..1)");
}

struct AttackCli {
    GenSpec gen;
    std::string cipher_path;
    SeedRange seeds;
    int delta = 0;
    std::string claw_mode = "faithful";
    std::uint64_t l = 0, cap = 0;
    int min_success = -1;
    bool plant = false;
    std::string out;
    std::string tables_out;
};

void add_attack_options(CLI::App* cmd, AttackCli& cli) {
    add_gen_option(cmd, cli.gen);
    cmd->add_option("--cipher", cli.cipher_path, "Cipher descriptor file");
    add_seed_option(cmd, cli.seeds);
    cmd->add_option("--delta", cli.delta, "Delta-set size override (0 = auto)");
    cmd->add_option("--claw-mode", cli.claw_mode, "faithful|oracle")
        ->check(CLI::IsMember({"faithful", "oracle"}));
    cmd->add_option("--l", cli.l, "Claw subset size override");
    cmd->add_option("--cap", cli.cap, "Claw attempt cap override");
    cmd->add_option("--min-success", cli.min_success,
                    "Successes required for a zero exit (default depends on the attack)");
    cmd->add_flag("--plant", cli.plant, "Inject a constructed right pair (diagnostic)");
    cmd->add_option("--out", cli.out, "Report path (default under $QMITM_OUT)");
    cmd->add_option("--tables-out", cli.tables_out,
                    "Directory for the binary table dumps of the first seed");
}

int run_attack_command(const AttackCli& cli, int rounds_kind) {
    const char* names[] = {"attack6", "attack7", "attackr"};
    std::string name = names[rounds_kind];
    ordered_json runs = ordered_json::array();
    int successes = 0;
    std::uint64_t total = 0;

    for (std::uint64_t seed = cli.seeds.lo; seed <= cli.seeds.hi; ++seed) {
        CipherSpec spec;
        if (!cli.cipher_path.empty()) {
            spec = load_cipher(cli.cipher_path);
        } else if (cli.gen.set) {
            std::uint64_t cseed = (cli.seeds.lo == cli.seeds.hi) ? cli.gen.seed : seed;
            spec = generate_cipher(cli.gen.n, cli.gen.r, cseed);
        } else {
            std::fprintf(stderr, "error: need --cipher or --gen\n");
            return 2;
        }
        AttackParams params;
        params.seed = seed;
        params.delta = cli.delta;
        params.claw_mode = cli.claw_mode == "oracle" ? ClawMode::Oracle : ClawMode::Faithful;
        params.l = cli.l;
        params.iteration_cap = cli.cap;
        params.plant_right_pair = cli.plant;

        AttackReport rep;
        switch (rounds_kind) {
            case 0: rep = run_attack_6round(spec, params); break;
            case 1: rep = run_attack_7round(spec, params); break;
            default: rep = run_attack_rround(spec, params); break;
        }
        if (!cli.tables_out.empty() && seed == cli.seeds.lo && rounds_kind == 1) {
            std::filesystem::create_directories(cli.tables_out);
            PublicCipher pub = spec.public_part();
            auto build = build_delta_table(pub, rep.x_used, rep.delta_used, spec.n / 3, 0,
PrecomputeCharging::QuantumParallel, spec.seed);
            save_delta_table(build.table, spec.r,
                             (std::filesystem::path(cli.tables_out) / "delta_table.bin").string());
            EncryptionOracle oracle(spec);
            std::mt19937_64 rng(seed);
            PairTable pt = collect_pairs(oracle, rep.x_used, rep.delta_used, spec.n / 3, 0,
                                         spec.n / 6, PairFilter::SuffixAdmissible, rng);
            save_pair_table(pt, spec.n, spec.r, rep.delta_used, seed,
                            (std::filesystem::path(cli.tables_out) / "pair_table.bin").string());
        }
        runs.push_back(report_to_json(rep));
        successes += rep.success ? 1 : 0;
        ++total;
        std::printf("seed %llu: %s\n", static_cast<unsigned long long>(seed),
                    rep.success ? "success" : "failure");
        std::fflush(stdout);
    }

    int need = cli.min_success;
    if (need < 0)
        need = rounds_kind == 0 ? static_cast<int>((total + 1) / 2)
                                : static_cast<int>((total * 2 + 4) / 5);

    ordered_json report;
    report["command"] = name;
    report["seeds"] = {cli.seeds.lo, cli.seeds.hi};
    report["successes"] = successes;
    report["runs_total"] = total;
    report["min_success"] = need;
    report["runs"] = runs;
    std::string path = cli.out.empty() ? default_out(name + "-report.json") : cli.out;
    write_text_file(path, report.dump(2) + "\n");
    std::printf("%s: %d/%llu successes (threshold %d) -> %s\n", name.c_str(), successes,
                static_cast<unsigned long long>(total), need, path.c_str());
    return successes >= need ? 0 : 1;
}

int run_validate_quantum(const std::string& out_path) {
    ordered_json report;
    // Statevector against the closed form.
    double worst = 0;
    for (std::uint64_t p = 1; p <= 10; ++p) {
        std::uint64_t n = std::uint64_t{1} << p;
        for (std::uint64_t m = 1; m <= std::min<std::uint64_t>(8, n); ++m) {
            std::vector<std::uint64_t> marked;
            for (std::uint64_t i = 0; i < m; ++i) marked.push_back(i * (n / m));
            double theta = std::asin(std::sqrt(double(m) / double(n)));
            for (std::uint64_t k = 0; k <= 200; ++k) {
                double expect = std::sin((2 * k + 1) * theta);
                expect *= expect;
                worst = std::max(worst,
                                 std::fabs(grover_success_probability(n, marked, k) - expect));
            }
        }
    }
    report["statevector_max_deviation"] = worst;
    bool state_ok = worst < 1e-9;

    // Planted claw instances.
    std::mt19937_64 rng(1);
    int found = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::uint64_t n = 16 + rng() % 1009, m = 16 + rng() % 1009;
        std::vector<std::uint64_t> fv(n), gv(m);
        for (auto& v : fv) v = rng() << 1;
        for (auto& v : gv) v = (rng() << 1) | 1;
        gv[rng() % m] = fv[rng() % n];
        ClawInstance inst{n, m, [&](std::uint64_t x) { return fv[x]; },
                          [&](std::uint64_t y) { return gv[y]; }};
        ClawParams params;
        params.seed = rng();
        auto res = claw_find(inst, params);
        if (res.found && fv[res.x] == gv[res.y]) ++found;
    }
    report["planted_claws_found"] = found;
    bool claw_ok = found == 100;

    // Ledger merge properties.
    bool merge_ok = true;
    auto randled = [&rng]() {
        CostLedger l;
        l.modeled_quantum_time = double(rng() % 100000);
        l.parallel_width = rng() % 100000;
        l.qubit_count = rng() % 100000;
        l.qram_lookups = rng() % 100000;
        l.classical_queries = rng() % 100000;
        l.classical_memory = rng() % 100000;
        return l;
    };
    for (int i = 0; i < 1000 && merge_ok; ++i) {
        CostLedger a = randled(), b = randled(), c = randled();
        merge_ok = CostLedger::merged(a, b) == CostLedger::merged(b, a) &&
                   CostLedger::merged(CostLedger::merged(a, b), c) ==
                       CostLedger::merged(a, CostLedger::merged(b, c));
    }
    report["ledger_merge_properties"] = merge_ok;

    bool pass = state_ok && claw_ok && merge_ok;
    report["pass"] = pass;
    std::string path = out_path.empty() ? default_out("validate-quantum-report.json") : out_path;
    write_text_file(path, report.dump(2) + "\n");
    std::printf("validate-quantum: max deviation %.3g, %d/100 claws, merge %s -> %s\n", worst,
                found, merge_ok ? "ok" : "broken", path.c_str());
    return pass ? 0 : 1;
}

int run_scaling(const std::vector<int>& ns, std::uint64_t seed, const std::string& out_path) {
    ordered_json report;
    std::vector<std::pair<int, CostLedger>> measured;
    ordered_json per_n = ordered_json::array();
    for (int n : ns) {
        CipherSpec spec = generate_cipher(n, 7, seed);
        AttackParams params;
        params.seed = seed;
        AttackReport rep = run_attack_7round(spec, params);
        measured.emplace_back(n, rep.ledger);
        ordered_json e;
        e["n"] = n;
        e["ledger"] = ledger_to_json(rep.ledger);
        e["comparison"] = cost_comparison_json(n, 7, rep.ledger);
        per_n.push_back(e);
        std::printf("n=%d done\n", n);
        std::fflush(stdout);
    }
    ScalingResult res = scaling_check(measured, 7);

    // Self-test on ledgers generated exactly from the claims.
    std::vector<std::pair<int, CostLedger>> synth;
    for (int n : {12, 18, 24}) synth.emplace_back(n, synthetic_ledger(n, 7));
    ScalingResult sres = scaling_check(synth, 7);
    ComplexityClaim claim = predicted_costs(7);
    bool synth_ok = std::fabs(sres.time.slope - claim.time_coeff) <= 1e-12 &&
                    std::fabs(sres.data.slope - claim.data_coeff) <= 1e-12 &&
                    std::fabs(sres.memory.slope - claim.memory_coeff) <= 1e-12 &&
                    std::fabs(sres.qubits.slope - claim.qubit_coeff) <= 1e-12;

    auto fit_json = [](const ScalingFit& f) {
        ordered_json j;
        j["slope"] = f.slope;
        j["intercept"] = f.intercept;
        j["target"] = f.target;
        j["pass"] = f.pass;
        return j;
    };
    report["per_n"] = per_n;
    report["fit_time"] = fit_json(res.time);
    report["fit_data"] = fit_json(res.data);
    report["fit_memory"] = fit_json(res.memory);
    report["fit_qubits"] = fit_json(res.qubits);
    report["synthetic_exact"] = synth_ok;
    bool pass = res.all_pass && synth_ok;
    report["pass"] = pass;
    std::string path = out_path.empty() ? default_out("scaling-report.json") : out_path;
    write_text_file(path, report.dump(2) + "\n");
    std::printf("scaling: time %.3f data %.3f memory %.3f qubits %.3f synthetic=%s -> %s\n",
                res.time.slope, res.data.slope, res.memory.slope, res.qubits.slope,
                synth_ok ? "exact" : "BROKEN", path.c_str());
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduced-scale Feistel meet-in-the-middle workbench"};
    app.require_subcommand(1);

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "Generate and save a cipher descriptor");
    GenSpec gen_spec;
    int gen_n = 12, gen_r = 7;
    std::uint64_t gen_seed = 0;
    bool gen_explicit = false;
    std::string gen_out;
    add_gen_option(gen_cmd, gen_spec);
    gen_cmd->add_option("-n", gen_n, "Block size in bits (even)");
    gen_cmd->add_option("-r", gen_r, "Round count");
    gen_cmd->add_option("--seed", gen_seed, "Generation seed");
    gen_cmd->add_flag("--explicit", gen_explicit, "Embed the tables instead of the seed only");
    gen_cmd->add_option("--out", gen_out, "Output path");

    // attacks
    AttackCli a6, a7, ar;
    auto* c6 = app.add_subcommand("attack6", "Classical six-round key recovery");
    add_attack_options(c6, a6);
    auto* c7 = app.add_subcommand("attack7", "Quantum-emulated seven-round key recovery");
    add_attack_options(c7, a7);
    auto* cr = app.add_subcommand("attackr", "Extension to eight or more rounds");
    add_attack_options(cr, ar);

    // validate-quantum
    auto* vq = app.add_subcommand("validate-quantum", "Check the emulation layer");
    std::string vq_out;
    vq->add_option("--out", vq_out, "Report path");

    // scaling
    auto* sc = app.add_subcommand("scaling", "Exponent fits across block sizes");
    std::string sc_ns = "12,18";
    std::uint64_t sc_seed = 1;
    std::string sc_out;
    bool sc_n24 = false;
    sc->add_option("--n-list", sc_ns, "Comma-separated block sizes (multiples of 12)");
    sc->add_flag("--with-n24", sc_n24, "Append n=24 (slow)");
    sc->add_option("--seed", sc_seed, "Seed for the measured runs");
    sc->add_option("--out", sc_out, "Report path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) {
            int n = gen_spec.set ? gen_spec.n : gen_n;
            int r = gen_spec.set ? gen_spec.r : gen_r;
            std::uint64_t seed = gen_spec.set ? gen_spec.seed : gen_seed;
            CipherSpec spec = generate_cipher(n, r, seed);
            std::string path = gen_out.empty()
                                   ? default_out("cipher-" + std::to_string(n) + "-" +
                                                 std::to_string(r) + "-" +
                                                 std::to_string(seed) + ".json")
                                   : gen_out;
            save_cipher(spec, path, gen_explicit);
            std::printf("wrote %s\n", path.c_str());
            return 0;
        }
        if (c6->parsed()) return run_attack_command(a6, 0);
        if (c7->parsed()) return run_attack_command(a7, 1);
        if (cr->parsed()) return run_attack_command(ar, 2);
        if (vq->parsed()) return run_validate_quantum(vq_out);
        if (sc->parsed()) {
            std::vector<int> ns;
            std::string item;
            for (char ch : sc_ns + ",") {
                if (ch == ',') {
                    if (!item.empty()) ns.push_back(std::stoi(item));
                    item.clear();
                } else {
                    item.push_back(ch);
                }
            }
            if (sc_n24) ns.push_back(24);
            return run_scaling(ns, sc_seed, sc_out);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
