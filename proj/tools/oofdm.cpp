// Command-line front end: sweeps, tables, and a quick self check.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oofdm/oofdm.hpp"

using oofdm::ExperimentConfig;
using oofdm::Scheme;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

/// Collects CLI inputs; applied to the config in a fixed order so the most
/// specific flag always wins: file, then --set pairs, then direct flags.
struct CliOverrides {
    std::string config_file;
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_dir;
    std::int64_t trials = 0;
    bool trials_given = false;
};

ExperimentConfig build_config(const CliOverrides& cli) {
    ExperimentConfig cfg;
    if (!cli.config_file.empty()) oofdm::load_config_file(cfg, cli.config_file);
    for (const auto& pair : cli.sets) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos)
            throw oofdm::ConfigError("--set expects key=value, got '" + pair + "'");
        oofdm::apply_config_entry(cfg, oofdm::detail::trim(pair.substr(0, eq)),
                                  oofdm::detail::trim(pair.substr(eq + 1)));
    }
    if (cli.seed_given) cfg.seed = cli.seed;
    if (!cli.out_dir.empty()) cfg.out_dir = cli.out_dir;
    if (cli.trials_given) cfg.max_trials = cli.trials;
    return cfg;
}

void print_table(const oofdm::Table& table) {
    std::vector<std::size_t> width(table.columns.size());
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        width[i] = table.columns[i].size();
    for (const auto& row : table.rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            width[i] = std::max(width[i], row[i].size());
    auto print_row = [&width](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i)
            std::printf("%s%-*s", i ? "  " : "", static_cast<int>(width[i]), row[i].c_str());
        std::printf("\n");
    };
    print_row(table.columns);
    for (const auto& row : table.rows) print_row(row);
}

void announce_outputs(const ExperimentConfig& cfg, const std::string& name) {
    std::printf("wrote %s/%s.csv, %s.meta.txt, %s.gp\n", cfg.out_dir.c_str(), name.c_str(),
                name.c_str(), name.c_str());
}

int cmd_ber(const ExperimentConfig& cfg) {
    const auto sweep = oofdm::ber_sweep(cfg);
    print_table(sweep.table);
    oofdm::write_sweep_outputs(cfg, "ber", sweep.table, sweep.meta, "Eb/N0 (dB)", "BER",
                               true, true);
    announce_outputs(cfg, "ber");
    return kExitOk;
}

int cmd_clipnoise(const ExperimentConfig& cfg) {
    const auto sweep = oofdm::clipnoise_sweep(cfg);
    print_table(sweep.table);
    oofdm::write_sweep_outputs(cfg, "clipnoise", sweep.table, sweep.meta,
                               "drive variance", "clipping noise power", true, false);
    announce_outputs(cfg, "clipnoise");
    return kExitOk;
}

int cmd_degrade(const ExperimentConfig& cfg, oofdm::DegradationKind kind) {
    const auto sweep = oofdm::degradation_sweep(kind, cfg);
    print_table(sweep.table);
    for (const auto& note : sweep.meta.notes) std::printf("%s\n", note.c_str());
    const bool dc = kind == oofdm::DegradationKind::DcShift;
    const std::string name = dc ? "degrade_dc" : "degrade_gain";
    oofdm::write_sweep_outputs(cfg, name, sweep.table, sweep.meta,
                               dc ? "DC bias shift (V)" : "gain multiplier", "BER", true,
                               true);
    announce_outputs(cfg, name);
    return kExitOk;
}

int cmd_complexity(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto table = oofdm::complexity_report(cfg.complexity_sizes);
    print_table(table);
    std::filesystem::create_directories(cfg.out_dir);
    oofdm::write_csv(cfg.out_dir + "/complexity.csv", table);
    oofdm::write_metadata(cfg.out_dir + "/complexity.meta.txt", oofdm::make_metadata(cfg));
    std::printf("wrote %s/complexity.csv, complexity.meta.txt\n", cfg.out_dir.c_str());
    return kExitOk;
}

int cmd_selftest(const ExperimentConfig& cfg) {
    int failures = 0;
    auto report = [&failures](bool ok, const char* label) {
        std::printf("%s: %s\n", ok ? "ok" : "FAILED", label);
        if (!ok) ++failures;
    };

    const auto oc = oofdm::op_count(oofdm::OpCountMethod::OCrip, 64);
    const auto he = oofdm::op_count(oofdm::OpCountMethod::Hermitian, 512);
    report(oc.multiplications == 98 && oc.additions == 420 && he.multiplications == 3076 &&
               he.additions == 12292,
           "transform cost spot checks");

    const auto ch = oofdm::make_channel({0.7, 0.2, 0.1}, 0.0, 64);
    oofdm::RngStream rng(cfg.seed, 42);
    bool clean = true;
    for (Scheme s : {Scheme::Hermitian, Scheme::ECrip, Scheme::OCrip}) {
        oofdm::FrameConfig fc;
        fc.scheme = s;
        fc.modulation = oofdm::modulation_for(s, 4);
        fc.cp_length = 8;
        const auto bits = rng.bits(static_cast<std::size_t>(fc.bits_per_frame(64)));
        clean = clean && oofdm::run_frame(bits, fc, ch, rng).diagnostics.bit_errors == 0;
    }
    report(clean, "noiseless multipath recovery");

    double worst = 0.0;
    for (int f = 0; f < 10; ++f) {
        std::vector<double> bins(64);
        for (auto& b : bins) b = rng.gaussian(1.0);
        const auto time = oofdm::idft(oofdm::build_crip_frame(bins, 64, true).bins);
        std::vector<oofdm::cplx> re_part(64), im_part(64);
        for (int i = 0; i < 64; ++i) {
            re_part[static_cast<std::size_t>(i)] = {time[static_cast<std::size_t>(i)].real(), 0.0};
            im_part[static_cast<std::size_t>(i)] = {time[static_cast<std::size_t>(i)].imag(), 0.0};
        }
        for (const auto& v : oofdm::dft(re_part)) worst = std::max(worst, std::abs(v.imag()));
        for (const auto& v : oofdm::dft(im_part)) worst = std::max(worst, std::abs(v.real()));
    }
    report(worst < 1e-10, "split-spectra symmetry");

    const oofdm::ClipRegime regime{0.25, cfg.clip_bottom, cfg.clip_top};
    oofdm::RngStream mc_rng(cfg.seed, 43);
    const auto mc = oofdm::mc_clip_noise_power_single(regime, 100000, mc_rng);
    report(std::abs(oofdm::clip_noise_power_single(regime) - mc.value) <
               5.0 * mc.std_error + 1e-12,
           "clipping noise closed form vs sampling");

    const auto loaded = oofdm::frame_rate(oofdm::FrameKind::Crip, 64, 8, true, 1e8);
    report(loaded.bits_per_second == 300000000.0, "throughput arithmetic");

    ExperimentConfig tiny = cfg;
    tiny.schemes = {Scheme::ECrip};
    tiny.n_subcarriers = 32;
    tiny.cp_length = 4;
    tiny.order = 2;
    tiny.ebn0_db = {4.0};
    tiny.max_trials = 256;
    tiny.target_errors = 50;
    const auto a = oofdm::ber_sweep(tiny);
    const auto b = oofdm::ber_sweep(tiny);
    report(a.table.rows == b.table.rows, "deterministic rerun");

    if (failures > 0) {
        std::printf("%d self test(s) failed\n", failures);
        return kExitRuntimeError;
    }
    std::printf("all self tests passed\n");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"optical OFDM simulation toolkit"};
    app.set_version_flag("--version", oofdm::kVersion);
    app.fallthrough();
    app.require_subcommand(1);

    CliOverrides cli;
    app.add_option("--config", cli.config_file, "key = value configuration file");
    app.add_option("--set", cli.sets, "override one config entry (key=value), repeatable");
    app.add_option("--seed", cli.seed, "base RNG seed")->each([&cli](const std::string&) {
        cli.seed_given = true;
    });
    app.add_option("--out-dir", cli.out_dir, "output directory");
    app.add_option("--trials", cli.trials, "max trials per sweep point")
        ->each([&cli](const std::string&) { cli.trials_given = true; });

    auto* ber = app.add_subcommand("ber", "BER versus Eb/N0 sweep, ideal front end");
    auto* clipnoise =
        app.add_subcommand("clipnoise", "clipping noise power versus drive variance");
    auto* degrade_dc =
        app.add_subcommand("degrade-dc", "BER degradation versus DC bias shift");
    auto* degrade_gain =
        app.add_subcommand("degrade-gain", "BER degradation versus amplifier gain");
    auto* complexity = app.add_subcommand("complexity", "transform operation-count table");
    auto* selftest = app.add_subcommand("selftest", "fast internal consistency checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        const ExperimentConfig cfg = build_config(cli);
        if (ber->parsed()) return cmd_ber(cfg);
        if (clipnoise->parsed()) return cmd_clipnoise(cfg);
        if (degrade_dc->parsed()) return cmd_degrade(cfg, oofdm::DegradationKind::DcShift);
        if (degrade_gain->parsed())
            return cmd_degrade(cfg, oofdm::DegradationKind::GainMultiplier);
        if (complexity->parsed()) return cmd_complexity(cfg);
        if (selftest->parsed()) return cmd_selftest(cfg);
    } catch (const oofdm::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntimeError;
    }
    return kExitOk;
}
