#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "oofdm/channel.hpp"
#include "oofdm/clipnoise.hpp"
#include "oofdm/config.hpp"
#include "oofdm/errors.hpp"
#include "oofdm/modem.hpp"
#include "oofdm/rng.hpp"
#include "oofdm/transforms.hpp"

namespace oofdm {

// Stream-id domains keep every sweep's random numbers disjoint.
inline constexpr std::uint64_t kDomainBer = 1;
inline constexpr std::uint64_t kDomainClipNoise = 2;
inline constexpr std::uint64_t kDomainDcShift = 3;
inline constexpr std::uint64_t kDomainGainSweep = 4;
inline constexpr std::uint64_t kDomainGainSearch = 5;

inline constexpr std::int64_t kDefaultBatch = 1024;

struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

/// Wilson score interval for a binomial proportion (95% at the default z).
inline WilsonInterval wilson_interval(std::int64_t successes, std::int64_t n,
                                      double z = 1.96) {
    if (n <= 0) return {0.0, 1.0};
    if (successes < 0 || successes > n)
        throw DomainError("success count out of range for interval");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// Early-stop policy: a point ends after target_errors bit errors or
/// max_trials frames, whichever comes first. The stop condition is evaluated
/// only at batch boundaries so the trial count never depends on how work was
/// scheduled.
struct TrialBudget {
    std::int64_t max_trials = 100000;
    std::int64_t target_errors = 500;
    std::int64_t batch = kDefaultBatch;
};

struct PointResult {
    double ber = 0.0;
    double ci_halfwidth = 0.0;
    std::int64_t errors = 0;
    std::int64_t trials = 0;
    std::int64_t bits = 0;
};

/// Time-averaged variance of the combined drive signal at unit gain and unit
/// mean symbol energy: loaded bins / N.
inline double analytic_frame_variance(Scheme scheme, int n, bool s0_loaded) {
    const double nn = static_cast<double>(n);
    if (scheme == Scheme::Hermitian) return (nn - 2.0) / nn;
    return s0_loaded ? 1.0 : (nn - 1.0) / nn;
}

/// Hermitian carries M^2-QAM, CRIP carries M-PAM: log2(M) bits per real
/// dimension either way.
inline ModulationSpec modulation_for(Scheme scheme, int order) {
    return {scheme == Scheme::Hermitian ? Constellation::Qam : Constellation::Pam, order};
}

inline int bits_per_frame_for(Scheme scheme, int order, int n, bool s0_loaded) {
    const ModulationSpec mod = modulation_for(scheme, order);
    const int symbols = scheme == Scheme::Hermitian ? n / 2 - 1 : (s0_loaded ? n : n - 1);
    return symbols * mod.bits_per_symbol();
}

/**
 * @brief Noise power realizing a target electrical Eb/N0, DC bias excluded.
 *
 * Eb is the transmitted signal variance times frame duration (CP excluded)
 * per information bit; solving for the per-sample noise variance gives
 * sigma_n^2 = gain^2 sigma_s^2 N / (2 R 10^(dB/10)). With this mapping, M=2
 * CRIP over an identity channel reproduces BER = Q(sqrt(2 Eb/N0)) exactly.
 */
inline double noise_power_for(double ebn0_db, double gain, Scheme scheme, int order,
                              int n, bool s0_loaded) {
    const double rho = std::pow(10.0, ebn0_db / 10.0);
    const double sigma_s2 = analytic_frame_variance(scheme, n, s0_loaded);
    const double r = static_cast<double>(bits_per_frame_for(scheme, order, n, s0_loaded));
    return gain * gain * sigma_s2 * static_cast<double>(n) / (2.0 * r * rho);
}

/// Runs one sweep point. Trial t draws a fresh stream point_stream.derive(t)
/// for its bits and noise and uses channel t mod |channels|, so the result is
/// a pure function of (seed, point index, budget).
inline PointResult run_point(const FrameConfig& cfg, const std::vector<ChannelModel>& channels,
                             const RngStream& point_stream, const TrialBudget& budget) {
    if (channels.empty()) throw ConfigError("need at least one channel");
    const int n = channels.front().n_subcarriers;
    for (const auto& ch : channels)
        if (ch.n_subcarriers != n)
            throw SizingError("all channels in a sweep must share N");
    cfg.validate(n);
    if (budget.max_trials < 1 || budget.target_errors < 1 || budget.batch < 1)
        throw ConfigError("trial budget entries must be positive");
    const int bits_per_frame = cfg.bits_per_frame(n);
    PointResult res;
    std::int64_t t = 0;
    while (t < budget.max_trials && res.errors < budget.target_errors) {
        const std::int64_t stop = std::min(budget.max_trials, t + budget.batch);
        for (; t < stop; ++t) {
            RngStream trial = point_stream.derive(static_cast<std::uint64_t>(t));
            const auto bits = trial.bits(static_cast<std::size_t>(bits_per_frame));
            const auto ch_index = static_cast<std::size_t>(t) % channels.size();
            res.errors += run_frame(bits, cfg, channels[ch_index], trial).diagnostics.bit_errors;
        }
    }
    res.trials = t;
    res.bits = t * bits_per_frame;
    res.ber = res.bits > 0 ? static_cast<double>(res.errors) / static_cast<double>(res.bits)
                           : 0.0;
    const WilsonInterval iv = wilson_interval(res.errors, res.bits);
    res.ci_halfwidth = 0.5 * (iv.high - iv.low);
    return res;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct RunMetadata {
    std::string version = kVersion;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::int64_t max_trials = 0;
    std::int64_t target_errors = 0;
    std::string interval_note = "wilson score 95% (z = 1.96), computed over bits";
    std::vector<std::string> notes;
    std::string canonical_config;
};

inline RunMetadata make_metadata(const ExperimentConfig& cfg) {
    RunMetadata meta;
    meta.seed = cfg.seed;
    meta.config_hash = cfg.config_hash();
    meta.max_trials = cfg.max_trials;
    meta.target_errors = cfg.target_errors;
    meta.canonical_config = cfg.canonical_text();
    return meta;
}

struct BerPoint {
    Scheme scheme = Scheme::Hermitian;
    double x = 0.0;
    PointResult result;
};

struct BerSweepResult {
    std::vector<BerPoint> points;
    Table table;
    RunMetadata meta;
};

struct ClipNoiseSweepResult {
    std::vector<ClipNoiseReport> points;
    Table table;
    RunMetadata meta;
};

namespace detail {

inline Table ber_table(const std::vector<BerPoint>& points, const std::string& x_column) {
    Table t;
    t.columns = {"scheme", x_column, "ber", "ci_halfwidth", "errors", "trials"};
    for (const auto& p : points)
        t.rows.push_back({scheme_name(p.scheme), format_double(p.x),
                          format_double(p.result.ber), format_double(p.result.ci_halfwidth),
                          format_int(p.result.errors), format_int(p.result.trials)});
    return t;
}

} // namespace detail

inline std::vector<ChannelModel> resolve_channels(const ExperimentConfig& cfg) {
    std::vector<ChannelModel> out;
    if (!cfg.tap_files.empty()) {
        for (const auto& f : cfg.tap_files)
            out.push_back(make_channel(load_taps(f), 0.0, cfg.n_subcarriers));
    } else {
        out.push_back(make_channel(cfg.taps, 0.0, cfg.n_subcarriers));
    }
    return out;
}

inline TrialBudget budget_for(const ExperimentConfig& cfg) {
    return {cfg.max_trials, cfg.target_errors, kDefaultBatch};
}

/// BER versus Eb/N0 with an ideal (clip-free) front end; the x axis sets the
/// noise power per point, so the gain drops out of the measured BER.
inline BerSweepResult ber_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto channels = resolve_channels(cfg);
    const TrialBudget budget = budget_for(cfg);
    const RngStream root(cfg.seed, kDomainBer);
    BerSweepResult out;
    std::uint64_t flat = 0;
    for (const Scheme scheme : cfg.schemes) {
        for (const double ebn0 : cfg.ebn0_db) {
            FrameConfig fc;
            fc.scheme = scheme;
            fc.modulation = modulation_for(scheme, cfg.order);
            fc.cp_length = cfg.cp_length;
            fc.s0_loaded = cfg.s0_loaded;
            fc.gain = 1.0;
            fc.noise_power = noise_power_for(ebn0, fc.gain, scheme, cfg.order,
                                             cfg.n_subcarriers, cfg.s0_loaded);
            out.points.push_back({scheme, ebn0, run_point(fc, channels, root.derive(flat), budget)});
            ++flat;
        }
    }
    out.table = detail::ber_table(out.points, "ebn0_db");
    out.meta = make_metadata(cfg);
    return out;
}

/**
 * @brief Chain configuration at the clipped operating point.
 *
 * `gain_rms` is the target RMS of the combined drive signal; the per-branch
 * amplifier gain divides out the scheme's analytic frame variance so every
 * scheme transmits at the same total power. A DC bias shift of `dc_shift`
 * volts moves the clip window to [bottom - dc_shift, top - dc_shift]. Noise
 * keeps the configured Eb/N0 at the actual drive power, so any BER change
 * across the operating grid is clipping-induced.
 */
inline FrameConfig operating_frame_config(const ExperimentConfig& cfg, Scheme scheme,
                                          double gain_rms, double dc_shift) {
    FrameConfig fc;
    fc.scheme = scheme;
    fc.modulation = modulation_for(scheme, cfg.order);
    fc.cp_length = cfg.cp_length;
    fc.s0_loaded = cfg.s0_loaded;
    fc.gain = gain_rms / std::sqrt(analytic_frame_variance(scheme, cfg.n_subcarriers,
                                                           cfg.s0_loaded));
    fc.clip_enabled = true;
    fc.clip_bottom = cfg.clip_bottom - dc_shift;
    fc.clip_top = cfg.clip_top - dc_shift;
    fc.noise_power = noise_power_for(cfg.operating_ebn0_db, fc.gain, scheme, cfg.order,
                                     cfg.n_subcarriers, cfg.s0_loaded);
    return fc;
}

/// Grid search for the drive RMS minimizing measured BER at the operating
/// Eb/N0; ties resolve to the smaller gain. Deterministic given the seed.
inline double optimum_gain_search(Scheme scheme, const ExperimentConfig& cfg,
                                  const std::vector<ChannelModel>& channels,
                                  const TrialBudget& budget) {
    if (cfg.gain_grid.empty()) throw ConfigError("gain_grid must not be empty");
    std::vector<double> grid = cfg.gain_grid;
    std::sort(grid.begin(), grid.end());
    const RngStream root =
        RngStream(cfg.seed, kDomainGainSearch).derive(static_cast<std::uint64_t>(scheme));
    double best_gain = grid.front();
    double best_ber = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const FrameConfig fc = operating_frame_config(cfg, scheme, grid[i], 0.0);
        const PointResult pr = run_point(fc, channels, root.derive(i), budget);
        if (pr.ber < best_ber) {
            best_ber = pr.ber;
            best_gain = grid[i];
        }
    }
    return best_gain;
}

enum class DegradationKind { DcShift, GainMultiplier };

/// BER at a fixed Eb/N0 while the DC bias shifts (volts) or the drive RMS
/// scales over the per-scheme optimum gain.
inline BerSweepResult degradation_sweep(DegradationKind kind, const ExperimentConfig& cfg) {
    cfg.validate();
    const auto channels = resolve_channels(cfg);
    const TrialBudget budget = budget_for(cfg);
    const bool dc = kind == DegradationKind::DcShift;
    const RngStream root(cfg.seed, dc ? kDomainDcShift : kDomainGainSweep);
    const std::vector<double>& grid = dc ? cfg.dc_shifts : cfg.gain_multipliers;
    BerSweepResult out;
    out.meta = make_metadata(cfg);
    std::uint64_t flat = 0;
    for (const Scheme scheme : cfg.schemes) {
        const double g_opt = optimum_gain_search(scheme, cfg, channels, budget);
        out.meta.notes.push_back(std::string("optimum_gain ") + scheme_name(scheme) +
                                 " = " + format_double(g_opt));
        for (const double x : grid) {
            const FrameConfig fc = dc ? operating_frame_config(cfg, scheme, g_opt, x)
                                      : operating_frame_config(cfg, scheme, g_opt * x, 0.0);
            out.points.push_back({scheme, x, run_point(fc, channels, root.derive(flat), budget)});
            ++flat;
        }
    }
    out.table = detail::ber_table(out.points, dc ? "dc_shift_v" : "gain_multiplier");
    return out;
}

/// Closed-form clipping power against its sampling estimate per grid point.
inline ClipNoiseSweepResult clipnoise_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const RngStream root(cfg.seed, kDomainClipNoise);
    ClipNoiseSweepResult out;
    for (std::size_t i = 0; i < cfg.sigma_x2_grid.size(); ++i) {
        const double s2 = cfg.sigma_x2_grid[i];
        const ClipRegime regime{s2, cfg.clip_bottom, cfg.clip_top};
        ClipNoiseReport rep;
        rep.sigma_x2 = s2;
        rep.analytic_single = clip_noise_power_single(regime);
        rep.analytic_ocrip = clip_noise_power_ocrip(s2, cfg.clip_bottom, cfg.clip_top);
        RngStream single_stream = root.derive(i).derive(0);
        RngStream ocrip_stream = root.derive(i).derive(1);
        const auto ms = mc_clip_noise_power_single(regime, cfg.mc_samples, single_stream);
        const auto mo = mc_clip_noise_power_ocrip(s2, cfg.clip_bottom, cfg.clip_top,
                                                  cfg.mc_samples, ocrip_stream);
        rep.mc_single = ms.value;
        rep.mc_ocrip = mo.value;
        rep.mc_std_error = std::max(ms.std_error, mo.std_error);
        out.points.push_back(rep);
    }
    out.table.columns = {"sigma_x2", "analytic_single", "analytic_ocrip",
                         "mc_single", "mc_ocrip", "mc_stderr"};
    for (const auto& r : out.points)
        out.table.rows.push_back({format_double(r.sigma_x2), format_double(r.analytic_single),
                                  format_double(r.analytic_ocrip), format_double(r.mc_single),
                                  format_double(r.mc_ocrip), format_double(r.mc_std_error)});
    out.meta = make_metadata(cfg);
    return out;
}

/// Transform cost per method and size, with receiver-side extras (CRIP: N
/// subtractions; Hermitian: (N-2)/2 conjugations) in their own column.
inline Table complexity_report(const std::vector<int>& sizes) {
    Table t;
    t.columns = {"n", "method", "multiplications", "additions", "receiver_extra_ops"};
    const std::pair<OpCountMethod, const char*> methods[] = {
        {OpCountMethod::Hermitian, "hermitian"},
        {OpCountMethod::Dct, "dct"},
        {OpCountMethod::ECrip, "ecrip"},
        {OpCountMethod::OCrip, "ocrip"},
    };
    for (const int n : sizes) {
        for (const auto& [method, name] : methods) {
            const OpCount ops = op_count(method, n);
            t.rows.push_back({format_int(n), name, format_int(ops.multiplications),
                              format_int(ops.additions),
                              format_int(receiver_extra_ops(method, n))});
        }
    }
    return t;
}

inline void write_csv(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw Error("row width does not match header in " + path);
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    if (!out) throw Error("failed writing " + path);
}

inline void write_metadata(const std::string& path, const RunMetadata& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << "version = " << meta.version << "\n";
    out << "seed = " << meta.seed << "\n";
    out << "config_hash = fnv1a:" << meta.config_hash << "\n";
    out << "max_trials = " << meta.max_trials << "\n";
    out << "target_errors = " << meta.target_errors << "\n";
    out << "interval = " << meta.interval_note << "\n";
    for (const auto& note : meta.notes) out << "note = " << note << "\n";
    out << "--- config ---\n" << meta.canonical_config;
    if (!out) throw Error("failed writing " + path);
}

/// Gnuplot script plotting the named CSV next to it.
inline void write_plot_script(const std::string& path, const std::string& csv_name,
                              const std::string& title, const std::string& xlabel,
                              const std::string& ylabel, bool log_y,
                              const std::vector<Scheme>* schemes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << "set datafile separator \",\"\n";
    out << "set title \"" << title << "\"\n";
    out << "set xlabel \"" << xlabel << "\"\n";
    out << "set ylabel \"" << ylabel << "\"\n";
    out << "set key top right\n";
    if (log_y) out << "set logscale y\n";
    out << "set grid\n";
    if (schemes != nullptr) {
        out << "schemes = \"";
        for (std::size_t i = 0; i < schemes->size(); ++i)
            out << (i ? " " : "") << scheme_name((*schemes)[i]);
        out << "\"\n";
        out << "plot for [s in schemes] \"" << csv_name
            << "\" using (strcol(1) eq s ? column(2) : NaN):3 with linespoints title s\n";
    } else {
        out << "plot \"" << csv_name << "\" using 1:2 with linespoints title \"analytic single\", \\\n"
            << "     \"" << csv_name << "\" using 1:3 with linespoints title \"analytic ocrip\", \\\n"
            << "     \"" << csv_name << "\" using 1:4 with points title \"mc single\", \\\n"
            << "     \"" << csv_name << "\" using 1:5 with points title \"mc ocrip\"\n";
    }
    if (!out) throw Error("failed writing " + path);
}

/// Writes <name>.csv, <name>.meta.txt and <name>.gp under cfg.out_dir.
inline void write_sweep_outputs(const ExperimentConfig& cfg, const std::string& name,
                                const Table& table, const RunMetadata& meta,
                                const std::string& xlabel, const std::string& ylabel,
                                bool log_y, bool per_scheme_plot) {
    std::filesystem::create_directories(cfg.out_dir);
    const std::string base = cfg.out_dir + "/" + name;
    write_csv(base + ".csv", table);
    write_metadata(base + ".meta.txt", meta);
    write_plot_script(base + ".gp", name + ".csv", name, xlabel, ylabel, log_y,
                      per_scheme_plot ? &cfg.schemes : nullptr);
}

} // namespace oofdm
