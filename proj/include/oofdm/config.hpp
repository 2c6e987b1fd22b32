#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "oofdm/errors.hpp"
#include "oofdm/modem.hpp"

namespace oofdm {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest round-trippable decimal form of a double; pinned so reruns of a
/// sweep are byte-identical.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_int(std::int64_t v) { return std::to_string(v); }

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/**
 * @brief Every knob of the experiment surface, with desk-scale defaults.
 *
 * `order` is the per-dimension modulation depth M: Hermitian runs M^2-QAM,
 * CRIP schemes run M-PAM, so every scheme carries log2(M) bits per real
 * dimension. `gain_grid` and `gain_multipliers` are in combined-drive RMS
 * units: the per-branch amplifier gain is derived per scheme so that all
 * schemes transmit at the same total signal variance.
 */
struct ExperimentConfig {
    std::vector<Scheme> schemes{Scheme::Hermitian, Scheme::ECrip, Scheme::OCrip};
    int n_subcarriers = 64;
    int cp_length = 8;
    int order = 4;
    bool s0_loaded = true;
    std::vector<double> ebn0_db{0, 2, 4, 6, 8, 10, 12, 14, 16};
    std::vector<double> taps{1.0};
    std::vector<std::string> tap_files{};
    double clip_bottom = -0.25;
    double clip_top = 0.25;
    double operating_ebn0_db = 20.0;
    std::vector<double> dc_shifts{0.0, 0.025, 0.05, 0.075, 0.1, 0.15, 0.2};
    std::vector<double> gain_multipliers{1.0, 1.25, 1.5, 2.0, 3.0};
    std::vector<double> gain_grid{0.08, 0.1, 0.125, 0.16, 0.2};
    std::vector<double> sigma_x2_grid{0.05, 0.1, 0.25, 0.5, 1.0};
    std::int64_t mc_samples = 10000000;
    std::int64_t max_trials = 100000;
    std::int64_t target_errors = 500;
    std::vector<int> complexity_sizes{8, 16, 32, 64, 128, 256, 512};
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    double bandwidth_hz = 1e8;

    void validate() const {
        if (schemes.empty()) throw ConfigError("schemes must not be empty");
        if (n_subcarriers < 8 || !is_power_of_two(static_cast<std::size_t>(n_subcarriers)))
            throw ConfigError("n must be a power of two >= 8");
        if (cp_length < 0 || cp_length >= n_subcarriers)
            throw ConfigError("cp must satisfy 0 <= cp < n");
        if (order < 2 || !is_power_of_two(static_cast<std::size_t>(order)))
            throw ConfigError("order must be a power of two >= 2");
        if (ebn0_db.empty()) throw ConfigError("ebn0_db grid must not be empty");
        if (tap_files.empty() && taps.empty())
            throw ConfigError("either taps or tap_files must be given");
        if (!(clip_bottom < 0.0 && 0.0 < clip_top))
            throw ConfigError("clip bounds must satisfy clip_bottom < 0 < clip_top");
        if (dc_shifts.empty()) throw ConfigError("dc_shifts grid must not be empty");
        if (gain_multipliers.empty())
            throw ConfigError("gain_multipliers grid must not be empty");
        if (gain_grid.empty()) throw ConfigError("gain_grid must not be empty");
        for (double g : gain_grid)
            if (!(g > 0.0)) throw ConfigError("gain_grid entries must be positive");
        for (double m : gain_multipliers)
            if (!(m > 0.0)) throw ConfigError("gain_multipliers entries must be positive");
        if (sigma_x2_grid.empty()) throw ConfigError("sigma_x2_grid must not be empty");
        for (double s : sigma_x2_grid)
            if (!(s > 0.0)) throw ConfigError("sigma_x2_grid entries must be positive");
        if (mc_samples < 2) throw ConfigError("mc_samples must be at least 2");
        if (max_trials < 1) throw ConfigError("trials must be at least 1");
        if (target_errors < 1) throw ConfigError("target_errors must be at least 1");
        if (complexity_sizes.empty())
            throw ConfigError("complexity_n list must not be empty");
        for (int n : complexity_sizes)
            if (n < 8 || !is_power_of_two(static_cast<std::size_t>(n)))
                throw ConfigError("complexity_n entries must be powers of two >= 8");
        if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
        if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth_hz must be positive");
    }

    /// Deterministic full dump; hashing this pins a run's identity.
    std::string canonical_text() const {
        std::ostringstream out;
        out << "schemes = ";
        for (std::size_t i = 0; i < schemes.size(); ++i)
            out << (i ? "," : "") << scheme_name(schemes[i]);
        out << "\nn = " << n_subcarriers;
        out << "\ncp = " << cp_length;
        out << "\norder = " << order;
        out << "\ns0_loaded = " << (s0_loaded ? "true" : "false");
        auto list = [&out](const char* key, const std::vector<double>& v) {
            out << "\n" << key << " = ";
            for (std::size_t i = 0; i < v.size(); ++i)
                out << (i ? "," : "") << format_double(v[i]);
        };
        list("ebn0_db", ebn0_db);
        list("taps", taps);
        out << "\ntap_files = ";
        for (std::size_t i = 0; i < tap_files.size(); ++i)
            out << (i ? "," : "") << tap_files[i];
        out << "\nclip_bottom = " << format_double(clip_bottom);
        out << "\nclip_top = " << format_double(clip_top);
        out << "\noperating_ebn0_db = " << format_double(operating_ebn0_db);
        list("dc_shifts", dc_shifts);
        list("gain_multipliers", gain_multipliers);
        list("gain_grid", gain_grid);
        list("sigma_x2_grid", sigma_x2_grid);
        out << "\nmc_samples = " << mc_samples;
        out << "\ntrials = " << max_trials;
        out << "\ntarget_errors = " << target_errors;
        out << "\ncomplexity_n = ";
        for (std::size_t i = 0; i < complexity_sizes.size(); ++i)
            out << (i ? "," : "") << complexity_sizes[i];
        out << "\nseed = " << seed;
        out << "\nout_dir = " << out_dir;
        out << "\nbandwidth_hz = " << format_double(bandwidth_hz);
        out << "\n";
        return out.str();
    }

    std::string config_hash() const {
        char buf[20];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(fnv1a64(canonical_text())));
        return buf;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline double parse_double(const std::string& s, const std::string& key) {
    std::size_t idx = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &idx);
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value '" + s + "' for key '" + key + "'");
    }
    if (idx != s.size())
        throw ConfigError("trailing junk in value '" + s + "' for key '" + key + "'");
    return v;
}

inline std::int64_t parse_int(const std::string& s, const std::string& key) {
    std::size_t idx = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &idx);
    } catch (const std::exception&) {
        throw ConfigError("bad integer value '" + s + "' for key '" + key + "'");
    }
    if (idx != s.size())
        throw ConfigError("trailing junk in value '" + s + "' for key '" + key + "'");
    return v;
}

inline bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError("bad boolean value '" + s + "' for key '" + key +
                      "' (expected true or false)");
}

inline std::vector<double> parse_double_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) out.push_back(parse_double(item, key));
    return out;
}

} // namespace detail

/// Applies one `key = value` assignment; unknown keys are rejected so typos
/// cannot silently fall back to defaults.
inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_double_list;
    using detail::parse_int;
    if (key == "schemes") {
        cfg.schemes.clear();
        for (const auto& name : detail::split_list(value))
            cfg.schemes.push_back(parse_scheme(name));
    } else if (key == "n") {
        cfg.n_subcarriers = static_cast<int>(parse_int(value, key));
    } else if (key == "cp") {
        cfg.cp_length = static_cast<int>(parse_int(value, key));
    } else if (key == "order") {
        cfg.order = static_cast<int>(parse_int(value, key));
    } else if (key == "s0_loaded") {
        cfg.s0_loaded = parse_bool(value, key);
    } else if (key == "ebn0_db") {
        cfg.ebn0_db = parse_double_list(value, key);
    } else if (key == "taps") {
        cfg.taps = parse_double_list(value, key);
    } else if (key == "tap_files") {
        cfg.tap_files = detail::split_list(value);
    } else if (key == "clip_bottom") {
        cfg.clip_bottom = parse_double(value, key);
    } else if (key == "clip_top") {
        cfg.clip_top = parse_double(value, key);
    } else if (key == "operating_ebn0_db") {
        cfg.operating_ebn0_db = parse_double(value, key);
    } else if (key == "dc_shifts") {
        cfg.dc_shifts = parse_double_list(value, key);
    } else if (key == "gain_multipliers") {
        cfg.gain_multipliers = parse_double_list(value, key);
    } else if (key == "gain_grid") {
        cfg.gain_grid = parse_double_list(value, key);
    } else if (key == "sigma_x2_grid") {
        cfg.sigma_x2_grid = parse_double_list(value, key);
    } else if (key == "mc_samples") {
        cfg.mc_samples = parse_int(value, key);
    } else if (key == "trials") {
        cfg.max_trials = parse_int(value, key);
    } else if (key == "target_errors") {
        cfg.target_errors = parse_int(value, key);
    } else if (key == "complexity_n") {
        cfg.complexity_sizes.clear();
        for (const auto& item : detail::split_list(value))
            cfg.complexity_sizes.push_back(static_cast<int>(parse_int(item, key)));
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "out_dir") {
        cfg.out_dir = value;
    } else if (key == "bandwidth_hz") {
        cfg.bandwidth_hz = parse_double(value, key);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

/// `key = value` lines; blank lines and '#' comments are skipped.
inline void parse_config_text(ExperimentConfig& cfg, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        apply_config_entry(cfg, key, value);
    }
}

inline void load_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    parse_config_text(cfg, text.str());
}

} // namespace oofdm
