#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "oofdm/channel.hpp"
#include "oofdm/errors.hpp"
#include "oofdm/frames.hpp"
#include "oofdm/modulation.hpp"
#include "oofdm/rng.hpp"
#include "oofdm/transforms.hpp"

namespace oofdm {

enum class Scheme { Hermitian, ECrip, OCrip };

inline FrameKind frame_kind_for(Scheme s) {
    return s == Scheme::Hermitian ? FrameKind::Hermitian : FrameKind::Crip;
}

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Hermitian: return "hermitian";
        case Scheme::ECrip: return "ecrip";
        case Scheme::OCrip: return "ocrip";
    }
    throw ConfigError("unknown scheme");
}

inline Scheme parse_scheme(const std::string& name) {
    if (name == "hermitian") return Scheme::Hermitian;
    if (name == "ecrip") return Scheme::ECrip;
    if (name == "ocrip") return Scheme::OCrip;
    throw ConfigError("unknown scheme '" + name + "' (expected hermitian, ecrip or ocrip)");
}

/**
 * @brief Transmit-side drive signals, cyclic prefix included.
 *
 * Hermitian and E-CRIP produce one branch; O-CRIP produces two (real-part
 * branch first, imaginary-part branch second) whose sample-wise sum equals
 * the E-CRIP signal built from the same frame.
 */
struct TxOutput {
    std::vector<std::vector<double>> branches; // each length n + cp
    Scheme scheme = Scheme::Hermitian;
    int n = 0;
    int cp = 0;
    bool s0_loaded = false;
};

namespace detail {

inline std::vector<double> add_cyclic_prefix(const std::vector<double>& s, int cp) {
    std::vector<double> out;
    out.reserve(s.size() + static_cast<std::size_t>(cp));
    out.insert(out.end(), s.end() - cp, s.end());
    out.insert(out.end(), s.begin(), s.end());
    return out;
}

} // namespace detail

inline TxOutput tx(const FrequencyFrame& frame, int cp, Scheme scheme) {
    const int n = frame.n();
    if (cp < 0 || cp >= n)
        throw SizingError("cyclic prefix length must satisfy 0 <= cp < N");
    if (frame.kind != frame_kind_for(scheme))
        throw DomainError("frame kind does not match transmit scheme");
    TxOutput out;
    out.scheme = scheme;
    out.n = n;
    out.cp = cp;
    out.s0_loaded = frame.s0_loaded;
    const std::vector<cplx> s = idft(frame.bins);
    if (scheme == Scheme::Hermitian) {
        std::vector<double> body(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            if (std::abs(s[static_cast<std::size_t>(i)].imag()) > 1e-12)
                throw DomainError("frame violates Hermitian symmetry");
            body[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)].real();
        }
        out.branches.push_back(detail::add_cyclic_prefix(body, cp));
        return out;
    }
    for (const auto& bin : frame.bins)
        if (std::abs(bin.imag()) > 1e-12)
            throw DomainError("CRIP frame bins must be purely real");
    std::vector<double> real_part(static_cast<std::size_t>(n));
    std::vector<double> imag_part(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        real_part[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)].real();
        imag_part[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)].imag();
    }
    if (scheme == Scheme::ECrip) {
        std::vector<double> combined(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            combined[static_cast<std::size_t>(i)] =
                real_part[static_cast<std::size_t>(i)] + imag_part[static_cast<std::size_t>(i)];
        out.branches.push_back(detail::add_cyclic_prefix(combined, cp));
    } else {
        out.branches.push_back(detail::add_cyclic_prefix(real_part, cp));
        out.branches.push_back(detail::add_cyclic_prefix(imag_part, cp));
    }
    return out;
}

/// Post-equalizer frequency bins; every bin divided by gain * lambda_k.
struct EqualizedFrame {
    std::vector<cplx> values;
    Scheme scheme = Scheme::Hermitian;
};

/// Removes the cyclic prefix, transforms, and zero-forces. `gain` is the
/// amplifier gain the transmitter applied; it is folded into the equalizer.
inline EqualizedFrame equalize(const std::vector<double>& received, const ChannelModel& ch,
                               Scheme scheme, int cp, double gain = 1.0) {
    const int n = ch.n_subcarriers;
    if (cp < 0) throw SizingError("cyclic prefix length must be nonnegative");
    if (static_cast<int>(received.size()) != n + cp)
        throw SizingError("received frame must have N + cp samples");
    if (!(gain > 0.0)) throw ConfigError("amplifier gain must be positive");
    const auto& lambda = channel_eigenvalues(ch);
    std::vector<double> body(received.begin() + cp, received.end());
    EqualizedFrame eq;
    eq.scheme = scheme;
    eq.values = dft_real(body);
    for (int k = 0; k < n; ++k)
        eq.values[static_cast<std::size_t>(k)] /= gain * lambda[static_cast<std::size_t>(k)];
    return eq;
}

/// Data-bearing half of a Hermitian frame: bins 1..N/2-1.
inline std::vector<cplx> hermitian_soft_symbols(const EqualizedFrame& eq) {
    const int n = static_cast<int>(eq.values.size());
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(n / 2 - 1));
    for (int k = 1; k < n / 2; ++k) out.push_back(eq.values[static_cast<std::size_t>(k)]);
    return out;
}

/// CRIP recovery: the imaginary part of each equalized bin is subtracted
/// from its real part; restricted to the loaded bins.
inline std::vector<double> crip_soft_symbols(const EqualizedFrame& eq, bool s0_loaded) {
    const int n = static_cast<int>(eq.values.size());
    const int first = s0_loaded ? 0 : 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n - first));
    for (int k = first; k < n; ++k)
        out.push_back(eq.values[static_cast<std::size_t>(k)].real() -
                      eq.values[static_cast<std::size_t>(k)].imag());
    return out;
}

inline std::vector<cplx> rx_hermitian(const std::vector<double>& received,
                                      const ChannelModel& ch, int cp, double gain = 1.0) {
    return hermitian_soft_symbols(equalize(received, ch, Scheme::Hermitian, cp, gain));
}

inline std::vector<double> rx_crip(const std::vector<double>& received, const ChannelModel& ch,
                                   int cp, bool s0_loaded, double gain = 1.0,
                                   Scheme scheme = Scheme::ECrip) {
    return crip_soft_symbols(equalize(received, ch, scheme, cp, gain), s0_loaded);
}

/**
 * @brief One Monte-Carlo chain configuration.
 *
 * The front end amplifies each branch by `gain` and, when `clip_enabled`,
 * clamps it to [clip_bottom, clip_top]. Noise is added once, after branch
 * summation. `s0_loaded` applies to CRIP schemes only.
 */
struct FrameConfig {
    Scheme scheme = Scheme::ECrip;
    ModulationSpec modulation{Constellation::Pam, 2};
    int cp_length = 0;
    bool s0_loaded = true;
    double gain = 1.0;
    bool clip_enabled = false;
    double clip_bottom = 0.0;
    double clip_top = 0.0;
    double noise_power = 0.0;

    int data_symbols_per_frame(int n) const {
        if (scheme == Scheme::Hermitian) return n / 2 - 1;
        return s0_loaded ? n : n - 1;
    }

    int bits_per_frame(int n) const {
        return data_symbols_per_frame(n) * modulation.bits_per_symbol();
    }

    void validate(int n) const {
        modulation.validate();
        if (cp_length < 0 || cp_length >= n)
            throw ConfigError("cyclic prefix length must satisfy 0 <= cp < N");
        if (!(gain > 0.0)) throw ConfigError("amplifier gain must be positive");
        if (clip_enabled && !(clip_bottom < clip_top))
            throw ConfigError("clip bounds must satisfy bottom < top");
        if (noise_power < 0.0) throw DomainError("noise power must be nonnegative");
        if (scheme != Scheme::Hermitian && modulation.kind != Constellation::Pam)
            throw ConfigError("CRIP schemes carry real symbols; use PAM");
    }
};

struct FrameDiagnostics {
    std::int64_t bit_errors = 0;
    std::int64_t bit_count = 0;
    double tx_power = 0.0; // mean square of the summed drive signal
    std::int64_t clip_events = 0;
};

struct FrameResult {
    std::vector<std::uint8_t> decoded;
    FrameDiagnostics diagnostics;
};

/// Full chain: map -> frame -> tx -> per-branch gain/clip -> channel ->
/// noise -> equalize -> demap. Consumes exactly bits_per_frame(N) bits.
inline FrameResult run_frame(const std::vector<std::uint8_t>& bits, const FrameConfig& cfg,
                             const ChannelModel& ch, RngStream& rng) {
    const int n = ch.n_subcarriers;
    cfg.validate(n);
    if (static_cast<int>(bits.size()) != cfg.bits_per_frame(n))
        throw SizingError("expected " + std::to_string(cfg.bits_per_frame(n)) +
                          " bits per frame, got " + std::to_string(bits.size()));
    const SymbolVector symbols = map_bits(bits, cfg.modulation);
    FrequencyFrame frame;
    if (cfg.scheme == Scheme::Hermitian)
        frame = build_hermitian_frame(symbols.values, n);
    else
        frame = build_crip_frame(symbols.values, n, cfg.s0_loaded);
    const TxOutput sent = tx(frame, cfg.cp_length, cfg.scheme);

    FrameDiagnostics diag;
    std::vector<double> combined(static_cast<std::size_t>(n + cfg.cp_length), 0.0);
    for (const auto& branch : sent.branches) {
        for (std::size_t i = 0; i < branch.size(); ++i) {
            double v = cfg.gain * branch[i];
            if (cfg.clip_enabled) {
                const double c = std::clamp(v, cfg.clip_bottom, cfg.clip_top);
                if (c != v) ++diag.clip_events;
                v = c;
            }
            combined[i] += v;
        }
    }
    for (double v : combined) diag.tx_power += v * v;
    diag.tx_power /= static_cast<double>(combined.size());

    std::vector<double> received = fir_filter(combined, ch.taps);
    received = add_awgn(std::move(received), cfg.noise_power, rng);
    const EqualizedFrame eq = equalize(received, ch, cfg.scheme, cfg.cp_length, cfg.gain);

    std::vector<std::uint8_t> decoded;
    if (cfg.scheme == Scheme::Hermitian)
        decoded = demap_symbols(hermitian_soft_symbols(eq), cfg.modulation);
    else
        decoded = demap_symbols(crip_soft_symbols(eq, cfg.s0_loaded), cfg.modulation);

    diag.bit_count = static_cast<std::int64_t>(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        diag.bit_errors += bits[i] != decoded[i] ? 1 : 0;
    return {std::move(decoded), diag};
}

} // namespace oofdm
