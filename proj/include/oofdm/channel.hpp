#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oofdm/errors.hpp"
#include "oofdm/rng.hpp"
#include "oofdm/transforms.hpp"

namespace oofdm {

/// Eigenvalue magnitude below which zero-forcing is refused.
inline constexpr double kSingularEigenvalueThreshold = 1e-12;

/// Receiver noise power preset measured for a 100 MHz photodetector front
/// end, -98.71 dBm. Provided as a convenience constant only; sweeps normally
/// derive noise power from the Eb/N0 operating point instead.
inline constexpr double kIndoorNoisePowerDbm = -98.71;

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// lambda_k = sum_m h_m exp(-i 2 pi k m / N), the unnormalized DFT of the
/// zero-padded tap vector. No singularity check; see channel_eigenvalues.
inline std::vector<cplx> eigenvalues_unchecked(const std::vector<double>& taps, int n) {
    std::vector<cplx> lambda(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t m = 0; m < taps.size(); ++m) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) *
                                 static_cast<double>(m) / static_cast<double>(n);
            acc += taps[m] * cplx(std::cos(angle), std::sin(angle));
        }
        lambda[static_cast<std::size_t>(k)] = acc;
    }
    return lambda;
}

/**
 * @brief Causal multipath intensity channel h_0..h_mu with AWGN power.
 *
 * The derived circulant eigenvalues diagonalize the post-CP-removal system:
 * dft(circular_convolve(s)) == lambda .* dft(s).
 */
struct ChannelModel {
    std::vector<double> taps;
    double noise_power = 0.0; // sigma_n^2, linear units
    int n_subcarriers = 0;
    std::vector<cplx> eigenvalues; // filled by make_channel

    int memory() const { return static_cast<int>(taps.size()) - 1; }
};

inline ChannelModel make_channel(std::vector<double> taps, double noise_power,
                                 int n_subcarriers) {
    if (taps.empty()) throw ConfigError("channel needs at least one tap");
    if (static_cast<int>(taps.size()) > n_subcarriers)
        throw SizingError("channel has more taps than subcarriers");
    for (double h : taps)
        if (!std::isfinite(h)) throw ConfigError("channel taps must be finite");
    if (taps.front() == 0.0) throw ConfigError("leading channel tap must be nonzero");
    if (noise_power < 0.0) throw DomainError("noise power must be nonnegative");
    if (!is_power_of_two(static_cast<std::size_t>(n_subcarriers)))
        throw SizingError("subcarrier count must be a power of two");
    ChannelModel ch;
    ch.taps = std::move(taps);
    ch.noise_power = noise_power;
    ch.n_subcarriers = n_subcarriers;
    ch.eigenvalues = eigenvalues_unchecked(ch.taps, n_subcarriers);
    return ch;
}

/// Eigenvalues with the zero-forcing precondition enforced.
inline const std::vector<cplx>& channel_eigenvalues(const ChannelModel& ch) {
    for (const auto& lambda : ch.eigenvalues)
        if (std::abs(lambda) < kSingularEigenvalueThreshold)
            throw SingularChannelError("channel eigenvalue below " +
                                       std::to_string(kSingularEigenvalueThreshold) +
                                       "; zero-forcing equalizer undefined");
    return ch.eigenvalues;
}

/// y = H s with H circulant; models the post-CP-removal equivalent system.
inline std::vector<double> circular_convolve(const std::vector<double>& signal,
                                             const ChannelModel& ch) {
    const std::size_t n = signal.size();
    if (ch.taps.size() > n)
        throw SizingError("more channel taps than signal samples");
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t m = 0; m < ch.taps.size(); ++m)
            acc += ch.taps[m] * signal[(i + n - m) % n];
        out[i] = acc;
    }
    return out;
}

/// Linear convolution with zero prehistory, truncated to the input length.
/// This is what the physical front end applies to the CP-bearing signal.
inline std::vector<double> fir_filter(const std::vector<double>& signal,
                                      const std::vector<double>& taps) {
    std::vector<double> out(signal.size(), 0.0);
    for (std::size_t i = 0; i < signal.size(); ++i) {
        double acc = 0.0;
        const std::size_t mmax = std::min(taps.size() - 1, i);
        for (std::size_t m = 0; m <= mmax; ++m) acc += taps[m] * signal[i - m];
        out[i] = acc;
    }
    return out;
}

/// Adds i.i.d. zero-mean Gaussian samples of variance sigma2.
inline std::vector<double> add_awgn(std::vector<double> signal, double sigma2,
                                    RngStream& rng) {
    if (sigma2 < 0.0) throw DomainError("noise variance must be nonnegative");
    if (sigma2 == 0.0) return signal;
    const double sigma = std::sqrt(sigma2);
    for (auto& s : signal) s += rng.gaussian(sigma);
    return signal;
}

/**
 * @brief LED front-end operating point.
 *
 * The LED's active region is [v_th, v_st] and the bias sits at v_dc; the
 * drive signal (bias-relative) is clipped to [B, T] = [v_th-v_dc, v_st-v_dc]
 * after amplification.
 */
struct ClipperConfig {
    double v_th = 2.65;
    double v_st = 3.15;
    double v_dc = 2.90;
    double gain = 1.0;

    double bottom() const { return v_th - v_dc; }
    double top() const { return v_st - v_dc; }

    void validate() const {
        if (!(v_th < v_dc && v_dc < v_st))
            throw ConfigError("clipper requires v_th < v_dc < v_st");
        if (!(gain > 0.0)) throw ConfigError("amplifier gain must be positive");
    }

    /// Bias-relative construction: bounds [bottom, top] around a zero bias.
    static ClipperConfig from_bounds(double bottom, double top, double gain = 1.0) {
        ClipperConfig cfg;
        cfg.v_dc = 0.0;
        cfg.v_th = bottom;
        cfg.v_st = top;
        cfg.gain = gain;
        cfg.validate();
        return cfg;
    }

    /// Same LED with the bias shifted by delta volts; bounds move to
    /// [B - delta, T - delta].
    ClipperConfig with_dc_shift(double delta) const {
        ClipperConfig cfg = *this;
        cfg.v_dc += delta;
        cfg.validate();
        return cfg;
    }

    ClipperConfig with_gain(double g) const {
        ClipperConfig cfg = *this;
        cfg.gain = g;
        cfg.validate();
        return cfg;
    }
};

/// Amplify by cfg.gain and clamp elementwise to [B, T].
inline std::vector<double> clip(const std::vector<double>& signal, const ClipperConfig& cfg) {
    cfg.validate();
    const double b = cfg.bottom();
    const double t = cfg.top();
    std::vector<double> out(signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i)
        out[i] = std::clamp(cfg.gain * signal[i], b, t);
    return out;
}

/// Exponentially decaying tap profile h_m = exp(-m/tau), m = 0..mu,
/// normalized to unit DC gain. Desk-scale stand-in for a measured response.
inline std::vector<double> exponential_taps(int mu, double tau) {
    if (mu < 0) throw ConfigError("channel memory must be nonnegative");
    if (!(tau > 0.0)) throw ConfigError("decay constant must be positive");
    std::vector<double> taps(static_cast<std::size_t>(mu) + 1);
    double sum = 0.0;
    for (int m = 0; m <= mu; ++m) {
        taps[static_cast<std::size_t>(m)] = std::exp(-static_cast<double>(m) / tau);
        sum += taps[static_cast<std::size_t>(m)];
    }
    for (auto& h : taps) h /= sum;
    return taps;
}

/// Loads one tap per line; blank lines and '#' comments are skipped.
inline std::vector<double> load_taps(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open tap file: " + path);
    std::vector<double> taps;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double v;
        if (ss >> v) taps.push_back(v);
    }
    if (taps.empty()) throw ConfigError("tap file contains no taps: " + path);
    return taps;
}

} // namespace oofdm
