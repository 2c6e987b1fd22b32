#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "oofdm/errors.hpp"
#include "oofdm/modulation.hpp"
#include "oofdm/transforms.hpp"

namespace oofdm {

enum class FrameKind { Hermitian, Crip };

/**
 * @brief Length-N subcarrier vector ready for the IDFT.
 *
 * Hermitian frames satisfy bins[0] = bins[N/2] = 0 and
 * bins[k] = conj(bins[N-k]); CRIP frames are purely real and leave bin 0
 * empty unless s0_loaded.
 */
struct FrequencyFrame {
    std::vector<cplx> bins;
    FrameKind kind = FrameKind::Crip;
    bool s0_loaded = false;

    int n() const { return static_cast<int>(bins.size()); }
};

namespace detail {

inline void check_frame_length(int n) {
    if (n < 4 || !is_power_of_two(static_cast<std::size_t>(n)))
        throw SizingError("subcarrier count must be a power of two >= 4, got " +
                          std::to_string(n));
}

} // namespace detail

/**
 * @brief Arrange N/2-1 complex symbols in the Hermitian-symmetric pattern
 * [0, x0, ..., x_{N/2-2}, 0, x*_{N/2-2}, ..., x*_0].
 */
inline FrequencyFrame build_hermitian_frame(const std::vector<cplx>& x, int n) {
    detail::check_frame_length(n);
    const std::size_t expected = static_cast<std::size_t>(n) / 2 - 1;
    if (x.size() != expected)
        throw SizingError("Hermitian frame needs N/2-1 = " + std::to_string(expected) +
                          " symbols, got " + std::to_string(x.size()));
    FrequencyFrame frame;
    frame.kind = FrameKind::Hermitian;
    frame.s0_loaded = false;
    frame.bins.assign(static_cast<std::size_t>(n), cplx{0.0, 0.0});
    for (std::size_t k = 0; k < expected; ++k) {
        frame.bins[k + 1] = x[k];
        frame.bins[static_cast<std::size_t>(n) - 1 - k] = std::conj(x[k]);
    }
    return frame;
}

/**
 * @brief Place real symbols directly on the subcarriers; when s0_loaded is
 * false bin 0 stays empty and x fills bins 1..N-1.
 */
inline FrequencyFrame build_crip_frame(const std::vector<cplx>& x, int n, bool s0_loaded) {
    detail::check_frame_length(n);
    for (const auto& v : x)
        if (v.imag() != 0.0)
            throw DomainError("CRIP frames carry real-valued symbols only");
    const std::size_t expected = static_cast<std::size_t>(s0_loaded ? n : n - 1);
    if (x.size() != expected)
        throw SizingError("CRIP frame needs " + std::to_string(expected) +
                          " symbols, got " + std::to_string(x.size()));
    FrequencyFrame frame;
    frame.kind = FrameKind::Crip;
    frame.s0_loaded = s0_loaded;
    frame.bins.assign(static_cast<std::size_t>(n), cplx{0.0, 0.0});
    const std::size_t offset = s0_loaded ? 0 : 1;
    for (std::size_t k = 0; k < x.size(); ++k) frame.bins[k + offset] = x[k];
    return frame;
}

inline FrequencyFrame build_crip_frame(const std::vector<double>& x, int n, bool s0_loaded) {
    std::vector<cplx> c(x.begin(), x.end());
    return build_crip_frame(c, n, s0_loaded);
}

/// Peak error-free throughput of one frame (cyclic prefix excluded).
struct FrameRate {
    std::int64_t bits_per_frame = 0;
    double bits_per_second = 0.0;
};

/**
 * @brief Bits per frame and bitrate at bandwidth W.
 *
 * Hermitian carries (N-2)*log2(M) bits, CRIP N*log2(M) with the first
 * subcarrier loaded and (N-1)*log2(M) without; bitrate is W * bits / N.
 */
inline FrameRate frame_rate(FrameKind kind, int n, int m, bool s0_loaded,
                            double bandwidth_hz) {
    detail::check_frame_length(n);
    if (m < 2 || !is_power_of_two(static_cast<std::size_t>(m)))
        throw ConfigError("modulation depth M must be a power of two >= 2");
    const std::int64_t log2m = log2_exact(static_cast<std::size_t>(m));
    std::int64_t bits = 0;
    if (kind == FrameKind::Hermitian)
        bits = (static_cast<std::int64_t>(n) - 2) * log2m;
    else
        bits = (static_cast<std::int64_t>(n) - (s0_loaded ? 0 : 1)) * log2m;
    FrameRate rate;
    rate.bits_per_frame = bits;
    rate.bits_per_second = bandwidth_hz * static_cast<double>(bits) / static_cast<double>(n);
    return rate;
}

} // namespace oofdm
