#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "oofdm/errors.hpp"
#include "oofdm/transforms.hpp"

namespace oofdm {

enum class Constellation { Pam, Qam };

/**
 * @brief Modulation description: M-PAM or M^2-QAM with Gray labeling.
 *
 * `order` is the per-dimension depth M (a power of two >= 2); a QAM
 * constellation is the Cartesian product of two M-PAM sets and carries
 * 2*log2(M) bits per symbol. Amplitudes are scaled so the mean symbol
 * energy is exactly 1.
 */
struct ModulationSpec {
    Constellation kind = Constellation::Pam;
    int order = 2;

    int bits_per_dimension() const { return log2_exact(static_cast<std::size_t>(order)); }

    int bits_per_symbol() const {
        return kind == Constellation::Qam ? 2 * bits_per_dimension() : bits_per_dimension();
    }

    /// Per-dimension amplitude scale giving unit mean symbol energy.
    double amplitude_scale() const {
        const double m2 = static_cast<double>(order) * order;
        const double dims = kind == Constellation::Qam ? 2.0 : 1.0;
        return std::sqrt(3.0 / (dims * (m2 - 1.0)));
    }

    void validate() const {
        if (order < 2 || !is_power_of_two(static_cast<std::size_t>(order)))
            throw ConfigError("modulation order M must be a power of two >= 2, got " +
                              std::to_string(order));
    }
};

/// Mapped data symbols together with the modulation that produced them.
struct SymbolVector {
    std::vector<cplx> values;
    ModulationSpec spec;
};

namespace detail {

inline std::uint32_t gray_encode(std::uint32_t i) { return i ^ (i >> 1); }

inline std::uint32_t gray_decode(std::uint32_t g) {
    std::uint32_t i = g;
    while (g >>= 1) i ^= g;
    return i;
}

/// Gray-labeled level for one PAM dimension: label bits (MSB first) -> level
/// index -> amplitude (2*index - (M-1)) * scale.
inline double pam_level(std::uint32_t label, int m, double scale) {
    const std::uint32_t index = gray_decode(label);
    return (2.0 * static_cast<double>(index) - (m - 1)) * scale;
}

/// Nearest-level decision with the documented tie rule: at a decision
/// boundary pick the smaller-magnitude level; at the 0 boundary pick the
/// negative one.
inline std::uint32_t pam_decide(double observed, int m, double scale) {
    const double u = observed / scale; // back to odd-integer lattice
    double low = std::floor((u + (m - 1)) / 2.0);
    if (low < 0) low = 0;
    if (low > m - 2) low = m - 2;
    const std::uint32_t i0 = static_cast<std::uint32_t>(low);
    const double l0 = 2.0 * i0 - (m - 1);
    const double l1 = l0 + 2.0;
    const double d0 = std::abs(u - l0);
    const double d1 = std::abs(u - l1);
    std::uint32_t index;
    if (d0 < d1) {
        index = i0;
    } else if (d1 < d0) {
        index = i0 + 1;
    } else {
        index = std::abs(l1) < std::abs(l0) ? i0 + 1 : i0;
    }
    return gray_encode(index);
}

inline void push_label_bits(std::vector<std::uint8_t>& bits, std::uint32_t label, int count) {
    for (int b = count - 1; b >= 0; --b)
        bits.push_back(static_cast<std::uint8_t>((label >> b) & 1u));
}

inline std::uint32_t read_label_bits(const std::vector<std::uint8_t>& bits,
                                     std::size_t offset, int count) {
    std::uint32_t label = 0;
    for (int b = 0; b < count; ++b)
        label = (label << 1) | (bits[offset + static_cast<std::size_t>(b)] & 1u);
    return label;
}

} // namespace detail

/**
 * @brief Map a bit sequence to Gray-labeled, unit-mean-energy symbols.
 *
 * PAM consumes log2(M) bits per symbol; QAM consumes 2*log2(M), the first
 * half addressing the in-phase dimension and the second half the quadrature.
 */
inline SymbolVector map_bits(const std::vector<std::uint8_t>& bits, const ModulationSpec& spec) {
    spec.validate();
    const int bps = spec.bits_per_symbol();
    if (bits.size() % static_cast<std::size_t>(bps) != 0)
        throw SizingError("bit count " + std::to_string(bits.size()) +
                          " is not a multiple of " + std::to_string(bps) +
                          " bits per symbol");
    const int bpd = spec.bits_per_dimension();
    const double scale = spec.amplitude_scale();
    SymbolVector out;
    out.spec = spec;
    out.values.reserve(bits.size() / static_cast<std::size_t>(bps));
    for (std::size_t pos = 0; pos < bits.size(); pos += static_cast<std::size_t>(bps)) {
        const double re = detail::pam_level(detail::read_label_bits(bits, pos, bpd),
                                            spec.order, scale);
        double im = 0.0;
        if (spec.kind == Constellation::Qam)
            im = detail::pam_level(
                detail::read_label_bits(bits, pos + static_cast<std::size_t>(bpd), bpd),
                spec.order, scale);
        out.values.emplace_back(re, im);
    }
    return out;
}

/// Minimum-distance decision per symbol followed by inverse Gray labeling.
inline std::vector<std::uint8_t> demap_symbols(const std::vector<cplx>& observed,
                                               const ModulationSpec& spec) {
    spec.validate();
    const int bpd = spec.bits_per_dimension();
    const double scale = spec.amplitude_scale();
    std::vector<std::uint8_t> bits;
    bits.reserve(observed.size() * static_cast<std::size_t>(spec.bits_per_symbol()));
    for (const auto& s : observed) {
        detail::push_label_bits(bits, detail::pam_decide(s.real(), spec.order, scale), bpd);
        if (spec.kind == Constellation::Qam)
            detail::push_label_bits(bits, detail::pam_decide(s.imag(), spec.order, scale), bpd);
    }
    return bits;
}

inline std::vector<std::uint8_t> demap_symbols(const std::vector<double>& observed,
                                               const ModulationSpec& spec) {
    std::vector<cplx> c(observed.begin(), observed.end());
    return demap_symbols(c, spec);
}

} // namespace oofdm
