#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "oofdm/errors.hpp"

namespace oofdm {

using cplx = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline int log2_exact(std::size_t n) {
    int p = 0;
    while ((std::size_t{1} << p) < n) ++p;
    return p;
}

namespace detail {

struct TwiddleTable {
    std::vector<std::size_t> bit_reverse; // permutation for size n
    std::vector<cplx> forward;            // exp(-i 2 pi k / n), k < n/2
};

inline std::shared_ptr<const TwiddleTable> twiddles_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const TwiddleTable>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    auto table = std::make_shared<TwiddleTable>();
    const int bits = log2_exact(n);
    table->bit_reverse.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < bits; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        table->bit_reverse[i] = r;
    }
    table->forward.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(n);
        table->forward[k] = cplx(std::cos(angle), std::sin(angle));
    }
    cache.emplace(n, table);
    return table;
}

/// Unnormalized radix-2 transform: sum_k x[k] exp(-+ i 2 pi k n / N).
inline void fft_unscaled(std::vector<cplx>& data, bool inverse) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n))
        throw SizingError("transform length must be a power of two, got " +
                          std::to_string(n));
    if (n == 1) return;

    const auto table = twiddles_for(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = table->bit_reverse[i];
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx w = table->forward[k * step];
                if (inverse) w = std::conj(w);
                const cplx even = data[start + k];
                const cplx odd = data[start + k + len / 2] * w;
                data[start + k] = even + odd;
                data[start + k + len / 2] = even - odd;
            }
        }
    }
}

} // namespace detail

/// Unitary DFT: X[k] = (1/sqrt(N)) sum_n x[n] exp(-i 2 pi k n / N).
inline std::vector<cplx> dft(std::vector<cplx> v) {
    detail::fft_unscaled(v, /*inverse=*/false);
    const double scale = 1.0 / std::sqrt(static_cast<double>(v.size()));
    for (auto& x : v) x *= scale;
    return v;
}

/// Unitary IDFT: x[n] = (1/sqrt(N)) sum_k X[k] exp(+i 2 pi k n / N).
inline std::vector<cplx> idft(std::vector<cplx> v) {
    detail::fft_unscaled(v, /*inverse=*/true);
    const double scale = 1.0 / std::sqrt(static_cast<double>(v.size()));
    for (auto& x : v) x *= scale;
    return v;
}

inline std::vector<cplx> dft_real(const std::vector<double>& v) {
    std::vector<cplx> c(v.begin(), v.end());
    return dft(std::move(c));
}

inline std::vector<cplx> idft_real(const std::vector<double>& v) {
    std::vector<cplx> c(v.begin(), v.end());
    return idft(std::move(c));
}

/**
 * @brief Real and imaginary parts of the IDFT of a real-valued frame.
 *
 * For a real input frame the real part is an even sequence
 * (out.first[N-n] == out.first[n]) and the imaginary part an odd one
 * (out.second[N-n] == -out.second[n]).
 */
inline std::pair<std::vector<double>, std::vector<double>>
split_even_odd_parts(const std::vector<double>& frame) {
    const auto s = idft_real(frame);
    std::vector<double> re(s.size()), im(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        re[i] = s[i].real();
        im[i] = s[i].imag();
    }
    return {std::move(re), std::move(im)};
}

/// Overload that rejects frames with any nonzero imaginary component.
inline std::pair<std::vector<double>, std::vector<double>>
split_even_odd_parts(const std::vector<cplx>& frame) {
    std::vector<double> real_frame(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) {
        if (frame[i].imag() != 0.0)
            throw DomainError("split_even_odd_parts requires a real-valued frame");
        real_frame[i] = frame[i].real();
    }
    return split_even_odd_parts(real_frame);
}

/// Real-multiplication / real-addition counts for one waveform synthesis.
struct OpCount {
    std::int64_t multiplications = 0;
    std::int64_t additions = 0;

    bool operator==(const OpCount&) const = default;
};

enum class OpCountMethod { OCrip, ECrip, Hermitian, Dct };

/**
 * @brief Closed-form transmitter-side operation counts.
 *
 * Baseline costs are C1 = (N/2)(log2 N - 3) + 2 multiplications and
 * C2 = (N/2)(3 log2 N - 5) + 4 additions for one length-N real-input
 * transform; the per-method counts are enumerated on top of that. This is a
 * model, not instrumentation of the transform used elsewhere in the library.
 */
inline OpCount op_count(OpCountMethod method, int n) {
    if (n < 8 || !is_power_of_two(static_cast<std::size_t>(n)))
        throw SizingError("op_count requires a power-of-two N >= 8, got " +
                          std::to_string(n));
    const std::int64_t nn = n;
    const std::int64_t log2n = log2_exact(static_cast<std::size_t>(n));
    const std::int64_t c1 = (nn / 2) * (log2n - 3) + 2;
    const std::int64_t c2 = (nn / 2) * (3 * log2n - 5) + 4;
    switch (method) {
        case OpCountMethod::OCrip:
            return {c1, c2};
        case OpCountMethod::ECrip:
            return {c1, c2 + nn};
        case OpCountMethod::Hermitian:
            return {2 * c1, 2 * c2 + 2 * nn - 4};
        case OpCountMethod::Dct:
            return {c1 + 3 * nn / 2 - 2, c2 + 3 * nn / 2 - 3};
    }
    throw ConfigError("unknown op_count method");
}

/// Receiver-side extras that accompany the transmitter counts: CRIP needs N
/// subtractions, Hermitian symmetry (N-2)/2 conjugations, DCT none modeled.
inline std::int64_t receiver_extra_ops(OpCountMethod method, int n) {
    switch (method) {
        case OpCountMethod::OCrip:
        case OpCountMethod::ECrip:
            return n;
        case OpCountMethod::Hermitian:
            return (n - 2) / 2;
        case OpCountMethod::Dct:
            return 0;
    }
    return 0;
}

} // namespace oofdm
