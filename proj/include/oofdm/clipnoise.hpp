#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "oofdm/errors.hpp"
#include "oofdm/rng.hpp"

namespace oofdm {

/// Standard normal upper-tail probability Q(x) = P(Z > x).
inline double gauss_q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Standard normal density.
inline double gauss_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// First derivative of the standard normal density, phi'(x) = -x phi(x).
inline double gauss_pdf_prime(double x) { return -x * gauss_pdf(x); }

/// One clipping scenario: a zero-mean Gaussian drive of variance sigma_x2
/// clamped to [bottom, top].
struct ClipRegime {
    double sigma_x2;
    double bottom;
    double top;

    void validate() const {
        if (!(sigma_x2 > 0.0)) throw DomainError("drive variance must be positive");
        if (!(bottom < top)) throw DomainError("clip bounds must satisfy bottom < top");
    }
};

/**
 * @brief Conditional moments of X ~ N(0, sigma_x2) split at the clip bounds.
 *
 * "low" is X < bottom, "mid" is bottom <= X <= top, "high" is X > top. Tail
 * conditional means fall back to the adjacent bound when the tail carries no
 * probability at double precision.
 */
struct TruncatedMoments {
    double p_low;
    double p_mid;
    double p_high;
    double mean_low;
    double mean_mid;
    double mean_high;
    double second_mid; // E[X^2 | mid]
};

inline TruncatedMoments truncated_moments(const ClipRegime& r) {
    r.validate();
    const double sigma = std::sqrt(r.sigma_x2);
    const double b = r.bottom / sigma;
    const double t = r.top / sigma;
    TruncatedMoments m;
    m.p_low = gauss_q(-b);
    m.p_high = gauss_q(t);
    m.p_mid = gauss_q(b) - gauss_q(t);
    if (m.p_mid <= 1e-15)
        throw DomainError("clip window carries negligible probability");
    m.mean_mid = -sigma * (gauss_pdf(t) - gauss_pdf(b)) / m.p_mid;
    m.second_mid =
        r.sigma_x2 * (1.0 + (gauss_pdf_prime(t) - gauss_pdf_prime(b)) / m.p_mid);
    m.mean_low = m.p_low > 0.0 ? -sigma * gauss_pdf(b) / m.p_low : r.bottom;
    m.mean_high = m.p_high > 0.0 ? sigma * gauss_pdf(t) / m.p_high : r.top;
    return m;
}

/// E[clamp(X, bottom, top)] for X ~ N(0, sigma_x2). The residual DC the
/// clipper leaves on one branch.
inline double clipped_mean(const ClipRegime& r) {
    r.validate();
    const double sigma = std::sqrt(r.sigma_x2);
    const double b = r.bottom / sigma;
    const double t = r.top / sigma;
    return -sigma * (gauss_pdf(t) - gauss_pdf(b)) + r.bottom * gauss_q(-b) +
           r.top * gauss_q(t);
}

/**
 * @brief Distortion power E[(clamp(X) - X)^2] of one clipped Gaussian branch.
 *
 * Grouped so every term vanishes with the tail probabilities; returns exactly
 * zero when both tails are below 1e-30 and clipping is physically absent.
 */
inline double clip_noise_power_single(const ClipRegime& r) {
    r.validate();
    const double sigma = std::sqrt(r.sigma_x2);
    const double b = r.bottom / sigma;
    const double t = r.top / sigma;
    const double q_low = gauss_q(-b); // P(X < bottom)
    const double q_high = gauss_q(t); // P(X > top)
    if (q_low < 1e-30 && q_high < 1e-30) return 0.0;
    const double p = r.sigma_x2 * (q_low + q_high - b * gauss_pdf(b) + t * gauss_pdf(t)) +
                     r.bottom * r.bottom * q_low + r.top * r.top * q_high +
                     2.0 * r.bottom * sigma * gauss_pdf(b) -
                     2.0 * r.top * sigma * gauss_pdf(t);
    return std::max(0.0, p);
}

/**
 * @brief Total distortion power of two optically summed branches.
 *
 * Each branch carries half the total drive variance; the branch distortions
 * are independent but share a common DC offset, hence the mean-squared term.
 */
inline double clip_noise_power_ocrip(double sigma_x2, double bottom, double top) {
    const ClipRegime branch{0.5 * sigma_x2, bottom, top};
    const double p1 = clip_noise_power_single(branch);
    const double m1 = clipped_mean(branch);
    return 2.0 * p1 + 2.0 * m1 * m1;
}

struct MonteCarloEstimate {
    double value;
    double std_error;
};

inline MonteCarloEstimate mc_clip_noise_power_single(const ClipRegime& r,
                                                     std::int64_t n_samples,
                                                     RngStream& rng) {
    r.validate();
    if (n_samples < 2) throw SizingError("need at least two samples");
    const double sigma = std::sqrt(r.sigma_x2);
    long double sum = 0.0L;
    long double sum_sq = 0.0L;
    for (std::int64_t i = 0; i < n_samples; ++i) {
        const double x = rng.gaussian(sigma);
        const double d = std::clamp(x, r.bottom, r.top) - x;
        const long double d2 = static_cast<long double>(d) * d;
        sum += d2;
        sum_sq += d2 * d2;
    }
    const double mean = static_cast<double>(sum / n_samples);
    const double var = static_cast<double>(sum_sq / n_samples) - mean * mean;
    return {mean, std::sqrt(std::max(0.0, var) / static_cast<double>(n_samples))};
}

/// Two branches at half variance each, distortions summed before squaring.
inline MonteCarloEstimate mc_clip_noise_power_ocrip(double sigma_x2, double bottom,
                                                    double top, std::int64_t n_samples,
                                                    RngStream& rng) {
    const ClipRegime branch{0.5 * sigma_x2, bottom, top};
    branch.validate();
    if (n_samples < 2) throw SizingError("need at least two samples");
    const double sigma = std::sqrt(branch.sigma_x2);
    long double sum = 0.0L;
    long double sum_sq = 0.0L;
    for (std::int64_t i = 0; i < n_samples; ++i) {
        const double x1 = rng.gaussian(sigma);
        const double x2 = rng.gaussian(sigma);
        const double d = (std::clamp(x1, bottom, top) - x1) +
                         (std::clamp(x2, bottom, top) - x2);
        const long double d2 = static_cast<long double>(d) * d;
        sum += d2;
        sum_sq += d2 * d2;
    }
    const double mean = static_cast<double>(sum / n_samples);
    const double var = static_cast<double>(sum_sq / n_samples) - mean * mean;
    return {mean, std::sqrt(std::max(0.0, var) / static_cast<double>(n_samples))};
}

inline MonteCarloEstimate mc_clipped_mean(const ClipRegime& r, std::int64_t n_samples,
                                          RngStream& rng) {
    r.validate();
    if (n_samples < 2) throw SizingError("need at least two samples");
    const double sigma = std::sqrt(r.sigma_x2);
    long double sum = 0.0L;
    long double sum_sq = 0.0L;
    for (std::int64_t i = 0; i < n_samples; ++i) {
        const double c = std::clamp(rng.gaussian(sigma), r.bottom, r.top);
        sum += c;
        sum_sq += static_cast<long double>(c) * c;
    }
    const double mean = static_cast<double>(sum / n_samples);
    const double var = static_cast<double>(sum_sq / n_samples) - mean * mean;
    return {mean, std::sqrt(std::max(0.0, var) / static_cast<double>(n_samples))};
}

/// One row of a clipping-noise sweep: closed-form predictions next to their
/// Monte-Carlo checks at a common total drive variance.
struct ClipNoiseReport {
    double sigma_x2;
    double analytic_single;
    double analytic_ocrip;
    double mc_single;
    double mc_ocrip;
    double mc_std_error; // larger of the two Monte-Carlo standard errors
};

} // namespace oofdm
