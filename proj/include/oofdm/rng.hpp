#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace oofdm {

namespace detail {

inline constexpr std::uint64_t kStreamSalt = 0x9e3779b97f4a7c15ULL;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

/**
 * @brief Deterministic random stream identified by (seed, stream id).
 *
 * The same (seed, id) pair always reproduces the same sequence of bits and
 * Gaussian samples. Streams with distinct ids are statistically independent
 * for simulation purposes. A stream is single-owner: parallel trials must
 * each derive their own stream via derive().
 */
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), id_(stream_id),
          engine_(detail::splitmix64(detail::splitmix64(seed) ^
                                     detail::kStreamSalt * (stream_id + 1))) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t id() const { return id_; }

    /// Child stream; mixing is hierarchical so derive(a).derive(b) differs
    /// from derive(b).derive(a).
    RngStream derive(std::uint64_t sub_id) const {
        std::uint64_t child = detail::splitmix64(detail::splitmix64(id_) ^
                                                 detail::kStreamSalt * (sub_id + 1));
        return RngStream(seed_, child);
    }

    /// One fair bit.
    std::uint8_t bit() { return static_cast<std::uint8_t>(engine_() >> 63); }

    std::vector<std::uint8_t> bits(std::size_t count) {
        std::vector<std::uint8_t> out(count);
        for (auto& b : out) b = bit();
        return out;
    }

    /// Zero-mean Gaussian sample with the given standard deviation.
    double gaussian(double sigma) { return sigma * normal_(engine_); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t raw() { return engine_(); }

  private:
    std::uint64_t seed_;
    std::uint64_t id_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace oofdm
