#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "oofdm/modulation.hpp"
#include "oofdm/rng.hpp"

using oofdm::Constellation;
using oofdm::ModulationSpec;

TEST_SUITE("modulation") {

TEST_CASE("gray codes of adjacent indices differ in exactly one bit") {
    for (std::uint32_t i = 0; i + 1 < 64; ++i) {
        const auto a = oofdm::detail::gray_encode(i);
        const auto b = oofdm::detail::gray_encode(i + 1);
        CHECK(std::popcount(a ^ b) == 1);
        CHECK(oofdm::detail::gray_decode(a) == i);
    }
}

TEST_CASE("4-PAM mapping follows the Gray ladder 00 01 11 10") {
    const ModulationSpec spec{Constellation::Pam, 4};
    const double s = spec.amplitude_scale();
    const std::vector<std::uint8_t> bits{0, 0, 0, 1, 1, 1, 1, 0};
    const auto symbols = oofdm::map_bits(bits, spec);
    REQUIRE(symbols.values.size() == 4);
    CHECK(symbols.values[0].real() == doctest::Approx(-3.0 * s).epsilon(1e-14));
    CHECK(symbols.values[1].real() == doctest::Approx(-1.0 * s).epsilon(1e-14));
    CHECK(symbols.values[2].real() == doctest::Approx(1.0 * s).epsilon(1e-14));
    CHECK(symbols.values[3].real() == doctest::Approx(3.0 * s).epsilon(1e-14));
    for (const auto& v : symbols.values) CHECK(v.imag() == 0.0);
}

TEST_CASE("constellations have unit mean symbol energy") {
    for (int m : {2, 4, 8, 16, 32}) {
        const ModulationSpec pam{Constellation::Pam, m};
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            const double level = (2.0 * i - (m - 1)) * pam.amplitude_scale();
            acc += level * level;
        }
        CHECK(acc / m == doctest::Approx(1.0).epsilon(1e-13));

        const ModulationSpec qam{Constellation::Qam, m};
        double acc2 = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double re = (2.0 * i - (m - 1)) * qam.amplitude_scale();
                const double im = (2.0 * j - (m - 1)) * qam.amplitude_scale();
                acc2 += re * re + im * im;
            }
        CHECK(acc2 / (m * m) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("map then demap is the identity for every bit pattern") {
    for (int m : {2, 4, 8, 16}) {
        const ModulationSpec pam{Constellation::Pam, m};
        const int bps = pam.bits_per_symbol();
        for (std::uint32_t pattern = 0; pattern < (1u << bps); ++pattern) {
            std::vector<std::uint8_t> bits(static_cast<std::size_t>(bps));
            for (int b = 0; b < bps; ++b)
                bits[static_cast<std::size_t>(b)] =
                    static_cast<std::uint8_t>((pattern >> (bps - 1 - b)) & 1u);
            const auto symbols = oofdm::map_bits(bits, pam);
            std::vector<double> soft{symbols.values[0].real()};
            CHECK(oofdm::demap_symbols(soft, pam) == bits);
        }
    }
    for (int m : {2, 4, 8, 16, 64}) {
        const ModulationSpec qam{Constellation::Qam, m};
        const int bps = qam.bits_per_symbol();
        for (std::uint32_t pattern = 0; pattern < (1u << bps); ++pattern) {
            std::vector<std::uint8_t> bits(static_cast<std::size_t>(bps));
            for (int b = 0; b < bps; ++b)
                bits[static_cast<std::size_t>(b)] =
                    static_cast<std::uint8_t>((pattern >> (bps - 1 - b)) & 1u);
            const auto symbols = oofdm::map_bits(bits, qam);
            CHECK(oofdm::demap_symbols(symbols.values, qam) == bits);
        }
    }
}

TEST_CASE("demap survives perturbations inside half the level spacing") {
    oofdm::RngStream rng(201);
    const ModulationSpec spec{Constellation::Pam, 8};
    const double margin = 0.95 * spec.amplitude_scale();
    const auto bits = rng.bits(3 * 4096);
    const auto symbols = oofdm::map_bits(bits, spec);
    std::vector<double> soft;
    for (const auto& v : symbols.values)
        soft.push_back(v.real() + margin * (2.0 * rng.uniform() - 1.0));
    CHECK(oofdm::demap_symbols(soft, spec) == bits);
}

TEST_CASE("decision ties resolve toward the smaller-magnitude level") {
    const int m = 4;
    const ModulationSpec spec{Constellation::Pam, m};
    const double s = spec.amplitude_scale();
    // Midpoint of -3s and -1s belongs to -1s (index 1, Gray label 1); of +1s
    // and +3s to +1s (index 2, Gray label 3).
    CHECK(oofdm::detail::pam_decide(-2.0 * s, m, s) == oofdm::detail::gray_encode(1));
    CHECK(oofdm::detail::pam_decide(2.0 * s, m, s) == oofdm::detail::gray_encode(2));
    // Exactly zero belongs to the negative inner level.
    CHECK(oofdm::detail::pam_decide(0.0, m, s) == oofdm::detail::gray_encode(1));
    CHECK(oofdm::detail::pam_decide(0.0, 2, 1.0) == 0);
}

TEST_CASE("far outliers clamp to the outermost levels") {
    const ModulationSpec spec{Constellation::Pam, 4};
    const double s = spec.amplitude_scale();
    CHECK(oofdm::detail::pam_decide(100.0, 4, s) == oofdm::detail::gray_encode(3));
    CHECK(oofdm::detail::pam_decide(-100.0, 4, s) == oofdm::detail::gray_encode(0));
}

TEST_CASE("bit-count and order validation") {
    const ModulationSpec spec{Constellation::Qam, 4};
    CHECK_THROWS_AS(oofdm::map_bits(std::vector<std::uint8_t>{1, 0, 1}, spec),
                    oofdm::SizingError);
    CHECK_THROWS_AS((ModulationSpec{Constellation::Pam, 3}.validate()), oofdm::ConfigError);
    CHECK_THROWS_AS((ModulationSpec{Constellation::Pam, 1}.validate()), oofdm::ConfigError);
}

TEST_CASE("real-valued demap overload matches the complex one") {
    oofdm::RngStream rng(202);
    const ModulationSpec spec{Constellation::Pam, 4};
    const auto bits = rng.bits(2 * 64);
    const auto symbols = oofdm::map_bits(bits, spec);
    std::vector<double> soft;
    for (const auto& v : symbols.values) soft.push_back(v.real());
    CHECK(oofdm::demap_symbols(soft, spec) == oofdm::demap_symbols(symbols.values, spec));
}

} // TEST_SUITE
