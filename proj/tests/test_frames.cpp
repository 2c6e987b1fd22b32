#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "oofdm/frames.hpp"
#include "oofdm/rng.hpp"

using oofdm::cplx;
using oofdm::FrameKind;

TEST_SUITE("frames") {

TEST_CASE("hermitian frames satisfy the conjugate symmetry invariant") {
    oofdm::RngStream rng(301);
    const int n = 64;
    std::vector<cplx> x(static_cast<std::size_t>(n / 2 - 1));
    for (auto& v : x) v = {rng.gaussian(1.0), rng.gaussian(1.0)};
    const auto frame = oofdm::build_hermitian_frame(x, n);
    CHECK(frame.kind == FrameKind::Hermitian);
    CHECK(frame.n() == n);
    CHECK(frame.bins[0] == cplx{0.0, 0.0});
    CHECK(frame.bins[static_cast<std::size_t>(n / 2)] == cplx{0.0, 0.0});
    for (int k = 1; k < n / 2; ++k) {
        CHECK(frame.bins[static_cast<std::size_t>(k)] == x[static_cast<std::size_t>(k - 1)]);
        CHECK(frame.bins[static_cast<std::size_t>(n - k)] ==
              std::conj(frame.bins[static_cast<std::size_t>(k)]));
    }
}

TEST_CASE("hermitian frame needs exactly N/2-1 symbols") {
    std::vector<cplx> x(5, cplx{1.0, 0.0});
    CHECK_THROWS_AS(oofdm::build_hermitian_frame(x, 16), oofdm::SizingError);
    std::vector<cplx> y(7, cplx{1.0, 0.0});
    CHECK_NOTHROW(oofdm::build_hermitian_frame(y, 16));
}

TEST_CASE("crip frame places symbols identically when the first bin is loaded") {
    const auto frame =
        oofdm::build_crip_frame(std::vector<double>{1.0, -1.0, 3.0, -3.0}, 4, true);
    CHECK(frame.kind == FrameKind::Crip);
    CHECK(frame.s0_loaded);
    const std::vector<double> want{1.0, -1.0, 3.0, -3.0};
    for (int k = 0; k < 4; ++k) {
        CHECK(frame.bins[static_cast<std::size_t>(k)].real() == want[static_cast<std::size_t>(k)]);
        CHECK(frame.bins[static_cast<std::size_t>(k)].imag() == 0.0);
    }
}

TEST_CASE("crip frame leaves the first bin empty when not loaded") {
    const auto frame = oofdm::build_crip_frame(std::vector<double>{1.0, -1.0, 3.0}, 4, false);
    CHECK_FALSE(frame.s0_loaded);
    CHECK(frame.bins[0] == cplx{0.0, 0.0});
    CHECK(frame.bins[1].real() == 1.0);
    CHECK(frame.bins[2].real() == -1.0);
    CHECK(frame.bins[3].real() == 3.0);
}

TEST_CASE("crip frame rejects complex symbols and wrong lengths") {
    std::vector<cplx> complex_x{{1.0, 0.5}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(oofdm::build_crip_frame(complex_x, 4, true), oofdm::DomainError);
    CHECK_THROWS_AS(oofdm::build_crip_frame(std::vector<double>{1.0, 2.0}, 8, true),
                    oofdm::SizingError);
    CHECK_THROWS_AS(oofdm::build_crip_frame(std::vector<double>{1.0, 2.0, 3.0}, 8, false),
                    oofdm::SizingError);
}

TEST_CASE("frame length must be a power of two of at least 4") {
    std::vector<double> x(5, 1.0);
    CHECK_THROWS_AS(oofdm::build_crip_frame(x, 5, true), oofdm::SizingError);
    CHECK_THROWS_AS(oofdm::build_crip_frame(std::vector<double>{1.0, 1.0}, 2, true),
                    oofdm::SizingError);
}

TEST_CASE("published bitrates at N=64, M=8, W=100 MHz") {
    const double w = 1e8;
    const auto herm = oofdm::frame_rate(FrameKind::Hermitian, 64, 8, false, w);
    const auto loaded = oofdm::frame_rate(FrameKind::Crip, 64, 8, true, w);
    const auto empty = oofdm::frame_rate(FrameKind::Crip, 64, 8, false, w);
    CHECK(herm.bits_per_frame == 186);
    CHECK(loaded.bits_per_frame == 192);
    CHECK(empty.bits_per_frame == 189);
    CHECK(herm.bits_per_second == 290625000.0);
    CHECK(loaded.bits_per_second == 290625000.0 + 9375000.0);
    CHECK(empty.bits_per_second == 290625000.0 + 4687500.0);
}

TEST_CASE("rate gap over Hermitian is 2 log2 M loaded and log2 M empty") {
    for (int n : {8, 16, 64, 256}) {
        for (int m : {2, 4, 8, 16}) {
            const auto h = oofdm::frame_rate(FrameKind::Hermitian, n, m, false, 1.0);
            const auto l = oofdm::frame_rate(FrameKind::Crip, n, m, true, 1.0);
            const auto e = oofdm::frame_rate(FrameKind::Crip, n, m, false, 1.0);
            const auto log2m = static_cast<std::int64_t>(std::log2(m) + 0.5);
            CHECK(l.bits_per_frame - h.bits_per_frame == 2 * log2m);
            CHECK(e.bits_per_frame - h.bits_per_frame == log2m);
        }
    }
}

TEST_CASE("frame rate validates the modulation depth") {
    CHECK_THROWS_AS(oofdm::frame_rate(FrameKind::Crip, 64, 3, true, 1.0), oofdm::ConfigError);
    CHECK_THROWS_AS(oofdm::frame_rate(FrameKind::Crip, 6, 4, true, 1.0), oofdm::SizingError);
}

} // TEST_SUITE
