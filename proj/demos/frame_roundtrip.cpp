// Sends one frame per scheme across a 3-tap channel and prints the bit
// error count, with and without receiver noise.
#include <oofdm/oofdm.hpp>

#include <cstdio>

int main() {
    using namespace oofdm;
    const int n = 64;
    const ChannelModel channel = make_channel({0.8, 0.15, 0.05}, 0.0, n);

    for (Scheme scheme : {Scheme::Hermitian, Scheme::ECrip, Scheme::OCrip}) {
        FrameConfig cfg;
        cfg.scheme = scheme;
        cfg.modulation = modulation_for(scheme, 4);
        cfg.cp_length = n / 8;

        RngStream rng(2024, 1);
        const int n_bits = cfg.bits_per_frame(n);
        const std::vector<std::uint8_t> tx_bits = rng.derive(0).bits(n_bits);

        auto count_errors = [&](const FrameResult& r) {
            int e = 0;
            for (int i = 0; i < n_bits; ++i) e += r.decoded[i] != tx_bits[i];
            return e;
        };

        RngStream clean_rng = rng.derive(1);
        const int clean = count_errors(run_frame(tx_bits, cfg, channel, clean_rng));

        cfg.noise_power = noise_power_for(10.0, 1.0, scheme, 4, n, cfg.s0_loaded);
        RngStream noisy_rng = rng.derive(2);
        const int noisy = count_errors(run_frame(tx_bits, cfg, channel, noisy_rng));

        std::printf("%-9s  clean bit errors: %d/%d   at 10 dB: %d/%d\n",
                    scheme_name(scheme), clean, n_bits, noisy, n_bits);
    }
    return 0;
}
