#pragma once

#include <cstdint>
#include <span>

namespace rscache {

/// splitmix64 (Steele, Lea, Flood 2014). Project-wide PRNG for seeded
/// graphs, libraries and demand draws: the whole generator is the one
/// function below, so seeded outputs are bit-identical on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// next() mod bound. Modulo bias is irrelevant at the bounds used here
    /// (file and vertex counts), and the residue rule keeps the draw
    /// sequence trivial to reproduce elsewhere.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    /// Uniform double in [0, 1) from the top 53 bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Fills bytes from successive next() words, least-significant byte first.
    void fill_bytes(std::span<std::uint8_t> out) {
        std::size_t i = 0;
        while (i < out.size()) {
            std::uint64_t w = next();
            for (int b = 0; b < 8 && i < out.size(); ++b, ++i)
                out[i] = static_cast<std::uint8_t>(w >> (8 * b));
        }
    }

private:
    std::uint64_t state_;
};

/// Stream seeds derived from one master seed: stream 0 is the first
/// splitmix output for the master, stream 1 the second, and so on.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    SplitMix64 g(master);
    std::uint64_t s = 0;
    for (std::uint64_t i = 0; i <= stream; ++i) s = g.next();
    return s;
}

} // namespace rscache
