// Seeded uniform generator with a platform-independent [0,1) mapping.
#pragma once

#include <cstdint>
#include <random>

namespace dockmpc {

// One stream per controller instance; the (seed, stream) pair keeps the
// position and attitude controllers on independent, reproducible sequences.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                          static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream & 0xffffffffu),
                          static_cast<std::uint32_t>(stream >> 32)};
        gen_.seed(seq);
    }

    // Uniform double in [0, 1) using the top 53 bits; avoids the
    // implementation-defined behaviour of std::uniform_real_distribution.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace dockmpc
