#pragma once

#include <cstdint>
#include <random>

namespace morld {

// Portable random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the standard distributions are not, so
// the conversions below are done by hand to keep results identical across
// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0);

    // Independent stream for (seed, stream, index), derived through std::seed_seq.
    static Rng derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform01();

    // Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

// Stream identifiers. Each run component draws only from its own stream.
namespace stream {
inline constexpr std::uint64_t environment = 1;
inline constexpr std::uint64_t exploration = 2;
inline constexpr std::uint64_t buffer = 3;
inline constexpr std::uint64_t evaluation = 4;
inline constexpr std::uint64_t metrics = 5;
} // namespace stream

} // namespace morld
