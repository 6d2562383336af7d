#pragma once

#include <cstdint>
#include <random>

namespace uam {

/// Named random streams. Every random quantity in a run is drawn from an
/// engine seeded as split_seed(master, stream, index); adding a new stream
/// constant never perturbs draws from existing ones.
enum class SeedStream : std::uint64_t {
    NetworkInit = 1,
    Scenario = 2,
    Exploration = 3,
    BatchSample = 4,
    Evaluation = 5,
    Stage = 6,
};

/// SplitMix64-based seed derivation: collision-resistant mixing of
/// (master, stream, index) into one 64-bit engine seed.
std::uint64_t split_seed(std::uint64_t master, SeedStream stream, std::uint64_t index);

std::mt19937_64 make_engine(std::uint64_t master, SeedStream stream, std::uint64_t index);

/// Uniform double in [lo, hi) built from the top 53 bits of one engine
/// draw; bit-reproducible across platforms, unlike
/// std::uniform_real_distribution.
double uniform_double(std::mt19937_64& rng, double lo, double hi);

/// Uniform integer in [0, n), n >= 1.
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n);

}  // namespace uam
