#include "uamcap/rng.hpp"

#include <stdexcept>

namespace uam {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t split_seed(std::uint64_t master, SeedStream stream, std::uint64_t index) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ static_cast<std::uint64_t>(stream));
    s = splitmix64(s ^ index);
    return s;
}

std::mt19937_64 make_engine(std::uint64_t master, SeedStream stream, std::uint64_t index) {
    return std::mt19937_64(split_seed(master, stream, index));
}

double uniform_double(std::mt19937_64& rng, double lo, double hi) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be >= 1");
    // Lemire's multiply-shift; bias is O(n / 2^64), irrelevant at our sizes.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

}  // namespace uam
