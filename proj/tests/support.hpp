#pragma once

#include <cstdint>
#include <random>

namespace nlqw_test {

/// Value of --seed (default 0).
std::uint64_t seed();

inline std::mt19937_64 rng(std::uint64_t salt)
{
    return std::mt19937_64{seed() ^ (salt * 0x9E3779B97F4A7C15ull)};
}

} // namespace nlqw_test
