#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace illumest::rnd {

// mt19937_64 output is fixed by the standard; the distributions in <random>
// are not, so bounded draws are done by hand to keep results identical
// across standard libraries.
using Engine = std::mt19937_64;

// Independent stream for a (seed, purpose) pair.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

// Uniform integer in [0, n), unbiased (rejection sampling). n must be >= 1.
std::uint64_t uniform_index(Engine& eng, std::uint64_t n);

// Uniform real in [0, 1) with 53 random bits.
double uniform_unit(Engine& eng);

// k distinct indices out of [0, n), returned in ascending order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    std::uint64_t seed);

} // namespace illumest::rnd
