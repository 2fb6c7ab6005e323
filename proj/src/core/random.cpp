#include "core/random.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace illumest::rnd {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    // splitmix64 finalizer over the combined value
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t uniform_index(Engine& eng, std::uint64_t n)
{
    if (n == 0)
        throw Error(ErrorCode::InvalidParam, "uniform_index: empty range");
    const std::uint64_t limit = (0 - n) % n; // 2^64 mod n
    for (;;) {
        const std::uint64_t x = eng();
        if (x >= limit)
            return x % n;
    }
}

double uniform_unit(Engine& eng)
{
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    std::uint64_t seed)
{
    if (k > n)
        throw Error(ErrorCode::InvalidParam, "sample_without_replacement: k > n");

    Engine eng(seed);
    std::vector<std::size_t> out;
    out.reserve(k);

    // Sparse Fisher-Yates: only the swapped slots are materialised.
    std::unordered_map<std::size_t, std::size_t> swapped;
    auto slot = [&](std::size_t i) {
        auto it = swapped.find(i);
        return it == swapped.end() ? i : it->second;
    };
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_index(eng, n - i));
        const std::size_t vi = slot(i);
        const std::size_t vj = slot(j);
        out.push_back(vj);
        swapped[j] = vi;
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace illumest::rnd
