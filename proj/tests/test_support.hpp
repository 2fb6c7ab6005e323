#pragma once

#include "core/random.hpp"
#include "core/transport.hpp"

#include <atomic>
#include <filesystem>
#include <string>
#include <unistd.h>

namespace illumest::test_util {

inline WeightedCloud random_cloud(std::size_t n, std::uint64_t seed, double scale = 1.0,
                                  double du = 0.0, double dv = 0.0)
{
    rnd::Engine eng(seed);
    std::vector<CloudPoint> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rnd::uniform_unit(eng);
        const double v = rnd::uniform_unit(eng);
        pts.push_back({u * scale + du, v * scale + dv});
    }
    return WeightedCloud::uniform(std::move(pts));
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        static std::atomic<int> counter{0};
        m_path = std::filesystem::temp_directory_path() /
                 ("illumest_" + tag + "_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter++));
        std::filesystem::remove_all(m_path);
        std::filesystem::create_directories(m_path);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(m_path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return m_path; }
    std::filesystem::path operator/(const std::string& name) const { return m_path / name; }

private:
    std::filesystem::path m_path;
};

} // namespace illumest::test_util
