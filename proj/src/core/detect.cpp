#include "core/detect.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace illumest {

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : m_width(width), m_height(height), m_bits(std::move(bits))
{
    if (width < 1 || height < 1)
        throw Error(ErrorCode::InvalidParam, "BinaryMask: dimensions must be >= 1");
    if (m_bits.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw Error(ErrorCode::InvalidParam, "BinaryMask: bit count != width * height");
    for (auto& b : m_bits)
        b = b ? 1 : 0;
}

std::size_t BinaryMask::popcount() const noexcept
{
    return static_cast<std::size_t>(std::count(m_bits.begin(), m_bits.end(), std::uint8_t{1}));
}

BinaryMask threshold_mask(const GrayImage& img, int t)
{
    if (t < 0 || t > 255)
        throw Error(ErrorCode::InvalidParam,
                    "threshold must be in [0, 255], got " + std::to_string(t));
    std::vector<std::uint8_t> bits;
    bits.reserve(img.pixels().size());
    for (std::uint8_t v : img.pixels())
        bits.push_back(v > t ? 1 : 0);
    return BinaryMask(img.width(), img.height(), std::move(bits));
}

int otsu_threshold(const GrayImage& img)
{
    std::array<double, 256> hist{};
    for (std::uint8_t v : img.pixels())
        hist[v] += 1.0;

    const double total = static_cast<double>(img.pixels().size());
    double sum_all = 0.0;
    for (int i = 0; i < 256; ++i)
        sum_all += i * hist[i];

    // Between-class variance up to the constant 1/N^2:
    // (w0 * S - N * S0)^2 / (w0 * w1).
    int best_t = -1;
    double best = -1.0;
    double w0 = 0.0;
    double s0 = 0.0;
    for (int t = 0; t < 255; ++t) {
        w0 += hist[t];
        s0 += t * hist[t];
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0)
            continue;
        const double d = w0 * sum_all - total * s0;
        const double score = d * d / (w0 * w1);
        // Relative slack so that mathematically equal scores tie towards low t.
        if (score > best * (1.0 + 1e-12)) {
            best = score;
            best_t = t;
        }
    }
    if (best_t < 0)
        throw Error(ErrorCode::Degenerate, "otsu_threshold: image has a single intensity value");
    return best_t;
}

BrightSet mask_to_pixel_set(const BinaryMask& mask)
{
    BrightSet out;
    out.pixels.source_width = mask.width();
    out.pixels.source_height = mask.height();
    out.pixels.points.reserve(mask.popcount());
    for (int row = 0; row < mask.height(); ++row)
        for (int col = 0; col < mask.width(); ++col)
            if (mask.at(row, col))
                out.pixels.points.push_back({row, col});
    out.empty_warning = out.pixels.empty();
    return out;
}

} // namespace illumest
