#pragma once

#include "core/image.hpp"

#include <cstdint>
#include <vector>

namespace illumest {

class BinaryMask {
public:
    BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

    int width() const noexcept { return m_width; }
    int height() const noexcept { return m_height; }

    bool at(int row, int col) const {
        return m_bits[static_cast<std::size_t>(row) * static_cast<std::size_t>(m_width) +
                      static_cast<std::size_t>(col)] != 0;
    }

    std::span<const std::uint8_t> bits() const noexcept { return m_bits; }
    std::size_t popcount() const noexcept;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    int m_width;
    int m_height;
    std::vector<std::uint8_t> m_bits;
};

struct PixelCoord {
    int row = 0;
    int col = 0;

    friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
    friend auto operator<=>(const PixelCoord&, const PixelCoord&) = default;
};

/// Integer pixel coordinates tied to the raster they were taken from.
struct PixelSet {
    std::vector<PixelCoord> points;
    int source_width = 1;
    int source_height = 1;

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }

    friend bool operator==(const PixelSet&, const PixelSet&) = default;
};

// bit = 1 iff intensity > t. Strict: a pixel equal to t is not bright.
BinaryMask threshold_mask(const GrayImage& img, int t);

// Threshold maximising between-class variance of the split {<= t} | {> t}
// over the 256-bin histogram; smallest maximiser wins.
// Throws Error{Degenerate} for single-valued images.
int otsu_threshold(const GrayImage& img);

struct BrightSet {
    PixelSet pixels;
    bool empty_warning = false; // no pixel passed the threshold
};

// Row-major enumeration of set bits.
BrightSet mask_to_pixel_set(const BinaryMask& mask);

} // namespace illumest
