#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace illumest {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Dense 8-bit RGB raster, row-major.
class RgbImage {
public:
    RgbImage(int width, int height, std::vector<Rgb> pixels);
    RgbImage(int width, int height, Rgb fill = {});

    int width() const noexcept { return m_width; }
    int height() const noexcept { return m_height; }

    const Rgb& at(int row, int col) const { return m_pixels[index(row, col)]; }
    Rgb& at(int row, int col) { return m_pixels[index(row, col)]; }

    std::span<const Rgb> pixels() const noexcept { return m_pixels; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(m_width) +
               static_cast<std::size_t>(col);
    }

    int m_width;
    int m_height;
    std::vector<Rgb> m_pixels;
};

/// Dense 8-bit intensity raster, row-major.
class GrayImage {
public:
    GrayImage(int width, int height, std::vector<std::uint8_t> pixels);
    GrayImage(int width, int height, std::uint8_t fill = 0);

    int width() const noexcept { return m_width; }
    int height() const noexcept { return m_height; }

    std::uint8_t at(int row, int col) const { return m_pixels[index(row, col)]; }
    std::uint8_t& at(int row, int col) { return m_pixels[index(row, col)]; }

    std::span<const std::uint8_t> pixels() const noexcept { return m_pixels; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(m_width) +
               static_cast<std::size_t>(col);
    }

    int m_width;
    int m_height;
    std::vector<std::uint8_t> m_pixels;
};

// BT.601 luma with round-half-up, computed in integer arithmetic so the
// result is bit-exact: (299 R + 587 G + 114 B + 500) / 1000.
std::uint8_t luma(Rgb px) noexcept;

GrayImage to_grayscale(const RgbImage& img);

// Copies the intensity into all three channels.
RgbImage replicate_channels(const GrayImage& img);

struct BlobSceneParams {
    int width = 128;
    int height = 128;
    int center_row = 64;
    int center_col = 64;
    double sigma = 3.0;
    int peak = 255;
    int background = 10;
};

// Gaussian blob over a flat background. Off-center pixels are capped at
// peak - 1, so the intensity argmax is unique and sits at the blob center
// even for very broad blobs.
GrayImage synth_blob_scene(const BlobSceneParams& params);

struct NoiseSceneParams {
    int width = 128;
    int height = 128;
    std::size_t n_bright = 0;
    int bright_value = 255;
    int background = 10;
    std::uint64_t seed = 0;
};

// Exactly n_bright distinct pixels, drawn uniformly without replacement.
GrayImage synth_uniform_noise_scene(const NoiseSceneParams& params);

} // namespace illumest
