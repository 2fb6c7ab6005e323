#include "core/image.hpp"

#include "core/error.hpp"
#include "core/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace illumest {

namespace {

void check_dims(int width, int height)
{
    if (width < 1 || height < 1)
        throw Error(ErrorCode::InvalidParam,
                    "image dimensions must be >= 1, got " + std::to_string(width) + "x" +
                        std::to_string(height));
}

std::size_t area(int width, int height)
{
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

} // namespace

RgbImage::RgbImage(int width, int height, std::vector<Rgb> pixels)
    : m_width(width), m_height(height), m_pixels(std::move(pixels))
{
    check_dims(width, height);
    if (m_pixels.size() != area(width, height))
        throw Error(ErrorCode::InvalidParam, "RgbImage: pixel count != width * height");
}

RgbImage::RgbImage(int width, int height, Rgb fill)
    : m_width(width), m_height(height)
{
    check_dims(width, height);
    m_pixels.assign(area(width, height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : m_width(width), m_height(height), m_pixels(std::move(pixels))
{
    check_dims(width, height);
    if (m_pixels.size() != area(width, height))
        throw Error(ErrorCode::InvalidParam, "GrayImage: pixel count != width * height");
}

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : m_width(width), m_height(height)
{
    check_dims(width, height);
    m_pixels.assign(area(width, height), fill);
}

std::uint8_t luma(Rgb px) noexcept
{
    const unsigned sum = 299u * px.r + 587u * px.g + 114u * px.b + 500u;
    return static_cast<std::uint8_t>(std::min(sum / 1000u, 255u));
}

GrayImage to_grayscale(const RgbImage& img)
{
    std::vector<std::uint8_t> out;
    out.reserve(img.pixels().size());
    for (const Rgb& px : img.pixels())
        out.push_back(luma(px));
    return GrayImage(img.width(), img.height(), std::move(out));
}

RgbImage replicate_channels(const GrayImage& img)
{
    std::vector<Rgb> out;
    out.reserve(img.pixels().size());
    for (std::uint8_t v : img.pixels())
        out.push_back({v, v, v});
    return RgbImage(img.width(), img.height(), std::move(out));
}

GrayImage synth_blob_scene(const BlobSceneParams& p)
{
    check_dims(p.width, p.height);
    if (p.center_row < 0 || p.center_row >= p.height || p.center_col < 0 ||
        p.center_col >= p.width)
        throw Error(ErrorCode::InvalidParam, "synth_blob_scene: blob center out of bounds");
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
        throw Error(ErrorCode::InvalidParam, "synth_blob_scene: sigma must be > 0");
    if (p.background < 0 || p.background >= p.peak || p.peak > 255)
        throw Error(ErrorCode::InvalidParam,
                    "synth_blob_scene: need 0 <= background < peak <= 255");

    GrayImage img(p.width, p.height, static_cast<std::uint8_t>(p.background));
    const double amp = static_cast<double>(p.peak - p.background);
    const double denom = 2.0 * p.sigma * p.sigma;
    for (int row = 0; row < p.height; ++row) {
        for (int col = 0; col < p.width; ++col) {
            const double dy = row - p.center_row;
            const double dx = col - p.center_col;
            const double value = p.background + amp * std::exp(-(dy * dy + dx * dx) / denom);
            int v = static_cast<int>(std::floor(value + 0.5));
            if (row != p.center_row || col != p.center_col)
                v = std::min(v, p.peak - 1);
            img.at(row, col) = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
        }
    }
    img.at(p.center_row, p.center_col) = static_cast<std::uint8_t>(p.peak);
    return img;
}

GrayImage synth_uniform_noise_scene(const NoiseSceneParams& p)
{
    check_dims(p.width, p.height);
    if (p.background < 0 || p.bright_value > 255 || p.bright_value <= p.background)
        throw Error(ErrorCode::InvalidParam,
                    "synth_uniform_noise_scene: need 0 <= background < bright_value <= 255");
    const std::size_t n = area(p.width, p.height);
    if (p.n_bright > n)
        throw Error(ErrorCode::InvalidParam,
                    "synth_uniform_noise_scene: n_bright exceeds pixel count");

    std::vector<std::uint8_t> px(n, static_cast<std::uint8_t>(p.background));
    for (std::size_t idx : rnd::sample_without_replacement(n, p.n_bright, p.seed))
        px[idx] = static_cast<std::uint8_t>(p.bright_value);
    return GrayImage(p.width, p.height, std::move(px));
}

} // namespace illumest
