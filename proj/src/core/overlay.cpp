#include "core/overlay.hpp"

#include "core/detect.hpp"
#include "core/error.hpp"
#include "core/random.hpp"
#include "core/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace illumest {

namespace {

constexpr std::uint64_t kMarkStream = 4;
constexpr double kHeadLength = 8.0;
constexpr double kHeadAngleDeg = 25.0;

void put(RgbImage& img, long row, long col, Rgb color)
{
    if (row < 0 || col < 0 || row >= img.height() || col >= img.width())
        return;
    img.at(static_cast<int>(row), static_cast<int>(col)) = color;
}

void draw_disc(RgbImage& img, Point2d c, int radius, Rgb color)
{
    const long r0 = std::lround(c.row);
    const long c0 = std::lround(c.col);
    for (long dr = -radius; dr <= radius; ++dr)
        for (long dc = -radius; dc <= radius; ++dc)
            if (dr * dr + dc * dc <= static_cast<long>(radius) * radius)
                put(img, r0 + dr, c0 + dc, color);
}

void draw_line(RgbImage& img, Point2d from, Point2d to, Rgb color)
{
    const double len = std::hypot(to.row - from.row, to.col - from.col);
    const int steps = std::max(1, static_cast<int>(std::ceil(len * 4.0)));
    for (int s = 0; s <= steps; ++s) {
        const double t = static_cast<double>(s) / steps;
        put(img, std::lround(from.row + t * (to.row - from.row)),
            std::lround(from.col + t * (to.col - from.col)), color);
    }
}

void draw_arrow(RgbImage& img, Point2d tail, Point2d tip, Rgb color)
{
    const double dr = tip.row - tail.row;
    const double dc = tip.col - tail.col;
    const double len = std::hypot(dr, dc);
    if (len <= 0.0)
        return;
    draw_line(img, tail, tip, color);

    const double head = std::min(kHeadLength, 0.35 * len);
    const double back = std::atan2(-dr, -dc);
    const double spread = kHeadAngleDeg * std::numbers::pi / 180.0;
    for (double side : {-1.0, 1.0}) {
        const double a = back + side * spread;
        draw_line(img, tip, {tip.row + head * std::sin(a), tip.col + head * std::cos(a)}, color);
    }
}

} // namespace

RgbImage render_overlay(const RgbImage& img, const IlluminationReport& report)
{
    if (report.width != img.width() || report.height != img.height())
        throw Error(ErrorCode::DimensionMismatch, "render_overlay: report does not match image size");

    RgbImage out = img;
    if (!report.centroid || !report.center)
        return out;

    if (report.n_bright > 0) {
        const BrightSet bright =
            mask_to_pixel_set(threshold_mask(to_grayscale(img), report.threshold_used));
        const PixelSet marks = subsample_pixels(bright.pixels, kMaxMarks,
                                                rnd::derive_seed(report.seed, kMarkStream));
        for (const PixelCoord& p : marks.points)
            put(out, p.row, p.col, kMarkColor);
    }

    draw_disc(out, *report.centroid, kCentroidRadius, kCentroidColor);
    draw_arrow(out, *report.center, *report.centroid, kArrowColor);
    return out;
}

} // namespace illumest
