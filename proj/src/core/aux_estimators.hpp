#pragma once

#include "core/geometry.hpp"
#include "core/image.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace illumest::aux {

struct BrightestPixel {
    PixelCoord pixel;
    Vec2 direction;
};

// First maximum in row-major order.
BrightestPixel brightest_pixel_direction(const GrayImage& img);

// Plain mean of 3x3 Sobel gradients (scaled by 1/8, replicate border),
// as (row, col) components. Needs both dimensions >= 3.
Vec2 average_gradient_direction(const GrayImage& img);

struct Cluster {
    Point2d centroid;
    std::size_t size = 0;
    Vec2 direction;
    std::optional<double> angle_div_deg; // vs. the global centroid direction
};

struct KMeansResult {
    std::vector<Cluster> clusters;
    std::vector<std::size_t> labels;
    std::vector<double> sse_history; // after every assignment step
    int iterations = 0;
};

inline constexpr int kKMeansMaxIters = 100;

// Lloyd's k-means over (row, col), k-means++ seeding.
KMeansResult cluster_bright_pixels(const PixelSet& points, std::size_t k, std::uint64_t seed);

struct Moments {
    double mean_diff_x = 0.0;
    double mean_diff_y = 0.0;
    double variance_ratio = 1.0; // trace(var b) / trace(var r)
    double var_x_b = 0.0;
    double var_y_b = 0.0;
    double var_x_r = 0.0;
    double var_y_r = 0.0;
};

Moments moments_comparison(const PixelSet& b, const PixelSet& r);

double hausdorff_distance(const PixelSet& a, const PixelSet& b);

} // namespace illumest::aux
