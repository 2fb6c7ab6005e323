#pragma once

#include "core/detect.hpp"

#include <optional>
#include <span>

namespace illumest {

/// Sub-pixel position, (row, col).
struct Point2d {
    double row = 0.0;
    double col = 0.0;

    friend bool operator==(const Point2d&, const Point2d&) = default;
};

/// Displacement in (row, col) components; +row points down the image.
struct Vec2 {
    double d_row = 0.0;
    double d_col = 0.0;

    double norm() const noexcept;
    bool is_zero() const noexcept { return d_row == 0.0 && d_col == 0.0; }

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct DirectionEstimate {
    Point2d centroid;
    Point2d center;
    Vec2 vector;
    // Counter-clockwise from image-right with screen-up at 90 degrees.
    // Absent for a zero displacement.
    std::optional<double> angle_deg;
    std::size_t n_points = 0;
};

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return m_sum + m_comp; }

private:
    double m_sum = 0.0;
    double m_comp = 0.0;
};

Point2d centroid(const PixelSet& points);

Point2d image_center(int width, int height);

// atan2(-d_row, d_col) in [0, 360); nullopt for the zero vector.
std::optional<double> screen_angle_deg(Vec2 v);

DirectionEstimate direction(const PixelSet& points);

// Builds the estimate from an externally supplied centroid.
DirectionEstimate direction_from_centroid(Point2d centroid, int width, int height,
                                          std::size_t n_points);

double cosine_similarity(Vec2 a, Vec2 b);

double angle_between_deg(Vec2 a, Vec2 b);

} // namespace illumest
