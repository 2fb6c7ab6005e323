#include "core/geometry.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace illumest {

double Vec2::norm() const noexcept
{
    return std::hypot(d_row, d_col);
}

void CompensatedSum::add(double x) noexcept
{
    const double t = m_sum + x;
    if (std::abs(m_sum) >= std::abs(x))
        m_comp += (m_sum - t) + x;
    else
        m_comp += (x - t) + m_sum;
    m_sum = t;
}

Point2d centroid(const PixelSet& points)
{
    if (points.empty())
        throw Error(ErrorCode::EmptySet, "centroid of an empty point set");
    CompensatedSum rows;
    CompensatedSum cols;
    for (const PixelCoord& p : points.points) {
        rows.add(p.row);
        cols.add(p.col);
    }
    const double n = static_cast<double>(points.size());
    return {rows.value() / n, cols.value() / n};
}

Point2d image_center(int width, int height)
{
    if (width < 1 || height < 1)
        throw Error(ErrorCode::InvalidParam, "image_center: dimensions must be >= 1");
    return {height / 2.0, width / 2.0};
}

std::optional<double> screen_angle_deg(Vec2 v)
{
    if (v.is_zero())
        return std::nullopt;
    double deg = std::atan2(-v.d_row, v.d_col) * 180.0 / std::numbers::pi;
    if (deg < 0.0)
        deg += 360.0;
    if (deg >= 360.0)
        deg -= 360.0;
    return deg;
}

DirectionEstimate direction_from_centroid(Point2d c, int width, int height, std::size_t n_points)
{
    DirectionEstimate est;
    est.centroid = c;
    est.center = image_center(width, height);
    est.vector = {c.row - est.center.row, c.col - est.center.col};
    est.angle_deg = screen_angle_deg(est.vector);
    est.n_points = n_points;
    return est;
}

DirectionEstimate direction(const PixelSet& points)
{
    return direction_from_centroid(centroid(points), points.source_width, points.source_height,
                                   points.size());
}

double cosine_similarity(Vec2 a, Vec2 b)
{
    const double na = a.norm();
    const double nb = b.norm();
    if (!(na > 0.0) || !(nb > 0.0))
        throw Error(ErrorCode::ZeroVector, "cosine_similarity: zero-length vector");
    const double c = (a.d_row * b.d_row + a.d_col * b.d_col) / (na * nb);
    return std::clamp(c, -1.0, 1.0);
}

double angle_between_deg(Vec2 a, Vec2 b)
{
    cosine_similarity(a, b); // rejects zero vectors
    // atan2 keeps full precision near 0 and 180 degrees, unlike acos.
    const double cross = a.d_row * b.d_col - a.d_col * b.d_row;
    const double dot = a.d_row * b.d_row + a.d_col * b.d_col;
    return std::atan2(std::abs(cross), dot) * 180.0 / std::numbers::pi;
}

} // namespace illumest
