#include "core/aux_estimators.hpp"

#include "core/error.hpp"
#include "core/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace illumest::aux {

namespace {

double sq_dist(const Point2d& a, const Point2d& b) noexcept
{
    const double dr = a.row - b.row;
    const double dc = a.col - b.col;
    return dr * dr + dc * dc;
}

Point2d as_point(const PixelCoord& p) noexcept
{
    return {static_cast<double>(p.row), static_cast<double>(p.col)};
}

std::optional<double> maybe_angle(Vec2 a, Vec2 b)
{
    if (a.is_zero() || b.is_zero())
        return std::nullopt;
    return angle_between_deg(a, b);
}

// Nearest center, lowest index on ties.
std::size_t nearest(const Point2d& p, const std::vector<Point2d>& centers, double& best_d2)
{
    std::size_t best = 0;
    best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d2 = sq_dist(p, centers[c]);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = c;
        }
    }
    return best;
}

std::vector<Point2d> kmeans_pp(const std::vector<Point2d>& pts, std::size_t k, std::uint64_t seed)
{
    rnd::Engine eng(seed);
    std::vector<Point2d> centers;
    std::vector<char> chosen(pts.size(), 0);

    const auto first = static_cast<std::size_t>(rnd::uniform_index(eng, pts.size()));
    centers.push_back(pts[first]);
    chosen[first] = 1;

    std::vector<double> d2(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        d2[i] = sq_dist(pts[i], centers.front());

    while (centers.size() < k) {
        CompensatedSum total;
        for (double d : d2)
            total.add(d);

        std::size_t pick = pts.size();
        if (total.value() > 0.0) {
            const double target = rnd::uniform_unit(eng) * total.value();
            double run = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (d2[i] <= 0.0)
                    continue;
                run += d2[i];
                pick = i;
                if (run > target)
                    break;
            }
        } else {
            // Every point coincides with a center already; take the next unused index.
            for (std::size_t i = 0; i < pts.size() && pick == pts.size(); ++i)
                if (!chosen[i])
                    pick = i;
        }
        chosen[pick] = 1;
        centers.push_back(pts[pick]);
        for (std::size_t i = 0; i < pts.size(); ++i)
            d2[i] = std::min(d2[i], sq_dist(pts[i], centers.back()));
    }
    return centers;
}

double directed_hausdorff_sq(const std::vector<PixelCoord>& from, const std::vector<PixelCoord>& to)
{
    double worst = 0.0;
    for (const PixelCoord& p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const PixelCoord& q : to) {
            const double dr = static_cast<double>(p.row) - q.row;
            const double dc = static_cast<double>(p.col) - q.col;
            best = std::min(best, dr * dr + dc * dc);
            if (best <= worst)
                break; // p cannot raise the supremum
        }
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace

BrightestPixel brightest_pixel_direction(const GrayImage& img)
{
    BrightestPixel out;
    int best = -1;
    for (int row = 0; row < img.height(); ++row) {
        for (int col = 0; col < img.width(); ++col) {
            if (img.at(row, col) > best) {
                best = img.at(row, col);
                out.pixel = {row, col};
            }
        }
    }
    const Point2d c = image_center(img.width(), img.height());
    out.direction = {out.pixel.row - c.row, out.pixel.col - c.col};
    return out;
}

Vec2 average_gradient_direction(const GrayImage& img)
{
    const int w = img.width();
    const int h = img.height();
    if (w < 3 || h < 3)
        throw Error(ErrorCode::TooSmall, "average_gradient_direction: image must be at least 3x3");

    auto px = [&](int row, int col) -> long long {
        return img.at(std::clamp(row, 0, h - 1), std::clamp(col, 0, w - 1));
    };

    // Integer accumulation keeps the mean exact.
    long long sum_row = 0;
    long long sum_col = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            sum_col += (px(y - 1, x + 1) + 2 * px(y, x + 1) + px(y + 1, x + 1)) -
                       (px(y - 1, x - 1) + 2 * px(y, x - 1) + px(y + 1, x - 1));
            sum_row += (px(y + 1, x - 1) + 2 * px(y + 1, x) + px(y + 1, x + 1)) -
                       (px(y - 1, x - 1) + 2 * px(y - 1, x) + px(y - 1, x + 1));
        }
    }
    const double n = 8.0 * static_cast<double>(w) * static_cast<double>(h);
    return {static_cast<double>(sum_row) / n, static_cast<double>(sum_col) / n};
}

KMeansResult cluster_bright_pixels(const PixelSet& points, std::size_t k, std::uint64_t seed)
{
    if (k == 0)
        throw Error(ErrorCode::InvalidParam, "cluster_bright_pixels: k must be >= 1");
    if (points.size() < k)
        throw Error(ErrorCode::TooFewPoints, "cluster_bright_pixels: fewer points than clusters");

    std::vector<Point2d> pts;
    pts.reserve(points.size());
    for (const PixelCoord& p : points.points)
        pts.push_back(as_point(p));

    KMeansResult res;
    std::vector<Point2d> centers = kmeans_pp(pts, k, seed);
    std::vector<std::size_t> labels(pts.size(), k); // k = unassigned

    for (int it = 0; it < kKMeansMaxIters; ++it) {
        bool changed = false;
        CompensatedSum sse;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double d2 = 0.0;
            const std::size_t c = nearest(pts[i], centers, d2);
            changed = changed || c != labels[i];
            labels[i] = c;
            sse.add(d2);
        }
        res.sse_history.push_back(sse.value());
        res.iterations = it + 1;
        if (!changed)
            break;

        std::vector<CompensatedSum> sr(k);
        std::vector<CompensatedSum> sc(k);
        std::vector<std::size_t> count(k, 0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            sr[labels[i]].add(pts[i].row);
            sc[labels[i]].add(pts[i].col);
            ++count[labels[i]];
        }

        std::vector<std::size_t> far;
        for (std::size_t c = 0; c < k; ++c) {
            if (count[c] > 0) {
                const auto n = static_cast<double>(count[c]);
                centers[c] = {sr[c].value() / n, sc[c].value() / n};
            } else if (far.empty()) {
                // Farthest points from their current centers, descending.
                far.resize(pts.size());
                std::iota(far.begin(), far.end(), std::size_t{0});
                std::stable_sort(far.begin(), far.end(), [&](std::size_t x, std::size_t y) {
                    return sq_dist(pts[x], centers[labels[x]]) >
                           sq_dist(pts[y], centers[labels[y]]);
                });
            }
        }
        std::size_t next_far = 0;
        for (std::size_t c = 0; c < k; ++c)
            if (count[c] == 0)
                centers[c] = pts[far[next_far++]];
    }

    // Report members' exact centroids rather than the last center update.
    std::vector<PixelSet> members(k);
    for (auto& m : members) {
        m.source_width = points.source_width;
        m.source_height = points.source_height;
    }
    for (std::size_t i = 0; i < pts.size(); ++i)
        members[labels[i]].points.push_back(points.points[i]);

    const Vec2 global = direction(points).vector;
    for (std::size_t c = 0; c < k; ++c) {
        if (members[c].empty())
            continue;
        const DirectionEstimate d = direction(members[c]);
        res.clusters.push_back({d.centroid, members[c].size(), d.vector, maybe_angle(d.vector, global)});
    }
    res.labels = std::move(labels);
    return res;
}

Moments moments_comparison(const PixelSet& b, const PixelSet& r)
{
    if (b.empty() || r.empty())
        throw Error(ErrorCode::EmptySet, "moments_comparison: empty point set");

    struct Stats {
        double mean_x, mean_y, var_x, var_y;
    };
    auto stats = [](const PixelSet& s) {
        const Point2d m = centroid(s);
        CompensatedSum vx;
        CompensatedSum vy;
        for (const PixelCoord& p : s.points) {
            vx.add((p.col - m.col) * (p.col - m.col));
            vy.add((p.row - m.row) * (p.row - m.row));
        }
        const auto n = static_cast<double>(s.size());
        return Stats{m.col, m.row, vx.value() / n, vy.value() / n};
    };

    const Stats sb = stats(b);
    const Stats sr = stats(r);
    const double ref_total = sr.var_x + sr.var_y;
    if (!(ref_total > 0.0))
        throw Error(ErrorCode::DegenerateReference,
                    "moments_comparison: reference set has zero variance");

    Moments m;
    m.mean_diff_x = std::abs(sb.mean_x - sr.mean_x);
    m.mean_diff_y = std::abs(sb.mean_y - sr.mean_y);
    m.variance_ratio = (sb.var_x + sb.var_y) / ref_total;
    m.var_x_b = sb.var_x;
    m.var_y_b = sb.var_y;
    m.var_x_r = sr.var_x;
    m.var_y_r = sr.var_y;
    return m;
}

double hausdorff_distance(const PixelSet& a, const PixelSet& b)
{
    if (a.empty() || b.empty())
        throw Error(ErrorCode::EmptySet, "hausdorff_distance: empty point set");
    return std::sqrt(std::max(directed_hausdorff_sq(a.points, b.points),
                              directed_hausdorff_sq(b.points, a.points)));
}

} // namespace illumest::aux
