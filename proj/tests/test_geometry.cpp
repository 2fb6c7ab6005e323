#include "core/error.hpp"
#include "core/geometry.hpp"
#include "core/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace illumest;

namespace {

PixelSet make_set(std::vector<PixelCoord> pts, int w = 64, int h = 64)
{
    PixelSet s;
    s.points = std::move(pts);
    s.source_width = w;
    s.source_height = h;
    return s;
}

} // namespace

TEST(Centroid, SmallSets)
{
    EXPECT_EQ(centroid(make_set({{0, 0}, {2, 2}})), (Point2d{1.0, 1.0}));
    EXPECT_EQ(centroid(make_set({{5, 7}})), (Point2d{5.0, 7.0}));
}

TEST(Centroid, GridMean)
{
    std::vector<PixelCoord> pts;
    for (int r = 0; r < 10; ++r)
        for (int c = 0; c < 10; ++c)
            pts.push_back({r, c});
    EXPECT_EQ(centroid(make_set(pts)), (Point2d{4.5, 4.5}));
}

TEST(Centroid, EmptyThrows)
{
    try {
        centroid(make_set({}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptySet);
    }
}

TEST(Centroid, LargeSetIsExact)
{
    // 1e6 copies of a large odd coordinate pair: the mean must come back
    // exactly despite the long sum.
    PixelSet s = make_set(std::vector<PixelCoord>(1'000'000, {99'999, 77'777}), 100'000, 100'000);
    s.points.push_back({99'999, 77'777});
    EXPECT_EQ(centroid(s), (Point2d{99'999.0, 77'777.0}));
}

TEST(Centroid, OrderIndependent)
{
    rnd::Engine eng(4);
    std::vector<PixelCoord> pts;
    for (int i = 0; i < 5000; ++i)
        pts.push_back({static_cast<int>(rnd::uniform_index(eng, 1080)),
                       static_cast<int>(rnd::uniform_index(eng, 1920))});
    const Point2d a = centroid(make_set(pts, 1920, 1080));
    std::reverse(pts.begin(), pts.end());
    const Point2d b = centroid(make_set(pts, 1920, 1080));
    EXPECT_EQ(a, b);
}

TEST(CompensatedSum, CancelsRoundoff)
{
    CompensatedSum s;
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    EXPECT_EQ(s.value(), 1.0);
}

TEST(Center, HalfDimensions)
{
    EXPECT_EQ(image_center(200, 100), (Point2d{50.0, 100.0}));
    EXPECT_EQ(image_center(1, 1), (Point2d{0.5, 0.5}));
    EXPECT_EQ(image_center(64, 64), (Point2d{32.0, 32.0}));
    EXPECT_THROW(image_center(0, 4), Error);
}

TEST(Direction, ZeroDisplacementHasNoAngle)
{
    const DirectionEstimate d = direction(make_set({{31, 32}, {33, 32}}));
    EXPECT_TRUE(d.vector.is_zero());
    EXPECT_FALSE(d.angle_deg.has_value());
    EXPECT_EQ(d.n_points, 2u);
}

TEST(Direction, TopEdgeIsNinetyDegrees)
{
    const DirectionEstimate d = direction(make_set({{0, 32}, {0, 32}}));
    EXPECT_EQ(d.vector, (Vec2{-32.0, 0.0}));
    ASSERT_TRUE(d.angle_deg.has_value());
    EXPECT_DOUBLE_EQ(*d.angle_deg, 90.0);
}

TEST(Direction, LeftEdgeIsOneEightyDegrees)
{
    const DirectionEstimate d = direction(make_set({{32, 0}}));
    EXPECT_EQ(d.vector, (Vec2{0.0, -32.0}));
    EXPECT_DOUBLE_EQ(*d.angle_deg, 180.0);
}

TEST(Direction, AngleConventions)
{
    EXPECT_DOUBLE_EQ(*screen_angle_deg({0.0, 5.0}), 0.0);
    EXPECT_DOUBLE_EQ(*screen_angle_deg({5.0, 0.0}), 270.0);
    EXPECT_DOUBLE_EQ(*screen_angle_deg({-1.0, -1.0}), 135.0);
    EXPECT_DOUBLE_EQ(*screen_angle_deg({1.0, 1.0}), 315.0);
    // just below the positive col axis wraps into [0, 360)
    const double a = *screen_angle_deg({1e-9, 1.0});
    EXPECT_GE(a, 0.0);
    EXPECT_LT(a, 360.0);
    EXPECT_FALSE(screen_angle_deg({0.0, 0.0}).has_value());
}

TEST(Direction, FromCentroidMatchesDirection)
{
    const PixelSet s = make_set({{3, 9}, {10, 40}, {60, 2}}, 80, 70);
    const DirectionEstimate a = direction(s);
    const DirectionEstimate b = direction_from_centroid(centroid(s), 80, 70, 3);
    EXPECT_EQ(a.vector, b.vector);
    EXPECT_EQ(a.center, (Point2d{35.0, 40.0}));
    EXPECT_EQ(a.angle_deg, b.angle_deg);
}

TEST(Cosine, KnownValues)
{
    EXPECT_DOUBLE_EQ(cosine_similarity({1, 0}, {2, 0}), 1.0);
    EXPECT_DOUBLE_EQ(cosine_similarity({1, 0}, {0, 1}), 0.0);
    EXPECT_DOUBLE_EQ(cosine_similarity({1, 0}, {-3, 0}), -1.0);
}

TEST(Cosine, ClampedForNearlyParallel)
{
    rnd::Engine eng(1);
    for (int i = 0; i < 1000; ++i) {
        const Vec2 v{rnd::uniform_unit(eng) * 1e6 - 5e5, rnd::uniform_unit(eng) * 1e-3};
        if (v.is_zero())
            continue;
        const double c = cosine_similarity(v, {v.d_row * 3.0, v.d_col * 3.0});
        EXPECT_LE(c, 1.0);
        EXPECT_GE(c, -1.0);
        EXPECT_EQ(angle_between_deg(v, v), 0.0);
    }
}

TEST(Cosine, ZeroVectorThrows)
{
    try {
        cosine_similarity({0, 0}, {1, 0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroVector);
    }
    EXPECT_THROW(angle_between_deg({1, 0}, {0, 0}), Error);
}

TEST(AngleBetween, KnownValues)
{
    EXPECT_DOUBLE_EQ(angle_between_deg({1, 0}, {0, 1}), 90.0);
    EXPECT_DOUBLE_EQ(angle_between_deg({1, 1}, {1, 1}), 0.0);
    EXPECT_NEAR(angle_between_deg({1, 0}, {1, 1}), 45.0, 1e-12);
    EXPECT_DOUBLE_EQ(angle_between_deg({0, 2}, {0, -7}), 180.0);
}
