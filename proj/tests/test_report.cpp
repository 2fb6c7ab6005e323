#include "core/error.hpp"
#include "core/report.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>

using namespace illumest;

namespace {

IlluminationReport full_report()
{
    IlluminationReport r;
    r.input_path = "scenes/a.png";
    r.width = 128;
    r.height = 96;
    r.threshold_mode = ThresholdMode::Otsu;
    r.threshold_used = 143;
    r.n_bright = 321;
    r.centroid = Point2d{20.123456789123, 97.5};
    r.center = Point2d{48.0, 64.0};
    r.direction = Vec2{-27.876543210877, 33.5};
    r.angle_deg = 39.76543219876;
    WassersteinSection w;
    w.w2 = 0.3141592653589793;
    w.ot_eps = 0.12;
    w.divergence = 0.0986960440108936;
    w.blur = 0.05;
    w.iters = 37;
    w.converged = true;
    w.marginal_err = 4.2e-7;
    w.subsampled = false;
    w.n_source = 321;
    w.n_reference = 321;
    r.wasserstein = w;
    AuxSection a;
    a.brightest_px = {19, 98};
    a.brightest_dir = {-29.0, 34.0};
    a.cos_sim_brightest_vs_centroid = 0.99987654321;
    a.gradient_dir = Vec2{1.0 / 3.0, -2.0 / 7.0};
    a.gradient_angle_diff_deg = 171.2345678912;
    a.clusters = {{{10.5, 90.25}, 200, {-37.5, 26.25}, 8.123456789},
                  {{36.0, 110.0}, 121, {-12.0, 46.0}, std::nullopt}};
    a.mean_diff_x = 33.3333333333;
    a.mean_diff_y = 27.7777777777;
    a.variance_ratio = 0.0123456789123;
    a.var_x_bright = 12.5;
    a.var_y_bright = 3.25;
    a.var_x_reference = 1365.3333333;
    a.var_y_reference = 767.9999999;
    a.hausdorff_px = 70.71067811865476;
    a.hausdorff_subsampled = true;
    r.aux = a;
    r.seed = 18446744073709551615ULL;
    r.runtime_ms = 12.3456789012;
    return r;
}

IlluminationReport empty_report()
{
    IlluminationReport r;
    r.input_path = "black.png";
    r.width = 4;
    r.height = 4;
    r.n_bright = 0;
    r.warning = kEmptyBrightSetWarning;
    return r;
}

} // namespace

TEST(Quantize, NineSignificantDigits)
{
    EXPECT_EQ(quantize(0.1234567891234), 0.123456789);
    EXPECT_EQ(quantize(123456789012.0), 123456789000.0);
    EXPECT_EQ(quantize(1.0), 1.0);
    EXPECT_EQ(quantize(-2.5e-10), -2.5e-10);
    EXPECT_FALSE(std::signbit(quantize(-0.0)));
    EXPECT_EQ(quantize(quantize(M_PI)), quantize(M_PI));
    EXPECT_THROW(quantize(std::nan("")), Error);
    EXPECT_THROW(quantize(INFINITY), Error);
}

TEST(Report, RoundTripFull)
{
    IlluminationReport r = full_report();
    quantize_report(r);
    EXPECT_EQ(report_from_json(report_to_json(r)), r);
    EXPECT_EQ(report_from_json(report_to_json(r, true, -1)), r);
}

TEST(Report, RoundTripEmpty)
{
    IlluminationReport r = empty_report();
    quantize_report(r);
    const IlluminationReport back = report_from_json(report_to_json(r));
    EXPECT_EQ(back, r);
    EXPECT_FALSE(back.direction.has_value());
    EXPECT_FALSE(back.wasserstein.has_value());
    EXPECT_FALSE(back.aux.has_value());
}

TEST(Report, SerializationIsStable)
{
    IlluminationReport r = full_report();
    quantize_report(r);
    const std::string once = report_to_json(r);
    EXPECT_EQ(report_to_json(report_from_json(once)), once);
}

TEST(Report, KeyOrder)
{
    IlluminationReport r = full_report();
    quantize_report(r);
    const auto j = nlohmann::ordered_json::parse(report_to_json(r));
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it)
        keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"input_path", "width", "height", "threshold_mode",
                                              "threshold_used", "n_bright", "warning", "centroid",
                                              "center", "direction", "angle_deg", "wasserstein",
                                              "aux", "seed", "tool_version", "runtime_ms"}));
    EXPECT_EQ(j.at("threshold_mode"), "otsu");
    EXPECT_EQ(j.at("tool_version"), kToolVersion);
    EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 18446744073709551615ULL);
}

TEST(Report, RuntimeCanBeOmitted)
{
    const auto j = nlohmann::ordered_json::parse(report_to_json(full_report(), false));
    EXPECT_FALSE(j.contains("runtime_ms"));
}

TEST(Report, EmptySectionsAreNull)
{
    const auto j = nlohmann::ordered_json::parse(report_to_json(empty_report()));
    EXPECT_EQ(j.at("warning"), "EmptyBrightSet");
    for (const char* key : {"centroid", "center", "direction", "angle_deg", "wasserstein", "aux"})
        EXPECT_TRUE(j.at(key).is_null()) << key;
}

TEST(Report, OptionalAuxFieldsAreNull)
{
    IlluminationReport r = full_report();
    r.aux->gradient_dir.reset();
    r.aux->gradient_angle_diff_deg.reset();
    r.aux->variance_ratio.reset();
    quantize_report(r);
    const auto j = nlohmann::ordered_json::parse(report_to_json(r));
    EXPECT_TRUE(j.at("aux").at("gradient_dir").is_null());
    EXPECT_TRUE(j.at("aux").at("variance_ratio").is_null());
    EXPECT_TRUE(j.at("aux").at("clusters").at(1).at("angle_div_deg").is_null());
    EXPECT_EQ(report_from_json(report_to_json(r)), r);
}

TEST(Report, QuantizeReportTouchesEveryFloat)
{
    IlluminationReport r = full_report();
    quantize_report(r);
    EXPECT_EQ(r.centroid->row, 20.1234568);
    EXPECT_EQ(r.direction->d_row, -27.8765432);
    EXPECT_EQ(r.aux->gradient_dir->d_row, 0.333333333);
    EXPECT_EQ(r.aux->hausdorff_px, 70.7106781);
    EXPECT_EQ(r.wasserstein->w2, 0.314159265);
    EXPECT_EQ(*r.aux->clusters[0].angle_div_deg, 8.12345679);
}

TEST(Report, MalformedInputRejected)
{
    EXPECT_THROW(report_from_json("{"), Error);
    EXPECT_THROW(report_from_json("{}"), Error);
    std::string text = report_to_json(empty_report());
    text.replace(text.find("\"fixed\""), 7, "\"magic\"");
    EXPECT_THROW(report_from_json(text), Error);
}
