#pragma once

#include "core/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace illumest {

enum class ThresholdMode { Fixed, Otsu };

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kEmptyBrightSetWarning = "EmptyBrightSet";

struct WassersteinSection {
    double w2 = 0.0;
    double ot_eps = 0.0;
    double divergence = 0.0;
    double blur = 0.0;
    int iters = 0;
    bool converged = false;
    double marginal_err = 0.0;
    bool subsampled = false;
    bool normalized = true;
    std::size_t n_source = 0;
    std::size_t n_reference = 0;

    friend bool operator==(const WassersteinSection&, const WassersteinSection&) = default;
};

struct ClusterEntry {
    Point2d centroid;
    std::size_t size = 0;
    Vec2 direction;
    std::optional<double> angle_div_deg;

    friend bool operator==(const ClusterEntry&, const ClusterEntry&) = default;
};

struct AuxSection {
    PixelCoord brightest_px;
    Vec2 brightest_dir;
    std::optional<double> cos_sim_brightest_vs_centroid;
    std::optional<Vec2> gradient_dir; // absent for rasters under 3x3
    std::optional<double> gradient_angle_diff_deg;
    std::vector<ClusterEntry> clusters;
    double mean_diff_x = 0.0;
    double mean_diff_y = 0.0;
    // Absent when the reference or bright set has no spread.
    std::optional<double> variance_ratio;
    double var_x_bright = 0.0;
    double var_y_bright = 0.0;
    double var_x_reference = 0.0;
    double var_y_reference = 0.0;
    double hausdorff_px = 0.0;
    bool hausdorff_subsampled = false;

    friend bool operator==(const AuxSection&, const AuxSection&) = default;
};

struct IlluminationReport {
    std::string input_path;
    int width = 0;
    int height = 0;
    ThresholdMode threshold_mode = ThresholdMode::Fixed;
    int threshold_used = 200;
    std::size_t n_bright = 0;
    std::optional<std::string> warning;
    std::optional<Point2d> centroid;
    std::optional<Point2d> center;
    std::optional<Vec2> direction;
    std::optional<double> angle_deg;
    std::optional<WassersteinSection> wasserstein;
    std::optional<AuxSection> aux;
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    double runtime_ms = 0.0;

    friend bool operator==(const IlluminationReport&, const IlluminationReport&) = default;
};

// Rounds to 9 significant digits; every float in a report passes through
// this so that parse(serialize(r)) == r holds exactly.
double quantize(double x);

// Applies quantize() to every floating-point field.
void quantize_report(IlluminationReport& report);

std::string report_to_json(const IlluminationReport& report, bool include_runtime = true,
                           int indent = 2);
IlluminationReport report_from_json(const std::string& text);

} // namespace illumest
