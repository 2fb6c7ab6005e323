#pragma once

#include "core/image.hpp"
#include "core/report.hpp"

namespace illumest {

inline constexpr Rgb kMarkColor{255, 0, 0};
inline constexpr Rgb kCentroidColor{0, 0, 255};
inline constexpr Rgb kArrowColor{0, 255, 0};
inline constexpr std::size_t kMaxMarks = 5000;
inline constexpr int kCentroidRadius = 4;

// Bright pixels as red marks, centroid as a blue disc, and a green arrow
// from the image center to the centroid. The arrow is drawn last so its tip
// stays visible on top of the disc.
RgbImage render_overlay(const RgbImage& img, const IlluminationReport& report);

} // namespace illumest
