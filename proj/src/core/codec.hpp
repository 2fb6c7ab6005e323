#pragma once

#include "core/image.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace illumest {

// Decodes a PNG or JPEG stream into 8-bit RGB. 16-bit samples are rescaled
// by integer division by 257, gray inputs are replicated across channels and
// alpha is dropped. Throws Error{Decode} on anything else.
RgbImage decode_image(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_png(const GrayImage& img);
std::vector<std::uint8_t> encode_png(const RgbImage& img);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

} // namespace illumest
