#pragma once

#include <filesystem>

#include "augens/image.hpp"

namespace augens {

/// Reads an 8-bit PNG or BMP (chosen by extension). Samples are scaled by
/// 1/255; grayscale files load as 1-channel images and alpha is dropped.
Image load_image(const std::filesystem::path& path);

/// Writes an 8-bit PNG or BMP. Values are clamped and quantized as
/// floor(v * 255 + 0.5).
void save_image(const Image& img, const std::filesystem::path& path);

std::uint8_t quantize_u8(double v);

}  // namespace augens
