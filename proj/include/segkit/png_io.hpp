#pragma once

#include "segkit/voc.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace segkit {

/// Encodes a label image as an 8-bit indexed-palette PNG whose palette entry i
/// is voc_colormap(i) for all 256 indices. Throws Error if the label carries
/// values outside {0..20, 255}.
std::vector<std::uint8_t> encode_label_png(const LabelImage& label);

/// Decodes an indexed-palette PNG back to class indices (never colors).
/// Throws Error on malformed streams, non-palette color types, or indices
/// outside {0..20, 255}.
LabelImage decode_label_png(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_rgb_png(const RgbImage& image);

/// Decodes any well-formed PNG to 8-bit RGB (palette and gray expanded,
/// 16-bit narrowed, alpha dropped).
RgbImage decode_rgb_png(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

LabelImage load_label_png(const std::filesystem::path& path);
void save_label_png(const std::filesystem::path& path, const LabelImage& label);
RgbImage load_rgb_png(const std::filesystem::path& path);
void save_rgb_png(const std::filesystem::path& path, const RgbImage& image);

}  // namespace segkit
