#pragma once

#include "segkit/dense_crf.hpp"
#include "segkit/grabcut.hpp"
#include "segkit/voc.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace segkit {

/// Combines per-box foreground masks into one multi-class label image:
/// background where nothing claims a pixel, the claiming box's class where one
/// does, and on conflicts the box with the smallest area (ties: lowest class
/// index). Expects one mask per box, all image-sized.
LabelImage merge_instance_masks(const BoxAnnotation& annotation,
                                const std::vector<BinaryMask>& masks, int width, int height);

enum class ConvertMethod { grabcut, crf };

ConvertMethod parse_convert_method(std::string_view name);

struct ConvertParams {
  ConvertMethod method = ConvertMethod::crf;
  GrabCutParams grabcut;
  CrfParams crf;
  double inside_fg_prob = 0.9;
  double outside_bg_prob = 0.99;
};

/// Weak labels for one image: grabcut runs per box and merges; crf builds the
/// box unary and refines it.
LabelImage convert_image(const RgbImage& image, const BoxAnnotation& annotation,
                         const ConvertParams& params, std::uint64_t seed);

/// Converts every annotated image (id.png under images_dir) to a label file
/// under out_dir and returns (image_id, output filename) pairs in annotation
/// order. Per-image work is independent; any thread count writes identical
/// bytes. Seeds derive from (seed, image_id).
std::vector<std::pair<std::string, std::string>> convert_dataset(
    const std::filesystem::path& images_dir, const std::vector<BoxAnnotation>& annotations,
    const ConvertParams& params, const std::filesystem::path& out_dir, std::uint64_t seed,
    int threads);

/// Manifest lines `image_id filename`, in conversion order.
std::string serialize_convert_manifest(
    const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace segkit
