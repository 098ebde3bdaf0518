#include "segkit/weak_labeler.hpp"

#include "segkit/parallel.hpp"
#include "segkit/png_io.hpp"
#include "segkit/rng.hpp"

#include <algorithm>
#include <sstream>

namespace segkit {

LabelImage merge_instance_masks(const BoxAnnotation& annotation,
                                const std::vector<BinaryMask>& masks, int width, int height) {
  if (masks.size() != annotation.boxes.size()) {
    throw Error(annotation.image_id + ": " + std::to_string(annotation.boxes.size()) +
                " boxes but " + std::to_string(masks.size()) + " masks");
  }
  for (const BinaryMask& mask : masks) {
    if (mask.width != width || mask.height != height) {
      throw Error(annotation.image_id + ": mask dimensions do not match image");
    }
  }

  // Claim priority: smaller box wins, ties to the lower class index.
  std::vector<std::size_t> order(masks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const LabeledBox& ba = annotation.boxes[a];
    const LabeledBox& bb = annotation.boxes[b];
    if (ba.box.area() != bb.box.area()) return ba.box.area() < bb.box.area();
    return ba.class_index < bb.class_index;
  });

  LabelImage label(width, height, 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (std::size_t i : order) {
        if (masks[i].at(x, y) == kForeground) {
          label.at(x, y) = static_cast<std::uint8_t>(annotation.boxes[i].class_index);
          break;
        }
      }
    }
  }
  return label;
}

ConvertMethod parse_convert_method(std::string_view name) {
  if (name == "grabcut") return ConvertMethod::grabcut;
  if (name == "crf") return ConvertMethod::crf;
  throw Error("unknown conversion method: \"" + std::string(name) +
              "\" (expected grabcut or crf)");
}

LabelImage convert_image(const RgbImage& image, const BoxAnnotation& annotation,
                         const ConvertParams& params, std::uint64_t seed) {
  validate_annotation(annotation, image.width, image.height);
  if (params.method == ConvertMethod::grabcut) {
    std::vector<BinaryMask> masks;
    masks.reserve(annotation.boxes.size());
    for (std::size_t i = 0; i < annotation.boxes.size(); ++i) {
      masks.push_back(grabcut_segment(image, annotation.boxes[i].box, params.grabcut,
                                      hash_mix(seed, static_cast<std::uint64_t>(i))));
    }
    return merge_instance_masks(annotation, masks, image.width, image.height);
  }
  const UnaryField unary = boxes_to_unary(annotation, image.width, image.height,
                                          params.inside_fg_prob, params.outside_bg_prob);
  return dense_crf_refine(image, unary, params.crf);
}

std::vector<std::pair<std::string, std::string>> convert_dataset(
    const std::filesystem::path& images_dir, const std::vector<BoxAnnotation>& annotations,
    const ConvertParams& params, const std::filesystem::path& out_dir, std::uint64_t seed,
    int threads) {
  namespace fs = std::filesystem;
  std::vector<std::pair<std::string, std::string>> entries;
  entries.reserve(annotations.size());
  for (const BoxAnnotation& ann : annotations) {
    const fs::path image_path = images_dir / (ann.image_id + ".png");
    if (!fs::exists(image_path)) {
      throw Error(ann.image_id + ": missing image " + image_path.string());
    }
    entries.emplace_back(ann.image_id, ann.image_id + ".png");
  }
  if (annotations.empty()) return entries;

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir)) throw Error("cannot create output directory " + out_dir.string());

  parallel_for(static_cast<int>(annotations.size()), threads, [&](int i) {
    const BoxAnnotation& ann = annotations[static_cast<std::size_t>(i)];
    const RgbImage image = load_rgb_png(images_dir / (ann.image_id + ".png"));
    const LabelImage label =
        convert_image(image, ann, params, hash_mix(seed, hash_string(ann.image_id)));
    save_label_png(out_dir / entries[static_cast<std::size_t>(i)].second, label);
  });
  return entries;
}

std::string serialize_convert_manifest(
    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ostringstream out;
  for (const auto& [image_id, filename] : entries) out << image_id << ' ' << filename << '\n';
  return out.str();
}

}  // namespace segkit
