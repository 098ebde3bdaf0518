#include "segkit/voc.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace segkit {

ClassTaxonomy::ClassTaxonomy(std::vector<std::string> names) : names_(std::move(names)) {
  if (static_cast<int>(names_.size()) != kNumClasses) {
    throw Error("taxonomy must have exactly " + std::to_string(kNumClasses) + " class names, got " +
                std::to_string(names_.size()));
  }
  if (names_[0] != "background") {
    throw Error("taxonomy index 0 must be \"background\", got \"" + names_[0] + "\"");
  }
  std::set<std::string> unique(names_.begin(), names_.end());
  if (unique.size() != names_.size()) {
    throw Error("taxonomy class names must be unique");
  }
}

const ClassTaxonomy& ClassTaxonomy::pascal_voc() {
  static const ClassTaxonomy taxonomy(std::vector<std::string>{
      "background", "aeroplane", "bicycle",     "bird",  "boat",        "bottle", "bus",
      "car",        "cat",       "chair",       "cow",   "diningtable", "dog",    "horse",
      "motorbike",  "person",    "pottedplant", "sheep", "sofa",        "train",  "tvmonitor"});
  return taxonomy;
}

const std::string& ClassTaxonomy::name(int index) const {
  if (index < 0 || index >= size()) {
    throw Error("class index out of range: " + std::to_string(index));
  }
  return names_[index];
}

int ClassTaxonomy::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    throw Error("unknown class name: \"" + std::string(name) + "\"");
  }
  return static_cast<int>(it - names_.begin());
}

bool ClassTaxonomy::contains(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

Rgb8 voc_colormap(int index) {
  if (index < 0 || index > 255) {
    throw Error("colormap index out of range: " + std::to_string(index));
  }
  std::uint8_t r = 0, g = 0, b = 0;
  unsigned c = static_cast<unsigned>(index);
  for (int bit = 0; bit < 8; ++bit) {
    r |= static_cast<std::uint8_t>(((c >> 0) & 1u) << (7 - bit));
    g |= static_cast<std::uint8_t>(((c >> 1) & 1u) << (7 - bit));
    b |= static_cast<std::uint8_t>(((c >> 2) & 1u) << (7 - bit));
    c >>= 3;
  }
  return {r, g, b};
}

void validate_annotation(const BoxAnnotation& ann, int width, int height) {
  for (const LabeledBox& labeled : ann.boxes) {
    const Box& box = labeled.box;
    if (labeled.class_index < 1 || labeled.class_index >= ClassTaxonomy::kNumClasses) {
      throw Error(ann.image_id + ": box class index out of range: " +
                  std::to_string(labeled.class_index));
    }
    if (!(0 <= box.xmin && box.xmin < box.xmax && box.xmax <= width) ||
        !(0 <= box.ymin && box.ymin < box.ymax && box.ymax <= height)) {
      std::ostringstream msg;
      msg << ann.image_id << ": box [" << box.xmin << "," << box.ymin << "," << box.xmax << ","
          << box.ymax << "] outside " << width << "x" << height << " image";
      throw Error(msg.str());
    }
  }
}

std::vector<BoxAnnotation> parse_box_file(std::string_view text, const ClassTaxonomy& taxonomy) {
  std::vector<BoxAnnotation> annotations;
  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string image_id, class_name;
    LabeledBox labeled;
    if (!(fields >> image_id >> class_name >> labeled.box.xmin >> labeled.box.ymin >>
          labeled.box.xmax >> labeled.box.ymax)) {
      throw Error("box file line " + std::to_string(line_no) +
                  ": expected `image_id class_name xmin ymin xmax ymax`");
    }
    std::string extra;
    if (fields >> extra) {
      throw Error("box file line " + std::to_string(line_no) + ": trailing tokens");
    }
    labeled.class_index = taxonomy.index_of(class_name);
    if (labeled.class_index == 0) {
      throw Error("box file line " + std::to_string(line_no) + ": boxes cannot be background");
    }
    auto it = std::find_if(annotations.begin(), annotations.end(),
                           [&](const BoxAnnotation& a) { return a.image_id == image_id; });
    if (it == annotations.end()) {
      annotations.push_back(BoxAnnotation{image_id, {labeled}});
    } else {
      it->boxes.push_back(labeled);
    }
  }
  return annotations;
}

std::string serialize_box_file(const std::vector<BoxAnnotation>& annotations,
                               const ClassTaxonomy& taxonomy) {
  std::ostringstream out;
  for (const BoxAnnotation& ann : annotations) {
    for (const LabeledBox& labeled : ann.boxes) {
      out << ann.image_id << ' ' << taxonomy.name(labeled.class_index) << ' ' << labeled.box.xmin
          << ' ' << labeled.box.ymin << ' ' << labeled.box.xmax << ' ' << labeled.box.ymax << '\n';
    }
  }
  return out.str();
}

bool valid_label_values(const LabelImage& label) {
  return std::all_of(label.data.begin(), label.data.end(), [](std::uint8_t v) {
    return v < ClassTaxonomy::kNumClasses || v == ClassTaxonomy::kVoidIndex;
  });
}

}  // namespace segkit
