#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace segkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major 2D grid of T. data[y * width + x].
template <typename T>
struct Image {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Image() = default;
  Image(int w, int h, T fill = T{})
      : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  T& at(int x, int y) { return data[index(x, y)]; }
  const T& at(int x, int y) const { return data[index(x, y)]; }
  std::size_t pixels() const { return data.size(); }
  bool empty() const { return data.empty(); }

  template <typename U>
  bool same_size(const Image<U>& other) const {
    return width == other.width && height == other.height;
  }

  friend bool operator==(const Image&, const Image&) = default;
};

/// Class indices 0..20, 255 = void.
using LabelImage = Image<std::uint8_t>;
/// 0 = background, 1 = foreground.
using BinaryMask = Image<std::uint8_t>;

inline constexpr std::uint8_t kForeground = 1;
inline constexpr std::uint8_t kBackground = 0;

/// Interleaved 8-bit RGB, row-major. data[3 * (y * width + x) + channel].
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  RgbImage() = default;
  RgbImage(int w, int h)
      : width(w), height(h), data(3 * static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {}

  std::size_t index(int x, int y) const { return 3 * (static_cast<std::size_t>(y) * width + x); }
  std::uint8_t* px(int x, int y) { return data.data() + index(x, y); }
  const std::uint8_t* px(int x, int y) const { return data.data() + index(x, y); }
  std::size_t pixels() const { return data.size() / 3; }

  template <typename U>
  bool same_size(const Image<U>& other) const {
    return width == other.width && height == other.height;
  }
  bool same_size(const RgbImage& other) const {
    return width == other.width && height == other.height;
  }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Pixel color as a real vector in 8-bit units (components in [0, 255]).
inline Eigen::Vector3d pixel_color(const RgbImage& img, int x, int y) {
  const std::uint8_t* p = img.px(x, y);
  return {static_cast<double>(p[0]), static_cast<double>(p[1]), static_cast<double>(p[2])};
}

inline void set_pixel(RgbImage& img, int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  std::uint8_t* p = img.px(x, y);
  p[0] = r;
  p[1] = g;
  p[2] = b;
}

/// The 21 VOC semantic classes (index 0 = background) plus the void index 255.
class ClassTaxonomy {
 public:
  static constexpr int kNumClasses = 21;
  static constexpr std::uint8_t kVoidIndex = 255;

  /// The canonical VOC class list.
  static const ClassTaxonomy& pascal_voc();

  /// Builds a taxonomy from caller-supplied names. Requires exactly 21 unique
  /// names with names[0] == "background".
  explicit ClassTaxonomy(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int index) const;
  const std::vector<std::string>& names() const { return names_; }

  /// Throws Error for unknown names.
  int index_of(std::string_view name) const;
  bool contains(std::string_view name) const;

 private:
  std::vector<std::string> names_;
};

using Rgb8 = std::array<std::uint8_t, 3>;

/// Canonical VOC palette color for a class-or-void index, by bit interleaving:
/// bit b of the index's bits 0/1/2 lands in bit (7 - b) of r/g/b, consuming
/// three index bits per step.
Rgb8 voc_colormap(int index);

/// Axis-aligned box, inclusive-exclusive pixel ranges.
struct Box {
  int xmin = 0;
  int ymin = 0;
  int xmax = 0;
  int ymax = 0;

  long long area() const {
    return static_cast<long long>(xmax - xmin) * static_cast<long long>(ymax - ymin);
  }
  bool contains(int x, int y) const { return x >= xmin && x < xmax && y >= ymin && y < ymax; }

  friend bool operator==(const Box&, const Box&) = default;
};

struct LabeledBox {
  int class_index = 0;  // 1..20
  Box box;

  friend bool operator==(const LabeledBox&, const LabeledBox&) = default;
};

/// Weak labels of one image: its id and the boxes drawn on it.
struct BoxAnnotation {
  std::string image_id;
  std::vector<LabeledBox> boxes;

  friend bool operator==(const BoxAnnotation&, const BoxAnnotation&) = default;
};

/// Checks box bounds against image dimensions; throws Error on violation.
void validate_annotation(const BoxAnnotation& ann, int width, int height);

/// Line-oriented box file: `image_id class_name xmin ymin xmax ymax` per box.
/// Boxes of one image may be scattered; groups preserve first-appearance order.
std::vector<BoxAnnotation> parse_box_file(std::string_view text, const ClassTaxonomy& taxonomy);
std::string serialize_box_file(const std::vector<BoxAnnotation>& annotations,
                               const ClassTaxonomy& taxonomy);

/// True iff every value is a legal label (0..20 or 255).
bool valid_label_values(const LabelImage& label);

}  // namespace segkit
