#pragma once

#include "segkit/rng.hpp"
#include "segkit/voc.hpp"

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>

namespace segkit::testing {

/// Self-deleting temporary directory under the system temp root.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("segkit_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline LabelImage random_label_image(SplitMix64& rng, int max_side = 32) {
  const int w = rng.uniform_int(1, max_side);
  const int h = rng.uniform_int(1, max_side);
  LabelImage label(w, h);
  for (auto& v : label.data) {
    const int draw = rng.uniform_int(0, 21);  // 21 acts as void
    v = draw == 21 ? ClassTaxonomy::kVoidIndex : static_cast<std::uint8_t>(draw);
  }
  return label;
}

inline RgbImage random_rgb_image(SplitMix64& rng, int w, int h) {
  RgbImage image(w, h);
  for (auto& v : image.data) v = static_cast<std::uint8_t>(rng.below(256));
  return image;
}

}  // namespace segkit::testing
