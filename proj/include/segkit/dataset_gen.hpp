#pragma once

#include "segkit/render.hpp"
#include "segkit/scene.hpp"
#include "segkit/voc.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace segkit {

struct ManifestEntry {
  std::string image_id;
  int class_index = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// The full dataset layout before any rendering: samples_per_class entries for
/// every configured class, ids `<class>_<index>`, per-sample seeds derived as
/// hash(dataset_seed, class, index). Deterministic, so parallel generation has
/// nothing to agree on.
std::vector<ManifestEntry> plan_manifest(const ForgeConfig& config, const ClassTaxonomy& taxonomy,
                                         std::uint64_t dataset_seed);

/// Line-oriented manifest: `image_id class_name seed`.
std::string serialize_manifest(const std::vector<ManifestEntry>& entries,
                               const ClassTaxonomy& taxonomy);
std::vector<ManifestEntry> parse_manifest(std::string_view text, const ClassTaxonomy& taxonomy);

/// Renders every entry into out_dir/images/<id>.png + out_dir/labels/<id>.png.
/// Output bytes are identical for any thread count.
void render_entries(const ForgeConfig& config, const AssetStore& assets,
                    const std::vector<ManifestEntry>& entries,
                    const std::filesystem::path& out_dir, int threads);

/// plan_manifest + render_entries + out_dir/manifest.txt. Returns the entries
/// it wrote; rerunning with the manifest's seeds reproduces every byte.
std::vector<ManifestEntry> generate_dataset(const ForgeConfig& config, const AssetStore& assets,
                                            const ClassTaxonomy& taxonomy,
                                            std::uint64_t dataset_seed,
                                            const std::filesystem::path& out_dir, int threads);

}  // namespace segkit
