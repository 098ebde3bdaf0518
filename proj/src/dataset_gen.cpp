#include "segkit/dataset_gen.hpp"

#include "segkit/parallel.hpp"
#include "segkit/png_io.hpp"
#include "segkit/rng.hpp"

#include <iomanip>
#include <sstream>

namespace segkit {

std::vector<ManifestEntry> plan_manifest(const ForgeConfig& config, const ClassTaxonomy& taxonomy,
                                         std::uint64_t dataset_seed) {
  validate_config(config);
  std::vector<ManifestEntry> entries;
  entries.reserve(static_cast<std::size_t>(config.classes.size()) *
                  static_cast<std::size_t>(config.samples_per_class));
  for (int cls : config.classes) {
    for (int i = 0; i < config.samples_per_class; ++i) {
      std::ostringstream id;
      id << taxonomy.name(cls) << '_' << std::setw(4) << std::setfill('0') << i;
      entries.push_back(ManifestEntry{
          id.str(), cls,
          derive_seed(dataset_seed, static_cast<std::uint64_t>(cls), static_cast<std::uint64_t>(i))});
    }
  }
  return entries;
}

std::string serialize_manifest(const std::vector<ManifestEntry>& entries,
                               const ClassTaxonomy& taxonomy) {
  std::ostringstream out;
  for (const ManifestEntry& entry : entries) {
    out << entry.image_id << ' ' << taxonomy.name(entry.class_index) << ' ' << entry.seed << '\n';
  }
  return out.str();
}

std::vector<ManifestEntry> parse_manifest(std::string_view text, const ClassTaxonomy& taxonomy) {
  std::vector<ManifestEntry> entries;
  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    ManifestEntry entry;
    std::string class_name;
    if (!(fields >> entry.image_id >> class_name >> entry.seed)) {
      throw Error("manifest line " + std::to_string(line_no) +
                  ": expected `image_id class_name seed`");
    }
    entry.class_index = taxonomy.index_of(class_name);
    entries.push_back(std::move(entry));
  }
  return entries;
}

void render_entries(const ForgeConfig& config, const AssetStore& assets,
                    const std::vector<ManifestEntry>& entries,
                    const std::filesystem::path& out_dir, int threads) {
  namespace fs = std::filesystem;
  if (entries.empty()) return;
  std::error_code ec;
  fs::create_directories(out_dir / "images", ec);
  fs::create_directories(out_dir / "labels", ec);
  if (!fs::is_directory(out_dir / "images") || !fs::is_directory(out_dir / "labels")) {
    throw Error("cannot create output directories under " + out_dir.string());
  }

  parallel_for(static_cast<int>(entries.size()), threads, [&](int i) {
    const ManifestEntry& entry = entries[static_cast<std::size_t>(i)];
    const SceneDescription scene = sample_scene(config, entry.class_index, entry.seed);
    const RenderSample sample = render(scene, assets, config.width, config.height);
    save_rgb_png(out_dir / "images" / (entry.image_id + ".png"), sample.rgb);
    save_label_png(out_dir / "labels" / (entry.image_id + ".png"), sample.label);
  });
}

std::vector<ManifestEntry> generate_dataset(const ForgeConfig& config, const AssetStore& assets,
                                            const ClassTaxonomy& taxonomy,
                                            std::uint64_t dataset_seed,
                                            const std::filesystem::path& out_dir, int threads) {
  const std::vector<ManifestEntry> entries = plan_manifest(config, taxonomy, dataset_seed);
  render_entries(config, assets, entries, out_dir, threads);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const std::string manifest = serialize_manifest(entries, taxonomy);
  write_file(out_dir / "manifest.txt",
             std::span(reinterpret_cast<const std::uint8_t*>(manifest.data()), manifest.size()));
  return entries;
}

}  // namespace segkit
