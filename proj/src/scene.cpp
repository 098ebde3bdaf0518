#include "segkit/scene.hpp"

#include "segkit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

namespace segkit {

namespace {

constexpr int kMaxTranslationAttempts = 1024;

std::vector<std::string> split_values(const std::string& value) {
  std::vector<std::string> out;
  std::istringstream stream(value);
  std::string token;
  while (stream >> token) out.push_back(token);
  return out;
}

double to_double(const std::string& key, const std::string& token) {
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw Error("config key \"" + key + "\": bad number \"" + token + "\"");
  }
}

int to_int(const std::string& key, const std::string& token) {
  const double v = to_double(key, token);
  if (v != std::floor(v)) throw Error("config key \"" + key + "\": expected integer");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& token) {
  if (token == "true" || token == "1" || token == "yes") return true;
  if (token == "false" || token == "0" || token == "no") return false;
  throw Error("config key \"" + key + "\": expected true/false");
}

Eigen::Vector3d to_vec3(const std::string& key, const std::vector<std::string>& tokens) {
  if (tokens.size() != 3) throw Error("config key \"" + key + "\": expected 3 values");
  return {to_double(key, tokens[0]), to_double(key, tokens[1]), to_double(key, tokens[2])};
}

std::string one(const std::string& key, const std::vector<std::string>& tokens) {
  if (tokens.size() != 1) throw Error("config key \"" + key + "\": expected a single value");
  return tokens[0];
}

}  // namespace

ForgeConfig parse_forge_config(std::string_view text, const ClassTaxonomy& taxonomy) {
  ForgeConfig config;
  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("config line " + std::to_string(line_no) + ": expected `key = value`");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto tokens = split_values(value);
    if (tokens.empty()) throw Error("config key \"" + key + "\": missing value");

    if (key == "width") config.width = to_int(key, one(key, tokens));
    else if (key == "height") config.height = to_int(key, one(key, tokens));
    else if (key == "objects_min") config.objects_min = to_int(key, one(key, tokens));
    else if (key == "objects_max") config.objects_max = to_int(key, one(key, tokens));
    else if (key == "scale_min") config.scale.lo = to_double(key, one(key, tokens));
    else if (key == "scale_max") config.scale.hi = to_double(key, one(key, tokens));
    else if (key == "translation_x_min") config.translation_x.lo = to_double(key, one(key, tokens));
    else if (key == "translation_x_max") config.translation_x.hi = to_double(key, one(key, tokens));
    else if (key == "translation_y_min") config.translation_y.lo = to_double(key, one(key, tokens));
    else if (key == "translation_y_max") config.translation_y.hi = to_double(key, one(key, tokens));
    else if (key == "translation_z_min") config.translation_z.lo = to_double(key, one(key, tokens));
    else if (key == "translation_z_max") config.translation_z.hi = to_double(key, one(key, tokens));
    else if (key == "camera_position") config.camera.position = to_vec3(key, tokens);
    else if (key == "camera_look_at") config.camera.look_at = to_vec3(key, tokens);
    else if (key == "fov_deg") config.camera.vfov_deg = to_double(key, one(key, tokens));
    else if (key == "light_intensity_min") config.light_intensity.lo = to_double(key, one(key, tokens));
    else if (key == "light_intensity_max") config.light_intensity.hi = to_double(key, one(key, tokens));
    else if (key == "light_elevation_min") config.light_elevation.lo = to_double(key, one(key, tokens));
    else if (key == "light_elevation_max") config.light_elevation.hi = to_double(key, one(key, tokens));
    else if (key == "mixed_classes") config.mixed_classes = to_bool(key, one(key, tokens));
    else if (key == "normalize_meshes") config.normalize_meshes = to_bool(key, one(key, tokens));
    else if (key == "samples_per_class") config.samples_per_class = to_int(key, one(key, tokens));
    else if (key == "mesh_dir") config.mesh_dir = value;
    else if (key == "background_dir") config.background_dir = value;
    else if (key == "classes") {
      config.classes.clear();
      for (const std::string& name : tokens) config.classes.push_back(taxonomy.index_of(name));
    } else {
      throw Error("config line " + std::to_string(line_no) + ": unknown key \"" + key + "\"");
    }
  }
  if (config.classes.empty()) {
    for (int c = 1; c < taxonomy.size(); ++c) config.classes.push_back(c);
  }
  validate_config(config);
  return config;
}

std::string serialize_forge_config(const ForgeConfig& config, const ClassTaxonomy& taxonomy) {
  std::ostringstream out;
  out << "width = " << config.width << '\n';
  out << "height = " << config.height << '\n';
  out << "objects_min = " << config.objects_min << '\n';
  out << "objects_max = " << config.objects_max << '\n';
  out << "scale_min = " << config.scale.lo << '\n';
  out << "scale_max = " << config.scale.hi << '\n';
  out << "translation_x_min = " << config.translation_x.lo << '\n';
  out << "translation_x_max = " << config.translation_x.hi << '\n';
  out << "translation_y_min = " << config.translation_y.lo << '\n';
  out << "translation_y_max = " << config.translation_y.hi << '\n';
  out << "translation_z_min = " << config.translation_z.lo << '\n';
  out << "translation_z_max = " << config.translation_z.hi << '\n';
  out << "camera_position = " << config.camera.position.x() << ' ' << config.camera.position.y()
      << ' ' << config.camera.position.z() << '\n';
  out << "camera_look_at = " << config.camera.look_at.x() << ' ' << config.camera.look_at.y()
      << ' ' << config.camera.look_at.z() << '\n';
  out << "fov_deg = " << config.camera.vfov_deg << '\n';
  out << "light_intensity_min = " << config.light_intensity.lo << '\n';
  out << "light_intensity_max = " << config.light_intensity.hi << '\n';
  out << "light_elevation_min = " << config.light_elevation.lo << '\n';
  out << "light_elevation_max = " << config.light_elevation.hi << '\n';
  out << "mixed_classes = " << (config.mixed_classes ? "true" : "false") << '\n';
  out << "normalize_meshes = " << (config.normalize_meshes ? "true" : "false") << '\n';
  out << "samples_per_class = " << config.samples_per_class << '\n';
  if (!config.mesh_dir.empty()) out << "mesh_dir = " << config.mesh_dir << '\n';
  if (!config.background_dir.empty()) out << "background_dir = " << config.background_dir << '\n';
  out << "classes =";
  for (int c : config.classes) out << ' ' << taxonomy.name(c);
  out << '\n';
  return out.str();
}

void validate_config(const ForgeConfig& config) {
  if (config.width <= 0 || config.height <= 0) throw Error("config: frame dimensions must be positive");
  if (config.objects_min < 1 || config.objects_min > config.objects_max) {
    throw Error("config: need 1 <= objects_min <= objects_max");
  }
  if (!config.scale.valid() || config.scale.lo <= 0) throw Error("config: bad scale range");
  if (!config.translation_x.valid() || !config.translation_y.valid() ||
      !config.translation_z.valid()) {
    throw Error("config: bad translation range");
  }
  if (!(config.camera.vfov_deg > 0 && config.camera.vfov_deg < 180)) {
    throw Error("config: fov_deg must be in (0, 180)");
  }
  if (!config.light_intensity.valid() || config.light_intensity.lo < 0) {
    throw Error("config: bad light intensity range");
  }
  if (!config.light_elevation.valid() || config.light_elevation.lo < -1 ||
      config.light_elevation.hi > 1) {
    throw Error("config: light elevation range must lie in [-1, 1]");
  }
  if (config.samples_per_class < 0) throw Error("config: samples_per_class must be >= 0");
  if (config.classes.empty()) throw Error("config: class list is empty");
  for (int c : config.classes) {
    if (c < 1 || c >= ClassTaxonomy::kNumClasses) {
      throw Error("config: class index out of range: " + std::to_string(c));
    }
  }
}

void populate_pools_from_dirs(ForgeConfig& config, const ClassTaxonomy& taxonomy) {
  namespace fs = std::filesystem;
  config.mesh_pools.clear();
  config.background_pool.clear();

  if (!config.mesh_dir.empty()) {
    const fs::path root(config.mesh_dir);
    if (!fs::is_directory(root)) throw Error("mesh_dir not found: " + config.mesh_dir);
    for (int c = 1; c < taxonomy.size(); ++c) {
      const fs::path class_dir = root / taxonomy.name(c);
      if (!fs::is_directory(class_dir)) continue;
      std::vector<std::string> refs;
      for (const auto& entry : fs::directory_iterator(class_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".obj") {
          refs.push_back(taxonomy.name(c) + "/" + entry.path().filename().string());
        }
      }
      std::sort(refs.begin(), refs.end());
      if (!refs.empty()) config.mesh_pools[c] = std::move(refs);
    }
  }

  if (!config.background_dir.empty()) {
    const fs::path root(config.background_dir);
    if (!fs::is_directory(root)) throw Error("background_dir not found: " + config.background_dir);
    for (const auto& entry : fs::directory_iterator(root)) {
      if (entry.is_regular_file() && entry.path().extension() == ".png") {
        config.background_pool.push_back(entry.path().filename().string());
      }
    }
    std::sort(config.background_pool.begin(), config.background_pool.end());
  }
}

SceneDescription sample_scene(const ForgeConfig& config, int class_index, std::uint64_t seed) {
  validate_config(config);
  const auto pool_it = config.mesh_pools.find(class_index);
  if (pool_it == config.mesh_pools.end() || pool_it->second.empty()) {
    throw Error("empty mesh pool for class " + std::to_string(class_index));
  }

  std::vector<int> pooled_classes;
  for (const auto& [cls, refs] : config.mesh_pools) {
    if (!refs.empty()) pooled_classes.push_back(cls);
  }

  SplitMix64 rng(seed);
  SceneDescription scene;
  scene.seed = seed;
  scene.camera = config.camera;

  const int object_count = rng.uniform_int(config.objects_min, config.objects_max);

  const double ly = rng.uniform(config.light_elevation.lo, config.light_elevation.hi);
  const double azimuth = rng.uniform(0.0, 2.0 * EIGEN_PI);
  const double r = std::sqrt(std::max(0.0, 1.0 - ly * ly));
  scene.light.direction =
      Eigen::Vector3d(r * std::cos(azimuth), ly, r * std::sin(azimuth)).normalized();
  scene.light.intensity = rng.uniform(config.light_intensity.lo, config.light_intensity.hi);

  if (!config.background_pool.empty()) {
    scene.background_ref =
        config.background_pool[rng.below(config.background_pool.size())];
  }

  const auto frame = make_camera_frame<double>(config.camera);
  const double aspect = static_cast<double>(config.width) / config.height;

  for (int o = 0; o < object_count; ++o) {
    SceneObject object;
    object.class_index = class_index;
    if (o > 0 && config.mixed_classes) {
      object.class_index = pooled_classes[rng.below(pooled_classes.size())];
    }
    const auto& pool = config.mesh_pools.at(object.class_index);
    object.mesh_ref = pool[rng.below(pool.size())];
    object.scale = rng.uniform(config.scale.lo, config.scale.hi);
    object.rotation = {rng.uniform(0.0, 2.0 * EIGEN_PI), rng.uniform(0.0, 2.0 * EIGEN_PI),
                       rng.uniform(0.0, 2.0 * EIGEN_PI)};

    bool placed = false;
    for (int attempt = 0; attempt < kMaxTranslationAttempts; ++attempt) {
      object.translation = {rng.uniform(config.translation_x.lo, config.translation_x.hi),
                            rng.uniform(config.translation_y.lo, config.translation_y.hi),
                            rng.uniform(config.translation_z.lo, config.translation_z.hi)};
      if (inside_frustum(frame, object.translation, aspect)) {
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw Error("translation range does not intersect the camera frustum");
    }
    scene.objects.push_back(std::move(object));
  }
  return scene;
}

}  // namespace segkit
