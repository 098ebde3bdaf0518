#include "segkit/render.hpp"

#include "segkit/png_io.hpp"

#include <cmath>
#include <filesystem>
#include <limits>

namespace segkit {

namespace {

struct WorldTriangle {
  Eigen::Vector3d v0, v1, v2;
  Eigen::Vector3d normal;  // unit, orientation resolved per ray
  Eigen::Vector3d albedo;
  int class_index = 0;
};

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
}

std::vector<WorldTriangle> build_world(const SceneDescription& scene, const AssetStore& assets) {
  std::vector<WorldTriangle> world;
  for (const SceneObject& object : scene.objects) {
    const Mesh& mesh = assets.mesh(object.mesh_ref);
    const Eigen::Matrix3d rotation = euler_rotation(object.rotation);
    std::vector<Eigen::Vector3d> transformed(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
      transformed[i] = rotation * (object.scale * mesh.vertices[i]) + object.translation;
    }
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& tri = mesh.triangles[t];
      WorldTriangle wt;
      wt.v0 = transformed[static_cast<std::size_t>(tri[0])];
      wt.v1 = transformed[static_cast<std::size_t>(tri[1])];
      wt.v2 = transformed[static_cast<std::size_t>(tri[2])];
      const Eigen::Vector3d n = (wt.v1 - wt.v0).cross(wt.v2 - wt.v0);
      const double len = n.norm();
      if (len == 0.0) continue;  // degenerate triangle cannot be hit
      wt.normal = n / len;
      wt.albedo = mesh.albedo[t];
      wt.class_index = object.class_index;
      world.push_back(wt);
    }
  }
  return world;
}

}  // namespace

AssetStore AssetStore::load_from_config(const ForgeConfig& config) {
  namespace fs = std::filesystem;
  AssetStore store;
  for (const auto& [cls, refs] : config.mesh_pools) {
    (void)cls;
    for (const std::string& ref : refs) {
      Mesh mesh = load_mesh_file(fs::path(config.mesh_dir) / ref);
      if (config.normalize_meshes) normalize_unit_box(mesh);
      store.add_mesh(ref, std::move(mesh));
    }
  }
  for (const std::string& ref : config.background_pool) {
    store.add_background(ref, load_rgb_png(fs::path(config.background_dir) / ref));
  }
  return store;
}

const Mesh& AssetStore::mesh(const std::string& ref) const {
  auto it = meshes_.find(ref);
  if (it == meshes_.end()) throw Error("unresolvable mesh ref: \"" + ref + "\"");
  return it->second;
}

const RgbImage& AssetStore::background(const std::string& ref) const {
  auto it = backgrounds_.find(ref);
  if (it == backgrounds_.end()) throw Error("unresolvable background ref: \"" + ref + "\"");
  return it->second;
}

RenderSample render(const SceneDescription& scene, const AssetStore& assets, int width,
                    int height) {
  if (width <= 0 || height <= 0) throw Error("render: frame dimensions must be positive");

  const std::vector<WorldTriangle> world = build_world(scene, assets);
  const auto frame = make_camera_frame<double>(scene.camera);
  const RgbImage* background =
      scene.background_ref.empty() ? nullptr : &assets.background(scene.background_ref);

  RenderSample sample;
  sample.scene = scene;
  sample.rgb = RgbImage(width, height);
  sample.label = LabelImage(width, height, 0);

  for (int py = 0; py < height; ++py) {
    for (int px = 0; px < width; ++px) {
      const Eigen::Vector3d dir = pixel_ray_direction(frame, width, height, px, py);

      double nearest_t = std::numeric_limits<double>::infinity();
      const WorldTriangle* hit = nullptr;
      for (const WorldTriangle& tri : world) {
        const auto t = intersect_triangle(frame.origin, dir, tri.v0, tri.v1, tri.v2);
        if (t && *t < nearest_t) {
          nearest_t = *t;
          hit = &tri;
        }
      }

      if (hit != nullptr) {
        Eigen::Vector3d n = hit->normal;
        if (n.dot(dir) > 0.0) n = -n;  // face the viewer
        const double diffuse =
            std::max(0.0, n.dot(scene.light.direction)) * scene.light.intensity;
        set_pixel(sample.rgb, px, py, quantize(hit->albedo.x() * diffuse),
                  quantize(hit->albedo.y() * diffuse), quantize(hit->albedo.z() * diffuse));
        sample.label.at(px, py) = static_cast<std::uint8_t>(hit->class_index);
      } else if (background != nullptr) {
        const int bx = std::min(background->width - 1, px * background->width / width);
        const int by = std::min(background->height - 1, py * background->height / height);
        const std::uint8_t* src = background->px(bx, by);
        set_pixel(sample.rgb, px, py, src[0], src[1], src[2]);
      } else {
        set_pixel(sample.rgb, px, py, 128, 128, 128);
      }
    }
  }
  return sample;
}

}  // namespace segkit
