#pragma once

#include "segkit/obj_mesh.hpp"
#include "segkit/scene.hpp"
#include "segkit/voc.hpp"

#include <Eigen/Core>

#include <map>
#include <optional>
#include <string>

namespace segkit {

/// Read-only mesh and background content keyed by the refs that
/// SceneDescription carries. Immutable once loading is done.
class AssetStore {
 public:
  AssetStore() = default;

  /// Loads every ref in config.mesh_pools and config.background_pool from
  /// config.mesh_dir / config.background_dir, normalizing meshes when the
  /// config asks for it.
  static AssetStore load_from_config(const ForgeConfig& config);

  void add_mesh(const std::string& ref, Mesh mesh) { meshes_[ref] = std::move(mesh); }
  void add_background(const std::string& ref, RgbImage image) {
    backgrounds_[ref] = std::move(image);
  }

  const Mesh& mesh(const std::string& ref) const;
  const RgbImage& background(const std::string& ref) const;

 private:
  std::map<std::string, Mesh> meshes_;
  std::map<std::string, RgbImage> backgrounds_;
};

struct RenderSample {
  RgbImage rgb;
  LabelImage label;
  SceneDescription scene;
};

/// Ray-triangle intersection (Moller-Trumbore). Returns the ray parameter of
/// the hit, or nothing.
template <typename Scalar>
std::optional<Scalar> intersect_triangle(const Eigen::Vector3<Scalar>& origin,
                                         const Eigen::Vector3<Scalar>& dir,
                                         const Eigen::Vector3<Scalar>& v0,
                                         const Eigen::Vector3<Scalar>& v1,
                                         const Eigen::Vector3<Scalar>& v2) {
  constexpr Scalar kMinT = Scalar(1e-9);
  const Eigen::Vector3<Scalar> e1 = v1 - v0;
  const Eigen::Vector3<Scalar> e2 = v2 - v0;
  const Eigen::Vector3<Scalar> pvec = dir.cross(e2);
  const Scalar det = e1.dot(pvec);
  if (det == Scalar(0)) return std::nullopt;
  const Scalar inv_det = Scalar(1) / det;
  const Eigen::Vector3<Scalar> tvec = origin - v0;
  const Scalar u = tvec.dot(pvec) * inv_det;
  if (u < Scalar(0) || u > Scalar(1)) return std::nullopt;
  const Eigen::Vector3<Scalar> qvec = tvec.cross(e1);
  const Scalar v = dir.dot(qvec) * inv_det;
  if (v < Scalar(0) || u + v > Scalar(1)) return std::nullopt;
  const Scalar t = e2.dot(qvec) * inv_det;
  if (t <= kMinT) return std::nullopt;
  return t;
}

/// Casts one primary ray per pixel. The nearest hit shades Lambertian
/// (albedo * max(0, n . toward-light) * intensity, clamped, 8-bit quantized;
/// geometric normals oriented toward the viewer) and writes the object's
/// class index; misses copy the background (nearest-neighbor rescaled to the
/// frame; flat mid-gray when the scene names none) and write label 0.
/// Pure in (scene, assets), so pixels are order-independent by construction.
RenderSample render(const SceneDescription& scene, const AssetStore& assets, int width,
                    int height);

}  // namespace segkit
