#pragma once

#include "segkit/voc.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace segkit {

template <typename Scalar>
struct Interval {
  Scalar lo{};
  Scalar hi{};
  bool valid() const { return std::isfinite(lo) && std::isfinite(hi) && lo <= hi; }
};

struct Camera {
  Eigen::Vector3d position{0.0, 0.0, 6.0};
  Eigen::Vector3d look_at{0.0, 0.0, 0.0};
  double vfov_deg = 50.0;
};

/// Directional light; direction is the unit vector pointing toward the light.
struct DirectionalLight {
  Eigen::Vector3d direction{0.0, 1.0, 0.0};
  double intensity = 1.0;
};

struct SceneObject {
  std::string mesh_ref;
  int class_index = 0;  // 1..20
  double scale = 1.0;
  Eigen::Vector3d rotation;     // Euler angles (radians), applied as Rz * Ry * Rx
  Eigen::Vector3d translation;  // world units
};

/// A fully instantiated randomized scene.
struct SceneDescription {
  std::vector<SceneObject> objects;
  Camera camera;
  DirectionalLight light;
  std::string background_ref;  // empty means flat mid-gray
  std::uint64_t seed = 0;
};

/// Everything the generator needs: frame, sampling ranges, camera, asset
/// pools, dataset size. Parsed from a flat key-value file; see
/// parse_forge_config for the keys.
struct ForgeConfig {
  int width = 500;
  int height = 375;
  int objects_min = 1;
  int objects_max = 3;
  Interval<double> scale{0.7, 1.3};
  Interval<double> translation_x{-1.8, 1.8};
  Interval<double> translation_y{-1.2, 1.2};
  Interval<double> translation_z{-1.5, 1.5};
  Camera camera;
  Interval<double> light_intensity{0.6, 1.4};
  Interval<double> light_elevation{0.15, 1.0};  // y-component of the toward-light vector
  bool mixed_classes = false;
  bool normalize_meshes = true;
  int samples_per_class = 100;
  std::string mesh_dir;
  std::string background_dir;
  std::vector<int> classes;  // class indices to generate; default 1..20

  std::map<int, std::vector<std::string>> mesh_pools;  // class index -> mesh refs
  std::vector<std::string> background_pool;            // background refs
};

/// Parses `key = value` lines (# comments, blank lines allowed). Unknown keys
/// are rejected. Every key is optional and falls back to the default above.
ForgeConfig parse_forge_config(std::string_view text, const ClassTaxonomy& taxonomy);

/// The effective configuration in the same key-value syntax parse accepts.
std::string serialize_forge_config(const ForgeConfig& config, const ClassTaxonomy& taxonomy);

/// Structural checks: positive frame, valid ranges, 1 <= objects_min <=
/// objects_max, fov in (0, 180). Throws Error with the offending key.
void validate_config(const ForgeConfig& config);

/// Scans mesh_dir/<class_name>/*.obj into mesh_pools (refs sorted for
/// determinism) and background_dir/*.png into background_pool.
void populate_pools_from_dirs(ForgeConfig& config, const ClassTaxonomy& taxonomy);

// ---------------------------------------------------------------------------
// Pinhole camera math, shared by the sampler's frustum test and the renderer.

template <typename Scalar>
struct CameraFrame {
  Eigen::Vector3<Scalar> origin;
  Eigen::Vector3<Scalar> right;
  Eigen::Vector3<Scalar> up;
  Eigen::Vector3<Scalar> forward;
  Scalar tan_half_fov{};
};

template <typename Scalar>
CameraFrame<Scalar> make_camera_frame(const Camera& camera) {
  using Vec = Eigen::Vector3<Scalar>;
  const Vec position = camera.position.cast<Scalar>();
  const Vec target = camera.look_at.cast<Scalar>();
  Vec forward = target - position;
  const Scalar len = forward.norm();
  if (!(len > Scalar(0))) throw Error("camera position equals its look-at point");
  forward /= len;
  Vec world_up = Vec::UnitY();
  if (std::abs(forward.dot(world_up)) > Scalar(0.999)) world_up = Vec::UnitZ();
  const Vec right = forward.cross(world_up).normalized();
  const Vec up = right.cross(forward);
  const Scalar tan_half = std::tan(Scalar(0.5) * camera.vfov_deg * Scalar(EIGEN_PI) / Scalar(180));
  return {position, right, up, forward, tan_half};
}

/// Camera-space coordinates: (ndc_x, ndc_y, depth). A point is inside the
/// frustum iff depth > 0 and both ndc components are within [-1, 1].
template <typename Scalar>
Eigen::Vector3<Scalar> project_point(const CameraFrame<Scalar>& frame,
                                     const Eigen::Vector3<Scalar>& point, Scalar aspect) {
  const Eigen::Vector3<Scalar> d = point - frame.origin;
  const Scalar depth = d.dot(frame.forward);
  if (depth <= Scalar(0)) return {Scalar(0), Scalar(0), depth};
  const Scalar x = d.dot(frame.right) / (depth * frame.tan_half_fov * aspect);
  const Scalar y = d.dot(frame.up) / (depth * frame.tan_half_fov);
  return {x, y, depth};
}

template <typename Scalar>
bool inside_frustum(const CameraFrame<Scalar>& frame, const Eigen::Vector3<Scalar>& point,
                    Scalar aspect) {
  const Eigen::Vector3<Scalar> p = project_point(frame, point, aspect);
  return p.z() > Scalar(1e-6) && std::abs(p.x()) <= Scalar(1) && std::abs(p.y()) <= Scalar(1);
}

/// Direction of the primary ray through the center of pixel (px, py).
template <typename Scalar>
Eigen::Vector3<Scalar> pixel_ray_direction(const CameraFrame<Scalar>& frame, int width, int height,
                                           int px, int py) {
  const Scalar aspect = Scalar(width) / Scalar(height);
  const Scalar sx =
      (Scalar(2) * (Scalar(px) + Scalar(0.5)) / Scalar(width) - Scalar(1)) * frame.tan_half_fov * aspect;
  const Scalar sy =
      (Scalar(1) - Scalar(2) * (Scalar(py) + Scalar(0.5)) / Scalar(height)) * frame.tan_half_fov;
  return (frame.right * sx + frame.up * sy + frame.forward).normalized();
}

/// Rotation from Euler angles, applied as Rz(z) * Ry(y) * Rx(x).
inline Eigen::Matrix3d euler_rotation(const Eigen::Vector3d& angles) {
  return (Eigen::AngleAxisd(angles.z(), Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(angles.y(), Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(angles.x(), Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

// ---------------------------------------------------------------------------

/// Deterministically instantiates a randomized scene for `class_index` from
/// (config, seed). The first object always carries class_index; extras repeat
/// it unless mixed_classes is set, in which case they draw uniformly from the
/// classes that have mesh pools. Object centers are rejection-sampled into the
/// camera frustum. Draw order is fixed: object count, light direction (y then
/// azimuth), light intensity, background, then per object class, mesh, scale,
/// rotation (x, y, z), translation attempts.
SceneDescription sample_scene(const ForgeConfig& config, int class_index, std::uint64_t seed);

}  // namespace segkit
