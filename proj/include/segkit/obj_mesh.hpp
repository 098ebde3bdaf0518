#pragma once

#include "segkit/voc.hpp"

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <string_view>
#include <vector>

namespace segkit {

/// Triangle soup with a flat per-triangle albedo in [0,1]^3.
struct Mesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Eigen::Vector3d> albedo;  // one entry per triangle

  std::size_t triangle_count() const { return triangles.size(); }
};

inline constexpr double kDefaultAlbedo = 0.5;  // mid-gray when no material is given

/// Parses Wavefront-style text: `v x y z` positions and `f ...` faces.
/// Faces with more than three vertices are fan-triangulated; `i/t/n` vertex
/// references keep only the position index; negative indices count from the
/// end. `vn`/`vt`/`o`/`g`/`s` lines are skipped. `usemtl` switches the albedo
/// for subsequent faces to a color from `materials` (unknown names fall back
/// to mid-gray); `mtllib` is recorded in mtllib_refs for file-level loaders.
/// Throws Error on malformed lines and out-of-range face indices.
Mesh parse_obj(std::string_view text,
               const std::vector<std::pair<std::string, Eigen::Vector3d>>& materials = {},
               std::vector<std::string>* mtllib_refs = nullptr);

/// parse_obj on raw bytes, no material resolution.
Mesh load_mesh(std::string_view obj_text);

/// Loads an .obj from disk, resolving any `mtllib` against the file's
/// directory and honoring `newmtl`/`Kd` entries. Missing or unreadable
/// material files are treated as absent.
Mesh load_mesh_file(const std::filesystem::path& path);

/// Diffuse colors from .mtl text: (material name, Kd).
std::vector<std::pair<std::string, Eigen::Vector3d>> parse_mtl(std::string_view text);

/// Recenters the bounding box to the origin and scales the longest box edge
/// to unit length. Degenerate (single-point) meshes only get recentered.
void normalize_unit_box(Mesh& mesh);

}  // namespace segkit
