#include "segkit/obj_mesh.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace segkit {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

double parse_double(const std::string& token, int line_no) {
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw Error("obj line " + std::to_string(line_no) + ": bad number \"" + token + "\"");
  }
}

// Face tokens look like `7`, `7/1`, `7//3`, `7/1/3`; only the position index matters.
int parse_face_index(const std::string& token, int vertex_count, int line_no) {
  const std::string head = token.substr(0, token.find('/'));
  int idx = 0;
  const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
  if (ec != std::errc() || ptr != head.data() + head.size() || idx == 0) {
    throw Error("obj line " + std::to_string(line_no) + ": bad face index \"" + token + "\"");
  }
  const int resolved = idx > 0 ? idx - 1 : vertex_count + idx;
  if (resolved < 0 || resolved >= vertex_count) {
    throw Error("obj line " + std::to_string(line_no) + ": face index " + std::to_string(idx) +
                " out of range for " + std::to_string(vertex_count) + " vertices");
  }
  return resolved;
}

}  // namespace

Mesh parse_obj(std::string_view text,
               const std::vector<std::pair<std::string, Eigen::Vector3d>>& materials,
               std::vector<std::string>* mtllib_refs) {
  Mesh mesh;
  Eigen::Vector3d albedo(kDefaultAlbedo, kDefaultAlbedo, kDefaultAlbedo);

  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    const std::string& tag = tokens[0];

    if (tag == "v") {
      if (tokens.size() < 4) {
        throw Error("obj line " + std::to_string(line_no) + ": vertex needs 3 coordinates");
      }
      mesh.vertices.emplace_back(parse_double(tokens[1], line_no), parse_double(tokens[2], line_no),
                                 parse_double(tokens[3], line_no));
    } else if (tag == "f") {
      if (tokens.size() < 4) {
        throw Error("obj line " + std::to_string(line_no) + ": face needs at least 3 vertices");
      }
      const int n = static_cast<int>(mesh.vertices.size());
      std::vector<int> poly;
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        poly.push_back(parse_face_index(tokens[t], n, line_no));
      }
      for (std::size_t t = 1; t + 1 < poly.size(); ++t) {
        mesh.triangles.push_back({poly[0], poly[t], poly[t + 1]});
        mesh.albedo.push_back(albedo);
      }
    } else if (tag == "usemtl") {
      albedo = Eigen::Vector3d(kDefaultAlbedo, kDefaultAlbedo, kDefaultAlbedo);
      if (tokens.size() >= 2) {
        auto it = std::find_if(materials.begin(), materials.end(),
                               [&](const auto& m) { return m.first == tokens[1]; });
        if (it != materials.end()) albedo = it->second;
      }
    } else if (tag == "mtllib") {
      if (mtllib_refs != nullptr) {
        for (std::size_t t = 1; t < tokens.size(); ++t) mtllib_refs->push_back(tokens[t]);
      }
    } else if (tag == "vn" || tag == "vt" || tag == "o" || tag == "g" || tag == "s" ||
               tag == "l" || tag == "p") {
      continue;
    } else {
      throw Error("obj line " + std::to_string(line_no) + ": unrecognized tag \"" + tag + "\"");
    }
  }

  if (mesh.triangles.empty()) throw Error("obj has no faces");
  return mesh;
}

Mesh load_mesh(std::string_view obj_text) { return parse_obj(obj_text); }

std::vector<std::pair<std::string, Eigen::Vector3d>> parse_mtl(std::string_view text) {
  std::vector<std::pair<std::string, Eigen::Vector3d>> materials;
  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    if (tokens[0] == "newmtl" && tokens.size() >= 2) {
      materials.emplace_back(tokens[1],
                             Eigen::Vector3d(kDefaultAlbedo, kDefaultAlbedo, kDefaultAlbedo));
    } else if (tokens[0] == "Kd" && tokens.size() >= 4 && !materials.empty()) {
      materials.back().second = Eigen::Vector3d(parse_double(tokens[1], line_no),
                                                parse_double(tokens[2], line_no),
                                                parse_double(tokens[3], line_no))
                                    .cwiseMax(0.0)
                                    .cwiseMin(1.0);
    }
    // every other .mtl statement is irrelevant to a flat-albedo renderer
  }
  return materials;
}

Mesh load_mesh_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();

  std::vector<std::string> mtllib_refs;
  std::vector<std::pair<std::string, Eigen::Vector3d>> materials;
  // First pass only collects mtllib names; parse again once materials resolve.
  try {
    (void)parse_obj(buffer.str(), {}, &mtllib_refs);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  for (const std::string& ref : mtllib_refs) {
    std::ifstream mtl(path.parent_path() / ref);
    if (!mtl) continue;  // optional by contract
    std::stringstream mtl_buffer;
    mtl_buffer << mtl.rdbuf();
    auto parsed = parse_mtl(mtl_buffer.str());
    materials.insert(materials.end(), parsed.begin(), parsed.end());
  }
  try {
    return parse_obj(buffer.str(), materials);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void normalize_unit_box(Mesh& mesh) {
  if (mesh.vertices.empty()) return;
  Eigen::Vector3d lo = mesh.vertices.front();
  Eigen::Vector3d hi = mesh.vertices.front();
  for (const Eigen::Vector3d& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const Eigen::Vector3d center = 0.5 * (lo + hi);
  const double extent = (hi - lo).maxCoeff();
  const double scale = extent > 0 ? 1.0 / extent : 1.0;
  for (Eigen::Vector3d& v : mesh.vertices) v = (v - center) * scale;
}

}  // namespace segkit
