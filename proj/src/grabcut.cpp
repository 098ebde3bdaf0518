#include "segkit/grabcut.hpp"

#include "segkit/maxflow.hpp"
#include "segkit/rng.hpp"

#include <cmath>
#include <vector>

namespace segkit {

namespace {

// Forward half of the 8-neighborhood; every unordered pair appears once.
constexpr int kOffsets[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
const double kSqrt2 = std::sqrt(2.0);

double offset_dist(int dx, int dy) { return (dx != 0 && dy != 0) ? kSqrt2 : 1.0; }

void check_box(const RgbImage& image, const Box& box) {
  if (!(0 <= box.xmin && box.xmin < box.xmax && box.xmax <= image.width) ||
      !(0 <= box.ymin && box.ymin < box.ymax && box.ymax <= image.height)) {
    throw Error("grabcut: degenerate or out-of-bounds box");
  }
}

std::vector<Eigen::Vector3d> gather_colors(const RgbImage& image, const BinaryMask& mask,
                                           std::uint8_t value) {
  std::vector<Eigen::Vector3d> colors;
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      if (mask.at(x, y) == value) colors.push_back(pixel_color(image, x, y));
    }
  }
  return colors;
}

}  // namespace

double compute_beta(const RgbImage& image) {
  if (image.pixels() == 0) throw Error("compute_beta: empty image");
  double sum = 0.0;
  long long pairs = 0;
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const Eigen::Vector3d zp = pixel_color(image, x, y);
      for (const auto& off : kOffsets) {
        const int nx = x + off[0];
        const int ny = y + off[1];
        if (nx < 0 || nx >= image.width || ny < 0 || ny >= image.height) continue;
        sum += (zp - pixel_color(image, nx, ny)).squaredNorm();
        ++pairs;
      }
    }
  }
  if (pairs == 0 || sum == 0.0) return 0.0;
  return 1.0 / (2.0 * sum / static_cast<double>(pairs));
}

double boundary_weight(const Eigen::Vector3d& zp, const Eigen::Vector3d& zq, double beta,
                       double gamma, double dist) {
  return gamma * std::exp(-beta * (zp - zq).squaredNorm()) / dist;
}

double grabcut_energy(const RgbImage& image, const Box& box, const BinaryMask& mask,
                      const GaussianMixture& foreground, const GaussianMixture& background,
                      double beta, double gamma) {
  check_box(image, box);
  if (mask.width != image.width || mask.height != image.height) {
    throw Error("grabcut_energy: mask dimensions do not match image");
  }

  double energy = 0.0;
  for (int y = box.ymin; y < box.ymax; ++y) {
    for (int x = box.xmin; x < box.xmax; ++x) {
      const Eigen::Vector3d z = pixel_color(image, x, y);
      energy -= mask.at(x, y) == kForeground ? foreground.log_pdf(z) : background.log_pdf(z);
    }
  }

  // Pairs with both endpoints outside the box are background-background and
  // contribute nothing; a one-pixel dilation of the box covers the rest.
  const int x0 = std::max(0, box.xmin - 1);
  const int y0 = std::max(0, box.ymin - 1);
  const int x1 = std::min(image.width, box.xmax + 1);
  const int y1 = std::min(image.height, box.ymax + 1);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const bool p_in = box.contains(x, y);
      const std::uint8_t lp = p_in ? mask.at(x, y) : kBackground;
      const Eigen::Vector3d zp = pixel_color(image, x, y);
      for (const auto& off : kOffsets) {
        const int nx = x + off[0];
        const int ny = y + off[1];
        if (nx < 0 || nx >= image.width || ny < 0 || ny >= image.height) continue;
        const bool q_in = box.contains(nx, ny);
        if (!p_in && !q_in) continue;
        const std::uint8_t lq = q_in ? mask.at(nx, ny) : kBackground;
        if (lp == lq) continue;
        energy += boundary_weight(zp, pixel_color(image, nx, ny), beta, gamma,
                                  offset_dist(off[0], off[1]));
      }
    }
  }
  return energy;
}

GrabCutResult grabcut_run(const RgbImage& image, const Box& box, const GrabCutParams& params,
                          std::uint64_t seed) {
  check_box(image, box);
  if (params.gmm_components < 1) throw Error("grabcut: gmm_components must be >= 1");
  if (params.gamma < 0) throw Error("grabcut: gamma must be >= 0");
  if (params.iterations < 1) throw Error("grabcut: iterations must be >= 1");

  GrabCutResult result;
  result.beta = compute_beta(image);

  const int bw = box.xmax - box.xmin;
  const int bh = box.ymax - box.ymin;
  auto local = [&](int x, int y) { return (y - box.ymin) * bw + (x - box.xmin); };

  result.mask = BinaryMask(image.width, image.height, kBackground);
  for (int y = box.ymin; y < box.ymax; ++y) {
    for (int x = box.xmin; x < box.xmax; ++x) result.mask.at(x, y) = kForeground;
  }

  for (int round = 0; round < params.iterations; ++round) {
    std::vector<Eigen::Vector3d> fg_colors = gather_colors(image, result.mask, kForeground);
    std::vector<Eigen::Vector3d> bg_colors = gather_colors(image, result.mask, kBackground);
    if (bg_colors.empty()) {
      // box spans the whole image: seed the background model from everything
      bg_colors = fg_colors;
    }

    const std::uint64_t round_seed = hash_mix(seed, static_cast<std::uint64_t>(round));
    if (round == 0) {
      result.foreground =
          GaussianMixture::fit(fg_colors, params.gmm_components, hash_mix(round_seed, 1));
      result.background =
          GaussianMixture::fit(bg_colors, params.gmm_components, hash_mix(round_seed, 2));
    } else {
      // Warm-started EM keeps the data term non-increasing round over round.
      result.foreground = GaussianMixture::refit(fg_colors, result.foreground, hash_mix(round_seed, 1));
      result.background = GaussianMixture::refit(bg_colors, result.background, hash_mix(round_seed, 2));
    }

    MaxFlowGraph graph(bw * bh);
    for (int y = box.ymin; y < box.ymax; ++y) {
      for (int x = box.xmin; x < box.xmax; ++x) {
        const Eigen::Vector3d z = pixel_color(image, x, y);
        const double d_fg = -result.foreground.log_pdf(z);
        const double d_bg = -result.background.log_pdf(z);

        double boundary = 0.0;  // cost of labeling this pixel fg next to fixed background
        double n_link[4] = {0.0, 0.0, 0.0, 0.0};
        for (int k = 0; k < 4; ++k) {
          const int nx = x + kOffsets[k][0];
          const int ny = y + kOffsets[k][1];
          if (nx < 0 || nx >= image.width || ny < 0 || ny >= image.height) continue;
          const double w = boundary_weight(z, pixel_color(image, nx, ny), result.beta,
                                           params.gamma, offset_dist(kOffsets[k][0], kOffsets[k][1]));
          if (box.contains(nx, ny)) {
            n_link[k] = w;
          } else {
            boundary += w;
          }
        }
        // The backward half of the neighborhood only matters for pixels whose
        // backward neighbors are outside the box.
        for (const auto& off : kOffsets) {
          const int nx = x - off[0];
          const int ny = y - off[1];
          if (nx < 0 || nx >= image.width || ny < 0 || ny >= image.height) continue;
          if (!box.contains(nx, ny)) {
            boundary += boundary_weight(z, pixel_color(image, nx, ny), result.beta, params.gamma,
                                        offset_dist(off[0], off[1]));
          }
        }

        // Shift both terminal capacities by their minimum: keeps them
        // non-negative without moving the argmin.
        const double cap_bg_side = d_bg;                 // paid when the pixel ends background
        const double cap_fg_side = d_fg + boundary;      // paid when the pixel ends foreground
        const double shift = std::min(cap_bg_side, cap_fg_side);
        graph.add_terminal(local(x, y), cap_bg_side - shift, cap_fg_side - shift);

        for (int k = 0; k < 4; ++k) {
          if (n_link[k] > 0.0) {
            graph.add_edge(local(x, y), local(x + kOffsets[k][0], y + kOffsets[k][1]), n_link[k],
                           n_link[k]);
          }
        }
      }
    }
    graph.solve();

    bool any_fg = false;
    bool any_bg_inside = false;
    for (int y = box.ymin; y < box.ymax; ++y) {
      for (int x = box.xmin; x < box.xmax; ++x) {
        const bool fg = graph.in_source_side(local(x, y));
        result.mask.at(x, y) = fg ? kForeground : kBackground;
        (fg ? any_fg : any_bg_inside) = true;
      }
    }

    result.round_energies.push_back(grabcut_energy(image, box, result.mask, result.foreground,
                                                   result.background, result.beta, params.gamma));

    const bool outside_exists = static_cast<long long>(image.width) * image.height > box.area();
    if (!any_fg || (!any_bg_inside && !outside_exists)) break;  // nothing left to refit
  }
  return result;
}

BinaryMask grabcut_segment(const RgbImage& image, const Box& box, const GrabCutParams& params,
                           std::uint64_t seed) {
  return grabcut_run(image, box, params, seed).mask;
}

}  // namespace segkit
