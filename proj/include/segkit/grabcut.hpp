#pragma once

#include "segkit/gmm.hpp"
#include "segkit/voc.hpp"

#include <cstdint>
#include <vector>

namespace segkit {

struct GrabCutParams {
  int gmm_components = 5;
  double gamma = 50.0;  // pairwise strength
  int iterations = 5;   // (refit, min-cut) rounds
  // neighborhood is 8-connected
};

/// Contrast scale for the boundary term:
/// 1 / (2 * mean over 8-neighbor pairs of squared color distance).
/// A constant image yields 0, collapsing the boundary weight to a constant.
double compute_beta(const RgbImage& image);

/// Boundary weight between 8-neighbors p and q:
/// gamma * exp(-beta * |z_p - z_q|^2) / dist(p, q).
double boundary_weight(const Eigen::Vector3d& zp, const Eigen::Vector3d& zq, double beta,
                       double gamma, double dist);

/// The GrabCut objective for a full-image labeling that is background
/// everywhere outside the box: sum of -log model densities over in-box pixels
/// plus boundary weights across every label-discontinuous 8-neighbor pair
/// touching the box. Shared by the solver and by enumeration oracles.
double grabcut_energy(const RgbImage& image, const Box& box, const BinaryMask& mask,
                      const GaussianMixture& foreground, const GaussianMixture& background,
                      double beta, double gamma);

struct GrabCutResult {
  BinaryMask mask;  // full-image dims; foreground only ever inside the box
  GaussianMixture foreground;  // models of the final executed cut
  GaussianMixture background;
  double beta = 0.0;
  std::vector<double> round_energies;  // energy after each round's cut, under that round's models
};

/// Iterated GrabCut: initialize foreground = box interior, then `iterations`
/// rounds of (model refit on the current segmentation, globally optimal
/// min-cut). Pixels outside the box are hard background. Rounds stop early if
/// a cut leaves either pixel set empty. Deterministic in (image, box, params,
/// seed).
GrabCutResult grabcut_run(const RgbImage& image, const Box& box, const GrabCutParams& params,
                          std::uint64_t seed);

BinaryMask grabcut_segment(const RgbImage& image, const Box& box, const GrabCutParams& params,
                           std::uint64_t seed);

}  // namespace segkit
