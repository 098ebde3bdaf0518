#pragma once

#include "segkit/voc.hpp"

#include <Eigen/Core>

#include <functional>

namespace segkit {

struct CrfParams {
  double spatial_weight = 3.0;           // w_s
  double spatial_sigma = 3.0;            // theta_gamma, pixels
  double bilateral_weight = 10.0;        // w_b
  double bilateral_spatial_sigma = 80.0; // theta_alpha, pixels
  double bilateral_color_sigma = 13.0;   // theta_beta, 8-bit color units
  int mean_field_iterations = 10;
};

/// Per-pixel, per-label costs (negative log-probabilities), pixels row-major.
struct UnaryField {
  int width = 0;
  int height = 0;
  int num_labels = 0;
  Eigen::MatrixXd costs;  // (width*height) x num_labels

  UnaryField() = default;
  UnaryField(int w, int h, int labels)
      : width(w),
        height(h),
        num_labels(labels),
        costs(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(w) * h, labels)) {}
};

/// Throws Error unless dimensions are consistent and every cost is a finite
/// non-negative real.
void validate_unary(const UnaryField& unary);

/// Box priors as a 21-label unary field. Outside every box the probability
/// mass sits on background (outside_bg_prob, remainder spread over the other
/// 20 labels); inside, inside_fg_prob splits equally across the distinct box
/// classes covering the pixel and the remainder goes to background. Labels
/// with no mass are floored at 1e-9 so costs stay finite.
UnaryField boxes_to_unary(const BoxAnnotation& annotation, int width, int height,
                          double inside_fg_prob = 0.9, double outside_bg_prob = 0.99);

using MeanFieldObserver = std::function<void(int iteration, const Eigen::MatrixXd& q)>;

/// Fully connected mean-field inference with two Gaussian kernels (spatial and
/// bilateral) under Potts compatibility. Messages are computed by direct
/// exact summation over all pixel pairs from the previous iteration's Q
/// (synchronous updates), then Q is renormalized row-wise. The observer, when
/// set, sees Q after each renormalization. Per-pixel message sums run in a
/// fixed order, so results do not depend on the thread count.
Eigen::MatrixXd mean_field_inference(const RgbImage& image, const UnaryField& unary,
                                     const CrfParams& params, int threads = 1,
                                     const MeanFieldObserver& observer = {});

/// mean_field_inference followed by per-pixel argmax (lowest index wins ties).
LabelImage dense_crf_refine(const RgbImage& image, const UnaryField& unary,
                            const CrfParams& params, int threads = 1);

}  // namespace segkit
