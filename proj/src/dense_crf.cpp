#include "segkit/dense_crf.hpp"

#include "segkit/parallel.hpp"

#include <cmath>
#include <set>

namespace segkit {

namespace {

void softmax_rows(Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double max = m.row(i).maxCoeff();
    m.row(i) = (m.row(i).array() - max).exp();
    m.row(i) /= m.row(i).sum();
  }
}

void check_params(const CrfParams& params) {
  if (params.spatial_weight < 0 || params.bilateral_weight < 0) {
    throw Error("crf: kernel weights must be >= 0");
  }
  if (params.spatial_sigma <= 0 || params.bilateral_spatial_sigma <= 0 ||
      params.bilateral_color_sigma <= 0) {
    throw Error("crf: kernel sigmas must be > 0");
  }
  if (params.mean_field_iterations < 0) throw Error("crf: iteration count must be >= 0");
}

}  // namespace

void validate_unary(const UnaryField& unary) {
  if (unary.width <= 0 || unary.height <= 0 || unary.num_labels <= 0) {
    throw Error("unary field has empty dimensions");
  }
  if (unary.costs.rows() != static_cast<Eigen::Index>(unary.width) * unary.height ||
      unary.costs.cols() != unary.num_labels) {
    throw Error("unary cost matrix does not match its dimensions");
  }
  if (!unary.costs.allFinite() || (unary.costs.array() < 0.0).any()) {
    throw Error("unary costs must be finite and non-negative");
  }
}

UnaryField boxes_to_unary(const BoxAnnotation& annotation, int width, int height,
                          double inside_fg_prob, double outside_bg_prob) {
  validate_annotation(annotation, width, height);
  if (!(inside_fg_prob > 0 && inside_fg_prob < 1) || !(outside_bg_prob > 0 && outside_bg_prob <= 1)) {
    throw Error("boxes_to_unary: probabilities must lie in (0, 1)");
  }
  constexpr double kProbFloor = 1e-9;
  const int num_labels = ClassTaxonomy::kNumClasses;

  UnaryField unary(width, height, num_labels);
  Eigen::VectorXd prob(num_labels);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      std::set<int> classes;
      for (const LabeledBox& labeled : annotation.boxes) {
        if (labeled.box.contains(x, y)) classes.insert(labeled.class_index);
      }
      prob.setZero();
      if (classes.empty()) {
        prob(0) = outside_bg_prob;
        const double rest = (1.0 - outside_bg_prob) / (num_labels - 1);
        for (int l = 1; l < num_labels; ++l) prob(l) = rest;
      } else {
        const double share = inside_fg_prob / static_cast<double>(classes.size());
        for (int c : classes) prob(c) = share;
        prob(0) = 1.0 - inside_fg_prob;
      }
      unary.costs.row(static_cast<Eigen::Index>(y) * width + x) =
          (-prob.cwiseMax(kProbFloor).array().log()).transpose();
    }
  }
  return unary;
}

Eigen::MatrixXd mean_field_inference(const RgbImage& image, const UnaryField& unary,
                                     const CrfParams& params, int threads,
                                     const MeanFieldObserver& observer) {
  check_params(params);
  validate_unary(unary);
  if (image.width != unary.width || image.height != unary.height) {
    throw Error("crf: unary dimensions do not match image");
  }

  const Eigen::Index n = unary.costs.rows();
  const int width = unary.width;

  // Pixel features, precomputed once: position and color.
  Eigen::MatrixXd color(n, 3);
  for (int y = 0; y < unary.height; ++y) {
    for (int x = 0; x < width; ++x) {
      color.row(static_cast<Eigen::Index>(y) * width + x) = pixel_color(image, x, y).transpose();
    }
  }

  const double inv_2_sg = 0.5 / (params.spatial_sigma * params.spatial_sigma);
  const double inv_2_sa = 0.5 / (params.bilateral_spatial_sigma * params.bilateral_spatial_sigma);
  const double inv_2_sb = 0.5 / (params.bilateral_color_sigma * params.bilateral_color_sigma);

  Eigen::MatrixXd q = -unary.costs;
  softmax_rows(q);
  if (observer) observer(0, q);

  Eigen::MatrixXd messages(n, unary.num_labels);
  for (int iteration = 1; iteration <= params.mean_field_iterations; ++iteration) {
    parallel_for(static_cast<int>(n), threads, [&](int p) {
      const int px = p % width;
      const int py = p / width;
      Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(unary.num_labels);
      for (Eigen::Index o = 0; o < n; ++o) {
        if (o == p) continue;  // kernels carry no self-interaction
        const int ox = static_cast<int>(o) % width;
        const int oy = static_cast<int>(o) / width;
        const double d2 = static_cast<double>((px - ox) * (px - ox) + (py - oy) * (py - oy));
        const double c2 = (color.row(p) - color.row(o)).squaredNorm();
        const double w = params.spatial_weight * std::exp(-d2 * inv_2_sg) +
                         params.bilateral_weight * std::exp(-d2 * inv_2_sa - c2 * inv_2_sb);
        acc += w * q.row(o);
      }
      messages.row(p) = acc;
    });

    // Potts compatibility: label l is penalized by mass on every other label;
    // the common per-pixel sum cancels in the row softmax.
    q = -unary.costs + messages;
    softmax_rows(q);
    if (observer) observer(iteration, q);
  }
  return q;
}

LabelImage dense_crf_refine(const RgbImage& image, const UnaryField& unary,
                            const CrfParams& params, int threads) {
  const Eigen::MatrixXd q = mean_field_inference(image, unary, params, threads);
  LabelImage label(unary.width, unary.height);
  for (Eigen::Index p = 0; p < q.rows(); ++p) {
    int best = 0;
    for (int l = 1; l < unary.num_labels; ++l) {
      if (q(p, l) > q(p, best)) best = l;
    }
    label.data[static_cast<std::size_t>(p)] = static_cast<std::uint8_t>(best);
  }
  return label;
}

}  // namespace segkit
