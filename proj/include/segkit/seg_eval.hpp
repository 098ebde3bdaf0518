#pragma once

#include "segkit/voc.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <string>

namespace segkit {

/// Pixel tallies, rows = ground truth, columns = prediction. Ground-truth void
/// pixels contribute to no cell.
struct ConfusionMatrix {
  using Counts = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
  Counts counts;

  explicit ConfusionMatrix(int num_classes = ClassTaxonomy::kNumClasses)
      : counts(Counts::Zero(num_classes, num_classes)) {}

  int size() const { return static_cast<int>(counts.rows()); }
  std::int64_t total() const { return counts.sum(); }

  ConfusionMatrix& operator+=(const ConfusionMatrix& other) {
    counts += other.counts;
    return *this;
  }
};

/// Tallies one (gt, pred) pair into conf. Throws on dimension mismatch and on
/// void values in the prediction; predictions must be total.
void accumulate(ConfusionMatrix& conf, const LabelImage& gt, const LabelImage& pred);

/// IoU_c = TP / (TP + FP + FN) per class; NaN marks classes with an empty
/// denominator (absent from both ground truth and prediction).
Eigen::VectorXd per_class_iou(const ConfusionMatrix& conf);

/// Arithmetic mean over defined (non-NaN) entries. Throws if none is defined.
double mean_iou(const Eigen::VectorXd& per_class);

struct IoUReport {
  ConfusionMatrix confusion;
  Eigen::VectorXd per_class;
  double mean = 0.0;
};

/// Accumulates one global confusion matrix over every label file in gt_dir
/// (matched by filename in pred_dir), then scores it. A single dataset-level
/// matrix is the PASCAL convention; averaging per-image IoUs is not equivalent.
/// Throws on empty gt_dir, missing predictions, or per-image errors (message
/// carries the image id).
IoUReport evaluate_dataset(const std::filesystem::path& pred_dir,
                           const std::filesystem::path& gt_dir, const ClassTaxonomy& taxonomy,
                           int threads = 1);

/// Aligned per-class table, one row per class plus the mean row.
std::string format_report_table(const IoUReport& report, const ClassTaxonomy& taxonomy);

/// Machine-readable `iou.<class> = value` lines (defined classes only) plus
/// `mean_iou = value`.
std::string format_report_kv(const IoUReport& report, const ClassTaxonomy& taxonomy);

}  // namespace segkit
