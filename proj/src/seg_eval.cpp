#include "segkit/seg_eval.hpp"

#include "segkit/parallel.hpp"
#include "segkit/png_io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace segkit {

void accumulate(ConfusionMatrix& conf, const LabelImage& gt, const LabelImage& pred) {
  if (!gt.same_size(pred)) {
    throw Error("accumulate: ground truth is " + std::to_string(gt.width) + "x" +
                std::to_string(gt.height) + " but prediction is " + std::to_string(pred.width) +
                "x" + std::to_string(pred.height));
  }
  const int n = conf.size();
  for (std::size_t i = 0; i < gt.pixels(); ++i) {
    const std::uint8_t g = gt.data[i];
    const std::uint8_t p = pred.data[i];
    if (g == ClassTaxonomy::kVoidIndex) continue;
    if (p == ClassTaxonomy::kVoidIndex) {
      throw Error("accumulate: prediction contains void (255); predictions must be total");
    }
    if (g >= n || p >= n) {
      throw Error("accumulate: label value outside taxonomy: gt=" + std::to_string(g) +
                  " pred=" + std::to_string(p));
    }
    conf.counts(g, p) += 1;
  }
}

Eigen::VectorXd per_class_iou(const ConfusionMatrix& conf) {
  const int n = conf.size();
  Eigen::VectorXd iou(n);
  for (int c = 0; c < n; ++c) {
    const std::int64_t tp = conf.counts(c, c);
    const std::int64_t gt_total = conf.counts.row(c).sum();
    const std::int64_t pred_total = conf.counts.col(c).sum();
    const std::int64_t denom = gt_total + pred_total - tp;  // TP + FP + FN
    iou(c) = denom == 0 ? std::numeric_limits<double>::quiet_NaN()
                        : static_cast<double>(tp) / static_cast<double>(denom);
  }
  return iou;
}

double mean_iou(const Eigen::VectorXd& per_class) {
  double sum = 0.0;
  int defined = 0;
  for (Eigen::Index c = 0; c < per_class.size(); ++c) {
    if (!std::isnan(per_class(c))) {
      sum += per_class(c);
      ++defined;
    }
  }
  if (defined == 0) throw Error("mean_iou: no class has a defined IoU");
  return sum / defined;
}

IoUReport evaluate_dataset(const std::filesystem::path& pred_dir,
                           const std::filesystem::path& gt_dir, const ClassTaxonomy& taxonomy,
                           int threads) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(gt_dir)) throw Error("ground-truth directory not found: " + gt_dir.string());
  if (!fs::is_directory(pred_dir)) throw Error("prediction directory not found: " + pred_dir.string());

  std::vector<fs::path> gt_files;
  for (const auto& entry : fs::directory_iterator(gt_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      gt_files.push_back(entry.path());
    }
  }
  if (gt_files.empty()) throw Error("no .png label files in " + gt_dir.string());
  std::sort(gt_files.begin(), gt_files.end());

  const int n = taxonomy.size();
  std::vector<ConfusionMatrix> partial(gt_files.size(), ConfusionMatrix(n));
  parallel_for(static_cast<int>(gt_files.size()), threads, [&](int i) {
    const fs::path& gt_path = gt_files[static_cast<std::size_t>(i)];
    const std::string image_id = gt_path.stem().string();
    const fs::path pred_path = pred_dir / gt_path.filename();
    if (!fs::exists(pred_path)) {
      throw Error(image_id + ": missing prediction " + pred_path.string());
    }
    const LabelImage gt = load_label_png(gt_path);
    const LabelImage pred = load_label_png(pred_path);
    try {
      accumulate(partial[static_cast<std::size_t>(i)], gt, pred);
    } catch (const Error& e) {
      throw Error(image_id + ": " + e.what());
    }
  });

  IoUReport report;
  report.confusion = ConfusionMatrix(n);
  for (const ConfusionMatrix& m : partial) report.confusion += m;  // integer sums, order-free
  report.per_class = per_class_iou(report.confusion);
  report.mean = mean_iou(report.per_class);
  return report;
}

std::string format_report_table(const IoUReport& report, const ClassTaxonomy& taxonomy) {
  std::size_t name_width = std::string("Mean IoU").size();
  for (const std::string& name : taxonomy.names()) name_width = std::max(name_width, name.size());

  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  for (int c = 0; c < taxonomy.size(); ++c) {
    out << std::left << std::setw(static_cast<int>(name_width) + 2) << taxonomy.name(c);
    if (std::isnan(report.per_class(c))) {
      out << "    -";
    } else {
      out << std::right << std::setw(6) << 100.0 * report.per_class(c);
    }
    out << '\n';
  }
  out << std::left << std::setw(static_cast<int>(name_width) + 2) << "Mean IoU" << std::right
      << std::setw(6) << 100.0 * report.mean << '\n';
  return out.str();
}

std::string format_report_kv(const IoUReport& report, const ClassTaxonomy& taxonomy) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6);
  for (int c = 0; c < taxonomy.size(); ++c) {
    if (!std::isnan(report.per_class(c))) {
      out << "iou." << taxonomy.name(c) << " = " << report.per_class(c) << '\n';
    }
  }
  out << "mean_iou = " << report.mean << '\n';
  return out.str();
}

}  // namespace segkit
