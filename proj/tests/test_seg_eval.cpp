#include "segkit/seg_eval.hpp"

#include "segkit/png_io.hpp"
#include "segkit/rng.hpp"

#include <doctest.h>

#include <cmath>

#include "test_util.hpp"

using namespace segkit;

namespace {

LabelImage from_values(int w, int h, std::vector<std::uint8_t> values) {
  LabelImage img(w, h);
  img.data = std::move(values);
  return img;
}

}  // namespace

TEST_CASE("accumulate puts perfect predictions on the diagonal") {
  SplitMix64 rng(11);
  LabelImage gt = testing::random_label_image(rng, 16);
  for (auto& v : gt.data) {
    if (v == ClassTaxonomy::kVoidIndex) v = 4;  // void-free here
  }
  ConfusionMatrix conf;
  accumulate(conf, gt, gt);
  CHECK(conf.total() == static_cast<std::int64_t>(gt.pixels()));
  CHECK(conf.counts.diagonal().sum() == conf.total());
}

TEST_CASE("accumulate skips void ground truth entirely") {
  const LabelImage gt(3, 3, ClassTaxonomy::kVoidIndex);
  const LabelImage pred(3, 3, 5);
  ConfusionMatrix conf;
  accumulate(conf, gt, pred);
  CHECK(conf.total() == 0);
}

TEST_CASE("accumulate hand tally on a 2x2 fixture") {
  const LabelImage gt = from_values(2, 2, {0, 1, 1, 255});
  const LabelImage pred = from_values(2, 2, {0, 1, 0, 0});
  ConfusionMatrix conf;
  accumulate(conf, gt, pred);
  CHECK(conf.counts(0, 0) == 1);
  CHECK(conf.counts(1, 1) == 1);
  CHECK(conf.counts(1, 0) == 1);
  CHECK(conf.total() == 3);  // the void pixel adds nothing

  const Eigen::VectorXd iou = per_class_iou(conf);
  CHECK(iou(0) == doctest::Approx(0.5));  // TP 1, FP 1, FN 0
  CHECK(iou(1) == doctest::Approx(0.5));  // TP 1, FP 0, FN 1
  CHECK(std::isnan(iou(2)));
}

TEST_CASE("accumulate error paths") {
  ConfusionMatrix conf;
  CHECK_THROWS_AS(accumulate(conf, LabelImage(2, 2, 0), LabelImage(3, 2, 0)), Error);
  CHECK_THROWS_AS(
      accumulate(conf, LabelImage(2, 2, 0), LabelImage(2, 2, ClassTaxonomy::kVoidIndex)), Error);
}

TEST_CASE("per-class iou marks absent classes undefined") {
  ConfusionMatrix conf;
  conf.counts(3, 3) = 10;
  conf.counts(5, 5) = 4;
  conf.counts(5, 3) = 2;
  const Eigen::VectorXd iou = per_class_iou(conf);
  CHECK(iou(3) == doctest::Approx(10.0 / 12.0));
  CHECK(iou(5) == doctest::Approx(4.0 / 6.0));
  CHECK(std::isnan(iou(0)));
  CHECK(std::isnan(iou(20)));
}

TEST_CASE("mean iou basics") {
  Eigen::VectorXd per_class = Eigen::VectorXd::Constant(21, 1.0);
  CHECK(mean_iou(per_class) == doctest::Approx(1.0));

  per_class.setConstant(std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(mean_iou(per_class), Error);

  per_class.setConstant(std::numeric_limits<double>::quiet_NaN());
  per_class(2) = 0.5;
  per_class(9) = 0.7;
  CHECK(mean_iou(per_class) == doctest::Approx(0.6));
}

TEST_CASE("mean iou reproduces the published per-column aggregates") {
  // Per-class values of the three dataset columns, percent scale.
  const std::vector<double> weak10k = {87.12, 68.81, 27.39, 55.46, 42.76, 47.25, 73.96,
                                       51.15, 71.37, 13.17, 57.88, 42.95, 60.74, 54.92,
                                       54.99, 66.01, 41.38, 65.71, 30.37, 67.48, 27.99};
  const std::vector<double> weak_syn2k = {87.88, 69.39, 27.65, 57.23, 47.76, 55.52, 76.19,
                                          61.83, 72.58, 14.91, 59.23, 48.50, 60.56, 56.64,
                                          62.49, 63.43, 49.54, 65.87, 36.95, 68.69, 22.06};
  const std::vector<double> real15k = {87.88, 58.07, 46.47, 54.61, 39.73, 41.56, 61.67,
                                       48.47, 64.93, 16.92, 30.43, 39.47, 53.43, 44.40,
                                       59.03, 65.47, 14.06, 56.05, 24.75, 54.05, 38.62};
  auto to_vec = [](const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  };
  CHECK(std::abs(mean_iou(to_vec(weak10k)) - 52.80) < 0.01);
  CHECK(std::abs(mean_iou(to_vec(weak_syn2k)) - 55.47) < 0.01);
  CHECK(std::abs(mean_iou(to_vec(real15k)) - 47.62) < 0.01);
}

TEST_CASE("aggregation is order independent and transposes under swap") {
  SplitMix64 rng(222);
  std::vector<LabelImage> gts, preds;
  for (int i = 0; i < 6; ++i) {
    LabelImage gt = testing::random_label_image(rng, 12);
    for (auto& v : gt.data) {
      if (v == ClassTaxonomy::kVoidIndex) v = 2;
    }
    LabelImage pred = gt;
    for (auto& v : pred.data) {
      if (rng.uniform() < 0.3) v = static_cast<std::uint8_t>(rng.uniform_int(0, 20));
    }
    // pred must share dimensions; regenerate with same size
    gts.push_back(gt);
    preds.push_back(pred);
  }

  ConfusionMatrix forward, backward, swapped;
  for (std::size_t i = 0; i < gts.size(); ++i) accumulate(forward, gts[i], preds[i]);
  for (std::size_t i = gts.size(); i-- > 0;) accumulate(backward, gts[i], preds[i]);
  CHECK(forward.counts == backward.counts);

  for (std::size_t i = 0; i < gts.size(); ++i) accumulate(swapped, preds[i], gts[i]);
  CHECK(swapped.counts == forward.counts.transpose());
}

TEST_CASE("evaluate_dataset scores a directory pair") {
  testing::TempDir tmp("eval");
  const auto gt_dir = tmp / "gt";
  const auto pred_dir = tmp / "pred";
  std::filesystem::create_directories(gt_dir);
  std::filesystem::create_directories(pred_dir);

  // gt: top half class 1, bottom half background; predictions all background.
  LabelImage gt(4, 4, 0);
  for (int x = 0; x < 4; ++x) {
    gt.at(x, 0) = 1;
    gt.at(x, 1) = 1;
  }
  save_label_png(gt_dir / "a.png", gt);
  save_label_png(pred_dir / "a.png", LabelImage(4, 4, 0));

  const IoUReport report = evaluate_dataset(pred_dir, gt_dir, ClassTaxonomy::pascal_voc());
  CHECK(report.per_class(0) == doctest::Approx(0.5));  // 8 TP, 8 FP
  CHECK(report.per_class(1) == doctest::Approx(0.0));
  CHECK(report.mean == doctest::Approx(0.25));

  // Perfect predictions score 1.0.
  save_label_png(pred_dir / "a.png", gt);
  CHECK(evaluate_dataset(pred_dir, gt_dir, ClassTaxonomy::pascal_voc()).mean ==
        doctest::Approx(1.0));
}

TEST_CASE("evaluate_dataset error modes") {
  testing::TempDir tmp("evalerr");
  const auto gt_dir = tmp / "gt";
  const auto pred_dir = tmp / "pred";
  std::filesystem::create_directories(gt_dir);
  std::filesystem::create_directories(pred_dir);
  CHECK_THROWS_AS(evaluate_dataset(pred_dir, gt_dir, ClassTaxonomy::pascal_voc()), Error);

  save_label_png(gt_dir / "a.png", LabelImage(2, 2, 1));
  CHECK_THROWS_WITH_AS(evaluate_dataset(pred_dir, gt_dir, ClassTaxonomy::pascal_voc()),
                       doctest::Contains("a: missing prediction"), Error);

  save_label_png(pred_dir / "a.png", LabelImage(3, 2, 1));  // dimension mismatch names the image
  CHECK_THROWS_WITH_AS(evaluate_dataset(pred_dir, gt_dir, ClassTaxonomy::pascal_voc()),
                       doctest::Contains("a:"), Error);
}

TEST_CASE("dataset-level iou is the global-matrix value, not a per-image mean") {
  testing::TempDir tmp("evalglobal");
  const auto gt_dir = tmp / "gt";
  const auto pred_dir = tmp / "pred";
  std::filesystem::create_directories(gt_dir);
  std::filesystem::create_directories(pred_dir);

  // Image A: gt has 4 pixels of class 1, prediction gets 2 right, 2 as background.
  save_label_png(gt_dir / "a.png", from_values(4, 1, {1, 1, 1, 1}));
  save_label_png(pred_dir / "a.png", from_values(4, 1, {1, 1, 0, 0}));
  // Image B: one class-1 pixel, predicted perfectly; three background pixels.
  save_label_png(gt_dir / "b.png", from_values(4, 1, {1, 0, 0, 0}));
  save_label_png(pred_dir / "b.png", from_values(4, 1, {1, 0, 0, 0}));

  // Global matrix for class 1: TP 3, FN 2, FP 0 -> 3/5.
  // Per-image class-1 IoUs would be 1/2 and 1 -> mean 3/4, a different number.
  const IoUReport report = evaluate_dataset(pred_dir, gt_dir, ClassTaxonomy::pascal_voc());
  CHECK(report.per_class(1) == doctest::Approx(3.0 / 5.0));
  CHECK(report.per_class(1) != doctest::Approx(0.75));
}

TEST_CASE("report formatting") {
  ConfusionMatrix conf;
  conf.counts(0, 0) = 10;
  conf.counts(7, 7) = 6;
  conf.counts(7, 0) = 2;
  IoUReport report;
  report.confusion = conf;
  report.per_class = per_class_iou(conf);
  report.mean = mean_iou(report.per_class);

  const std::string table = format_report_table(report, ClassTaxonomy::pascal_voc());
  CHECK(table.find("background") != std::string::npos);
  CHECK(table.find("car") != std::string::npos);
  CHECK(table.find("Mean IoU") != std::string::npos);
  CHECK(table.find("-") != std::string::npos);  // undefined classes render as dashes

  const std::string kv = format_report_kv(report, ClassTaxonomy::pascal_voc());
  CHECK(kv.find("iou.car = 0.75") != std::string::npos);
  CHECK(kv.find("mean_iou") != std::string::npos);
  CHECK(kv.find("iou.dog") == std::string::npos);  // undefined classes are omitted
}
