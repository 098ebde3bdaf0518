#include "segkit/gmm.hpp"

#include "segkit/rng.hpp"
#include "segkit/voc.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace segkit {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kMinLogDensity = -700.0;  // keeps exp() clear of underflow

double component_log_density(const GaussianMixture::Component& c, const Eigen::Vector3d& color) {
  const Eigen::Vector3d d = color - c.mean;
  return c.log_norm - 0.5 * d.dot(c.precision * d);
}

std::vector<Eigen::Vector3d> subsample(std::span<const Eigen::Vector3d> pixels,
                                       std::uint64_t seed) {
  if (pixels.size() <= GaussianMixture::kMaxFitPixels) {
    return {pixels.begin(), pixels.end()};
  }
  // Seeded index draw without replacement, kept in ascending order so the
  // sample is independent of traversal parallelism upstream.
  SplitMix64 rng(hash_mix(seed, 0x5AB5A11CEULL));
  std::vector<std::uint32_t> indices(pixels.size());
  std::iota(indices.begin(), indices.end(), 0u);
  for (std::size_t i = 0; i < GaussianMixture::kMaxFitPixels; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(indices.size() - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(GaussianMixture::kMaxFitPixels);
  std::sort(indices.begin(), indices.end());
  std::vector<Eigen::Vector3d> out;
  out.reserve(indices.size());
  for (std::uint32_t i : indices) out.push_back(pixels[i]);
  return out;
}

}  // namespace

double GaussianMixture::log_pdf(const Eigen::Vector3d& color) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const Component& c : components_) {
    if (c.weight <= 0.0) continue;
    best = std::max(best, component_log_density(c, color));
  }
  if (!std::isfinite(best)) return kMinLogDensity;
  double sum = 0.0;
  for (const Component& c : components_) {
    if (c.weight <= 0.0) continue;
    sum += std::exp(component_log_density(c, color) - best);
  }
  return std::max(kMinLogDensity, best + std::log(sum));
}

void GaussianMixture::finalize() {
  for (Component& c : components_) {
    const Eigen::LLT<Eigen::Matrix3d> llt(c.covariance);
    if (llt.info() != Eigen::Success) {
      throw Error("gmm covariance not positive definite");
    }
    const Eigen::Matrix3d L = llt.matrixL();
    const double log_det = 2.0 * L.diagonal().array().log().sum();
    c.precision = llt.solve(Eigen::Matrix3d::Identity());
    c.log_norm = (c.weight > 0.0 ? std::log(c.weight) : 0.0) - 0.5 * (3.0 * kLog2Pi + log_det);
  }
}

GaussianMixture GaussianMixture::em(const std::vector<Eigen::Vector3d>& pixels,
                                    GaussianMixture start) {
  const std::size_t n = pixels.size();
  const int k = start.component_count();
  GaussianMixture model = std::move(start);

  Eigen::MatrixXd resp(static_cast<Eigen::Index>(n), k);
  for (int round = 0; round < kEmRounds; ++round) {
    // E-step: responsibilities from the current components.
    for (std::size_t i = 0; i < n; ++i) {
      double best = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < k; ++j) {
        const Component& c = model.components_[static_cast<std::size_t>(j)];
        resp(static_cast<Eigen::Index>(i), j) =
            c.weight > 0.0 ? component_log_density(c, pixels[i])
                           : -std::numeric_limits<double>::infinity();
        best = std::max(best, resp(static_cast<Eigen::Index>(i), j));
      }
      double sum = 0.0;
      for (int j = 0; j < k; ++j) {
        double& r = resp(static_cast<Eigen::Index>(i), j);
        r = std::isfinite(r) ? std::exp(r - best) : 0.0;
        sum += r;
      }
      resp.row(static_cast<Eigen::Index>(i)) /= sum;
    }

    // M-step.
    for (int j = 0; j < k; ++j) {
      Component& c = model.components_[static_cast<std::size_t>(j)];
      const double nj = resp.col(j).sum();
      c.weight = nj / static_cast<double>(n);
      if (nj < 1e-12) {
        c.weight = 0.0;  // dead component; params keep their last value
        continue;
      }
      Eigen::Vector3d mean = Eigen::Vector3d::Zero();
      for (std::size_t i = 0; i < n; ++i) mean += resp(static_cast<Eigen::Index>(i), j) * pixels[i];
      mean /= nj;
      Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
      for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector3d d = pixels[i] - mean;
        cov += resp(static_cast<Eigen::Index>(i), j) * (d * d.transpose());
      }
      cov /= nj;
      c.mean = mean;
      c.covariance = cov + kCovarianceFloor * Eigen::Matrix3d::Identity();
    }
    model.finalize();
  }
  return model;
}

GaussianMixture GaussianMixture::fit(std::span<const Eigen::Vector3d> pixels, int k,
                                     std::uint64_t seed) {
  if (pixels.empty()) throw Error("gmm fit: no pixels");
  if (k < 1) throw Error("gmm fit: need at least one component");
  const std::vector<Eigen::Vector3d> sample = subsample(pixels, seed);
  k = std::min<int>(k, static_cast<int>(sample.size()));

  // Quantile initialization: order by brightness (ties broken channel-wise,
  // then by position) and cut into k equal groups.
  std::vector<std::uint32_t> order(sample.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const Eigen::Vector3d& pa = sample[a];
    const Eigen::Vector3d& pb = sample[b];
    const double sa = pa.sum(), sb = pb.sum();
    if (sa != sb) return sa < sb;
    if (pa.x() != pb.x()) return pa.x() < pb.x();
    if (pa.y() != pb.y()) return pa.y() < pb.y();
    if (pa.z() != pb.z()) return pa.z() < pb.z();
    return a < b;
  });

  GaussianMixture init;
  init.components_.resize(static_cast<std::size_t>(k));
  const std::size_t n = sample.size();
  for (int j = 0; j < k; ++j) {
    const std::size_t begin = n * static_cast<std::size_t>(j) / static_cast<std::size_t>(k);
    const std::size_t end = n * (static_cast<std::size_t>(j) + 1) / static_cast<std::size_t>(k);
    Component& c = init.components_[static_cast<std::size_t>(j)];
    const std::size_t count = end - begin;
    c.weight = static_cast<double>(count) / static_cast<double>(n);
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (std::size_t i = begin; i < end; ++i) mean += sample[order[i]];
    mean /= static_cast<double>(count);
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (std::size_t i = begin; i < end; ++i) {
      const Eigen::Vector3d d = sample[order[i]] - mean;
      cov += d * d.transpose();
    }
    cov /= static_cast<double>(count);
    c.mean = mean;
    c.covariance = cov + kCovarianceFloor * Eigen::Matrix3d::Identity();
  }
  init.finalize();
  return em(sample, std::move(init));
}

GaussianMixture GaussianMixture::refit(std::span<const Eigen::Vector3d> pixels,
                                       const GaussianMixture& init, std::uint64_t seed) {
  if (pixels.empty()) throw Error("gmm refit: no pixels");
  return em(subsample(pixels, seed), init);
}

}  // namespace segkit
