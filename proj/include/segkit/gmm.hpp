#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace segkit {

/// Full-covariance Gaussian mixture over RGB colors (8-bit units).
/// Covariances carry a +epsilon*I floor so every component stays positive
/// definite even for constant-color clusters.
class GaussianMixture {
 public:
  static constexpr double kCovarianceFloor = 1e-3;  // 8-bit units squared

  struct Component {
    double weight = 0.0;
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Identity();

    // derived, filled by finalize()
    Eigen::Matrix3d precision = Eigen::Matrix3d::Identity();
    double log_norm = 0.0;  // log(weight) - 0.5 * (3 log 2pi + log|cov|)
  };

  int component_count() const { return static_cast<int>(components_.size()); }
  const std::vector<Component>& components() const { return components_; }

  /// log of the mixture density at `color` (components with zero weight are
  /// skipped), evaluated with a stable log-sum-exp.
  double log_pdf(const Eigen::Vector3d& color) const;

  /// Mixture fit: components seeded from brightness-quantile groups, then a
  /// fixed number of EM rounds. Fully deterministic; `seed` only drives the
  /// subsample drawn when more than kMaxFitPixels pixels are offered. Fewer
  /// pixels than k falls back to k = pixel count. Throws Error on empty input.
  static GaussianMixture fit(std::span<const Eigen::Vector3d> pixels, int k, std::uint64_t seed);

  /// EM continued from an existing mixture on a new pixel set. Never decreases
  /// the likelihood of that set relative to `init`.
  static GaussianMixture refit(std::span<const Eigen::Vector3d> pixels,
                               const GaussianMixture& init, std::uint64_t seed);

  static constexpr std::size_t kMaxFitPixels = 65536;
  static constexpr int kEmRounds = 10;

 private:
  void finalize();
  static GaussianMixture em(const std::vector<Eigen::Vector3d>& pixels, GaussianMixture start);

  std::vector<Component> components_;
};

/// Convenience alias matching the operation name used elsewhere.
inline GaussianMixture fit_gmm(std::span<const Eigen::Vector3d> pixels, int k,
                               std::uint64_t seed) {
  return GaussianMixture::fit(pixels, k, seed);
}

}  // namespace segkit
