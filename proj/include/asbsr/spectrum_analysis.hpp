#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "asbsr/core.hpp"
#include "asbsr/ec_masks.hpp"
#include "asbsr/transforms.hpp"

namespace asbsr {

/// PSNR reported for a perfect match, in dB.
inline constexpr double kPsnrCapDb = 200.0;
inline constexpr double kPeakGrayLevel = 255.0;

struct SparsityReport {
  Eigen::Index k = 0;
  Eigen::Index n = 0;
  double sparsity = 0.0;
  double achieved_rmse = 0.0;
  double target_rmse = 0.0;
  SpectrumMask ec_mask;
};

struct ErrorMetrics {
  double rmse_all = 0.0;
  double rmse_90 = 0.0;
  double psnr_db = kPsnrCapDb;
};

inline double psnr_from_rmse(double rmse) {
  if (rmse <= 0.0) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 20.0 * std::log10(kPeakGrayLevel / rmse));
}

/// Indices ordered by descending magnitude; equal magnitudes keep ascending
/// index order.
template <typename Scalar>
std::vector<Eigen::Index> rank_by_magnitude(std::span<const Scalar> values) {
  std::vector<Eigen::Index> order(values.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(values[static_cast<std::size_t>(a)]) > std::abs(values[static_cast<std::size_t>(b)]);
  });
  return order;
}

/// The k largest-magnitude indices (same tie rule as rank_by_magnitude),
/// returned in ascending index order.
template <typename Scalar>
std::vector<Eigen::Index> largest_magnitude_indices(std::span<const Scalar> values, Eigen::Index k) {
  std::vector<Eigen::Index> order(values.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  k = std::clamp<Eigen::Index>(k, 0, static_cast<Eigen::Index>(values.size()));
  auto before = [&](Eigen::Index a, Eigen::Index b) {
    const auto ma = std::abs(values[static_cast<std::size_t>(a)]);
    const auto mb = std::abs(values[static_cast<std::size_t>(b)]);
    return ma > mb || (ma == mb && a < b);
  };
  std::nth_element(order.begin(), order.begin() + k, order.end(), before);
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

/// Row-major flattening of a field, the index convention for tie-breaking.
template <typename Derived>
std::vector<typename Derived::Scalar> flatten_row_major(const Eigen::MatrixBase<Derived>& field) {
  std::vector<typename Derived::Scalar> flat(static_cast<std::size_t>(field.size()));
  const Eigen::Index w = field.cols();
  for (Eigen::Index r = 0; r < field.rows(); ++r) {
    for (Eigen::Index c = 0; c < w; ++c) flat[static_cast<std::size_t>(r * w + c)] = field(r, c);
  }
  return flat;
}

/// Smallest set of largest-magnitude DCT coefficients whose retention
/// reconstructs within target_rmse, given the orthonormal spectrum.
SparsityReport sparse_spectrum_of(const RealSpectrum& spectrum, double target_rmse);

template <typename Derived>
SparsityReport sparse_spectrum(const Eigen::MatrixBase<Derived>& image, double target_rmse) {
  if (!(target_rmse >= 0.0) || !std::isfinite(target_rmse)) {
    throw InvalidInput("sparse_spectrum: target_rmse must be a finite non-negative value");
  }
  const ImageGrid as_double = image.template cast<double>();
  return sparse_spectrum_of(dct2(as_double, Direction::kForward), target_rmse);
}

/// Keeps the k largest-magnitude coefficients of a spectrum.
SpectrumMask k_largest_mask(const RealSpectrum& spectrum, Eigen::Index k);

ErrorMetrics error_metrics_of(const ImageGrid& reference, const ImageGrid& candidate);

template <typename A, typename B>
ErrorMetrics error_metrics(const Eigen::MatrixBase<A>& reference, const Eigen::MatrixBase<B>& candidate) {
  if (reference.rows() != candidate.rows() || reference.cols() != candidate.cols()) {
    throw InvalidInput("error_metrics: dimension mismatch");
  }
  return error_metrics_of(reference.template cast<double>(), candidate.template cast<double>());
}

/// RMS of the smallest 90% absolute errors (floor(0.9 N) of them).
template <typename Derived>
double rms_smallest_90(const Eigen::MatrixBase<Derived>& errors) {
  std::vector<double> mags(static_cast<std::size_t>(errors.size()));
  for (Eigen::Index i = 0; i < errors.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(double(errors(i)));
  const auto count = static_cast<std::size_t>(std::floor(0.9 * static_cast<double>(mags.size())));
  if (count == 0) return 0.0;
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(count - 1), mags.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) sum += mags[i] * mags[i];
  return std::sqrt(sum / static_cast<double>(count));
}

}  // namespace asbsr
