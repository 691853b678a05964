#include "asbsr/spectrum_analysis.hpp"

namespace asbsr {

namespace {

// Coefficients below this fraction of the largest one are rounding noise of
// the transform and carry no energy for the purpose of counting K.
constexpr double kNumericalZero = 1e-12;

}  // namespace

SparsityReport sparse_spectrum_of(const RealSpectrum& spectrum, double target_rmse) {
  if (!(target_rmse >= 0.0) || !std::isfinite(target_rmse)) {
    throw InvalidInput("sparse_spectrum: target_rmse must be a finite non-negative value");
  }
  require_finite(spectrum, "sparse_spectrum");
  const Eigen::Index n = spectrum.size();
  const Eigen::Index width = spectrum.cols();
  const auto flat = flatten_row_major(spectrum);
  const auto order = rank_by_magnitude(std::span<const double>(flat));
  const double floor_mag = kNumericalZero * spectrum.cwiseAbs().maxCoeff();

  // tail[k] = energy of everything ranked k or later; summed from the small
  // end so the tail of a nearly exact representation is not lost to cancellation.
  std::vector<double> tail(static_cast<std::size_t>(n) + 1, 0.0);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const double c = flat[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    const double e = std::abs(c) <= floor_mag ? 0.0 : c * c;
    tail[static_cast<std::size_t>(i)] = tail[static_cast<std::size_t>(i) + 1] + e;
  }
  const double budget = static_cast<double>(n) * target_rmse * target_rmse;
  Eigen::Index k = 0;
  while (tail[static_cast<std::size_t>(k)] > budget) ++k;

  BoolField cells = BoolField::Constant(spectrum.rows(), width, false);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index rm = order[static_cast<std::size_t>(i)];
    cells(rm / width, rm % width) = true;
  }
  SparsityReport report;
  report.k = k;
  report.n = n;
  report.sparsity = static_cast<double>(k) / static_cast<double>(n);
  report.achieved_rmse = std::sqrt(tail[static_cast<std::size_t>(k)] / static_cast<double>(n));
  report.target_rmse = target_rmse;
  report.ec_mask = SpectrumMask(std::move(cells));
  return report;
}

SpectrumMask k_largest_mask(const RealSpectrum& spectrum, Eigen::Index k) {
  const Eigen::Index width = spectrum.cols();
  const auto flat = flatten_row_major(spectrum);
  BoolField cells = BoolField::Constant(spectrum.rows(), width, false);
  for (Eigen::Index rm : largest_magnitude_indices(std::span<const double>(flat), k)) {
    cells(rm / width, rm % width) = true;
  }
  return SpectrumMask(std::move(cells));
}

ErrorMetrics error_metrics_of(const ImageGrid& reference, const ImageGrid& candidate) {
  if (reference.rows() != candidate.rows() || reference.cols() != candidate.cols()) {
    throw InvalidInput("error_metrics: dimension mismatch");
  }
  if (reference.size() == 0) throw InvalidInput("error_metrics: empty images");
  const ImageGrid diff = candidate - reference;
  ErrorMetrics m;
  m.rmse_all = std::sqrt(diff.squaredNorm() / static_cast<double>(diff.size()));
  m.rmse_90 = std::min(rms_smallest_90(diff), m.rmse_all);
  m.psnr_db = psnr_from_rmse(m.rmse_all);
  return m;
}

}  // namespace asbsr
