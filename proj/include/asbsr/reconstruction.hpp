#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "asbsr/core.hpp"
#include "asbsr/ec_masks.hpp"
#include "asbsr/sampling.hpp"
#include "asbsr/spectrum_analysis.hpp"
#include "asbsr/transforms.hpp"

namespace asbsr {

struct ReconOptions {
  int max_iterations = 500;
  /// Stop once rmse_all against the reference drops to this level.
  std::optional<double> stop_rmse;
  /// Stop when the tracked error improved by less than plateau_epsilon
  /// (relative) over the last plateau_window iterations. Zero disables.
  int plateau_window = 50;
  double plateau_epsilon = 1e-4;

  void validate() const {
    if (max_iterations < 1) throw InvalidInput("ReconOptions: max_iterations must be >= 1");
    if (plateau_window < 1) throw InvalidInput("ReconOptions: plateau_window must be >= 1");
    if (!(plateau_epsilon >= 0.0)) throw InvalidInput("ReconOptions: plateau_epsilon must be >= 0");
    if (stop_rmse && !(*stop_rmse >= 0.0)) throw InvalidInput("ReconOptions: stop_rmse must be >= 0");
  }
};

enum class StopReason { kMaxIter, kTargetRmse, kPlateau };

std::string to_string(StopReason reason);

struct ReconReport {
  int iterations_run = 0;
  std::vector<double> rmse_all_trace;  ///< empty without a reference
  std::vector<double> rmse_90_trace;   ///< empty without a reference
  /// RMS misfit between the spectrally bounded iterate and the measurements.
  std::vector<double> residual_trace;
  bool converged = false;
  StopReason stop_reason = StopReason::kMaxIter;
};

template <typename Scalar>
struct Reconstruction {
  Image<Scalar> image;
  ReconReport report;
};

namespace detail {

/// Shared iteration bookkeeping: traces, stop rules.
class IterationMonitor {
 public:
  IterationMonitor(const ReconOptions& opts, bool has_reference) : opts_(opts), has_reference_(has_reference) {
    opts.validate();
  }

  /// Records one iteration; returns true when iteration should stop.
  bool record(std::optional<std::pair<double, double>> reference_errors, double residual) {
    ++report_.iterations_run;
    report_.residual_trace.push_back(residual);
    if (reference_errors) {
      report_.rmse_all_trace.push_back(reference_errors->first);
      report_.rmse_90_trace.push_back(reference_errors->second);
      if (opts_.stop_rmse && reference_errors->first <= *opts_.stop_rmse) return finish(StopReason::kTargetRmse);
    }
    const auto& tracked = has_reference_ ? report_.rmse_all_trace : report_.residual_trace;
    const auto w = static_cast<std::size_t>(opts_.plateau_window);
    if (opts_.plateau_epsilon > 0.0 && tracked.size() > w) {
      const double before = tracked[tracked.size() - 1 - w];
      const double now = tracked.back();
      const double gain = before > 0.0 ? (before - now) / before : 0.0;
      if (gain < opts_.plateau_epsilon) return finish(StopReason::kPlateau);
    }
    if (report_.iterations_run >= opts_.max_iterations) {
      report_.stop_reason = StopReason::kMaxIter;
      return true;
    }
    return false;
  }

  ReconReport take() { return std::move(report_); }

 private:
  bool finish(StopReason reason) {
    report_.stop_reason = reason;
    report_.converged = true;
    return true;
  }

  ReconOptions opts_;
  bool has_reference_;
  ReconReport report_;
};

template <typename Scalar>
std::pair<double, double> errors_against(const Image<Scalar>& reference, const Image<Scalar>& estimate) {
  const Image<Scalar> diff = estimate - reference;
  const double all = std::sqrt(double(diff.squaredNorm()) / static_cast<double>(diff.size()));
  return {all, std::min(all, rms_smallest_90(diff))};
}

}  // namespace detail

/// Zero-order estimate: each unsampled pixel is the inverse-distance weighted
/// mean of its three nearest samples (all samples when fewer than three
/// exist); sampled pixels keep their values. Distance ties are resolved by
/// the samples' row-major index. Linear in the sample values.
template <typename Scalar>
Image<Scalar> init_interpolate(const Samples<Scalar>& samples) {
  validate_positions(samples.height, samples.width, samples.positions);
  if (samples.values.size() != samples.size()) throw InvalidInput("init_interpolate: values/positions size mismatch");
  const Eigen::Index h = samples.height;
  const Eigen::Index w = samples.width;
  const Eigen::Index m = samples.size();

  // Index of the sample at each node, -1 where none.
  Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic> owner =
      Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic>::Constant(h, w, -1);
  for (Eigen::Index i = 0; i < m; ++i) owner(samples.positions[i].row, samples.positions[i].col) = i;

  constexpr int kNeighbors = 3;
  const int wanted = static_cast<int>(std::min<Eigen::Index>(kNeighbors, m));
  Image<Scalar> out(h, w);

  struct Candidate {
    double d2;
    std::int64_t key;
    Eigen::Index index;
  };
  auto better = [](const Candidate& a, const Candidate& b) { return a.d2 < b.d2 || (a.d2 == b.d2 && a.key < b.key); };

  for (Eigen::Index c = 0; c < w; ++c) {
    for (Eigen::Index r = 0; r < h; ++r) {
      if (owner(r, c) >= 0) {
        out(r, c) = samples.values(owner(r, c));
        continue;
      }
      std::array<Candidate, kNeighbors> best{};
      int found = 0;
      auto offer = [&](Eigen::Index idx) {
        const Position p = samples.positions[static_cast<std::size_t>(idx)];
        const double dr = static_cast<double>(p.row - r);
        const double dc = static_cast<double>(p.col - c);
        Candidate cand{dr * dr + dc * dc, row_major_index(p, w), idx};
        if (found < wanted) {
          best[found++] = cand;
        } else if (better(cand, best[wanted - 1])) {
          best[wanted - 1] = cand;
        } else {
          return;
        }
        for (int k = found - 1; k > 0 && better(best[k], best[k - 1]); --k) std::swap(best[k], best[k - 1]);
      };

      if (m <= 64) {
        for (Eigen::Index i = 0; i < m; ++i) offer(i);
      } else {
        // Rings of growing Chebyshev radius; a ring at radius k+1 cannot
        // beat a candidate closer than k+1.
        const Eigen::Index max_ring = std::max(h, w);
        for (Eigen::Index ring = 1; ring <= max_ring; ++ring) {
          for (Eigen::Index rr = r - ring; rr <= r + ring; ++rr) {
            if (rr < 0 || rr >= h) continue;
            const bool edge = rr == r - ring || rr == r + ring;
            const Eigen::Index step = edge ? 1 : 2 * ring;
            for (Eigen::Index cc = c - ring; cc <= c + ring; cc += step) {
              if (cc < 0 || cc >= w || owner(rr, cc) < 0) continue;
              offer(owner(rr, cc));
            }
          }
          if (found == wanted && best[wanted - 1].d2 < double((ring + 1) * (ring + 1))) break;
        }
      }

      double num = 0.0;
      double den = 0.0;
      for (int k = 0; k < found; ++k) {
        const double weight = 1.0 / std::sqrt(best[k].d2);
        num += weight * static_cast<double>(samples.values(best[k].index));
        den += weight;
      }
      out(r, c) = static_cast<Scalar>(num / den);
    }
  }
  return out;
}

/// Alternating projections from a given starting image: bound the DCT
/// spectrum to mask, then restore the measured pixels. Returns the last
/// spectrally bounded iterate.
template <typename Scalar>
Reconstruction<Scalar> reconstruct_bs_from(Image<Scalar> estimate, const Samples<Scalar>& samples,
                                           const SpectrumMask& mask,
                                           const std::type_identity_t<Image<Scalar>>* reference,
                                           const ReconOptions& opts) {
  if (mask.height() != samples.height || mask.width() != samples.width) {
    throw InvalidInput("reconstruct_bs: mask and sample grid dimensions differ");
  }
  if (estimate.rows() != samples.height || estimate.cols() != samples.width) {
    throw InvalidInput("reconstruct_bs: initial estimate has wrong dimensions");
  }
  if (reference && (reference->rows() != samples.height || reference->cols() != samples.width)) {
    throw InvalidInput("reconstruct_bs: reference has wrong dimensions");
  }
  if (samples.size() < 1) throw InvalidInput("reconstruct_bs: no samples");
  detail::IterationMonitor monitor(opts, reference != nullptr);
  Image<Scalar> bounded;
  const auto m = static_cast<double>(samples.size());
  while (true) {
    bounded = dct2(mask.apply(dct2(estimate, Direction::kForward)), Direction::kInverse);
    double misfit = 0.0;
    estimate = bounded;
    for (Eigen::Index i = 0; i < samples.size(); ++i) {
      const Position p = samples.positions[static_cast<std::size_t>(i)];
      const double d = double(bounded(p.row, p.col) - samples.values(i));
      misfit += d * d;
      estimate(p.row, p.col) = samples.values(i);
    }
    std::optional<std::pair<double, double>> errs;
    if (reference) errs = detail::errors_against(*reference, bounded);
    if (monitor.record(errs, std::sqrt(misfit / m))) break;
  }
  return {std::move(bounded), monitor.take()};
}

/// Bounded-spectrum reconstruction from arbitrary samples, started from
/// init_interpolate.
template <typename Scalar>
Reconstruction<Scalar> reconstruct_bs(const Samples<Scalar>& samples, const SpectrumMask& mask,
                                      const std::type_identity_t<Image<Scalar>>* reference, const ReconOptions& opts) {
  if (mask.height() != samples.height || mask.width() != samples.width) {
    throw InvalidInput("reconstruct_bs: mask and sample grid dimensions differ");
  }
  return reconstruct_bs_from(init_interpolate(samples), samples, mask, reference, opts);
}

/// Samples of a 1D signal of the given length.
template <typename Scalar>
struct Samples1d {
  Eigen::Index length = 0;
  std::vector<Eigen::Index> positions;
  Signal<Scalar> values;

  Eigen::Index size() const { return static_cast<Eigen::Index>(positions.size()); }
};

template <typename Scalar>
struct Reconstruction1d {
  Signal<Scalar> signal;
  ReconReport report;
};

/// Sparse-spectrum recovery of a 1D signal: every iteration re-detects the k
/// largest DCT coefficients of the current estimate, keeps only those,
/// inverse-transforms and restores the available samples. Starts from the
/// zero-filled measurements.
template <typename Scalar>
Reconstruction1d<Scalar> reconstruct_klargest_1d(const Samples1d<Scalar>& samples, Eigen::Index k,
                                                 const std::type_identity_t<Signal<Scalar>>* reference, const ReconOptions& opts) {
  const Eigen::Index n = samples.length;
  const Eigen::Index m = samples.size();
  if (n < 1) throw InvalidInput("reconstruct_klargest_1d: empty signal");
  if (samples.values.size() != m) throw InvalidInput("reconstruct_klargest_1d: values/positions size mismatch");
  if (m < 1) throw InvalidInput("reconstruct_klargest_1d: no samples");
  if (k < 1) throw InvalidInput("reconstruct_klargest_1d: k must be >= 1");
  if (k > m) throw InvalidInput("reconstruct_klargest_1d: k exceeds the number of samples");
  if (reference && reference->size() != n) throw InvalidInput("reconstruct_klargest_1d: reference length mismatch");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Eigen::Index p : samples.positions) {
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]) {
      throw InvalidInput("reconstruct_klargest_1d: positions must be distinct and in range");
    }
    seen[static_cast<std::size_t>(p)] = true;
  }

  detail::IterationMonitor monitor(opts, reference != nullptr);
  Signal<Scalar> estimate = Signal<Scalar>::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) estimate(samples.positions[static_cast<std::size_t>(i)]) = samples.values(i);
  Signal<Scalar> bounded;
  while (true) {
    const Signal<Scalar> spectrum = dct1(estimate, Direction::kForward);
    Signal<Scalar> kept = Signal<Scalar>::Zero(n);
    for (Eigen::Index idx : largest_magnitude_indices(std::span<const Scalar>(spectrum.data(), n), k)) {
      kept(idx) = spectrum(idx);
    }
    bounded = dct1(kept, Direction::kInverse);
    estimate = bounded;
    double misfit = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Index p = samples.positions[static_cast<std::size_t>(i)];
      const double d = double(bounded(p) - samples.values(i));
      misfit += d * d;
      estimate(p) = samples.values(i);
    }
    std::optional<std::pair<double, double>> errs;
    if (reference) {
      const Signal<Scalar> diff = bounded - *reference;
      const double all = std::sqrt(double(diff.squaredNorm()) / static_cast<double>(n));
      errs = std::make_pair(all, std::min(all, rms_smallest_90(diff)));
    }
    if (monitor.record(errs, std::sqrt(misfit / static_cast<double>(m)))) break;
  }
  return {std::move(bounded), monitor.take()};
}

}  // namespace asbsr
