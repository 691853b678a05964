#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "asbsr/core.hpp"

namespace asbsr {

enum class LogBase { kNatural, kBase10, kBase2 };

std::string to_string(LogBase base);
LogBase parse_log_base(std::string_view name);
double log_in_base(double x, LogBase base);

/// Sparsity Ss = K/N and redundancy R = M/K of a compressed-sensing setup.
struct CsBoundQuery {
  double sparsity = 0.0;
  double redundancy = 0.0;
  LogBase log_base = LogBase::kNatural;
};

struct BoundCheck {
  bool satisfied = false;
  double margin = 0.0;  ///< R + 2 log(R Ss); positive means satisfied
};

/// Compressed-sensing measurement bound R > -2 log(R Ss).
BoundCheck bound_satisfied(const CsBoundQuery& q);

struct MinRedundancy {
  double value = 0.0;
  /// The fixed point is <= 1, i.e. the bound asks for no more measurements
  /// than non-zero coefficients.
  bool vacuous = false;
};

/// Fixed point R* of R = -2 log(R Ss), by bisection to 1e-9 absolute.
MinRedundancy min_redundancy(double sparsity, LogBase base = LogBase::kNatural);

struct CurvePoint {
  double sparsity;
  double min_redundancy;
};

/// Log-spaced sweep of min_redundancy over [smin, smax].
std::vector<CurvePoint> min_redundancy_curve(double smin, double smax, int steps, LogBase base);

/// Relative frequencies (fraction of the baseband) used by the frequency
/// identification experiment.
inline constexpr double kProbeFrequencies[] = {0.1, 0.3, 0.5, 0.7, 0.9};

struct McExperiment {
  Eigen::Index n = 256;
  Eigen::Index k = 1;
  double rate = 0.15;
  int trials = 1000;
  std::uint64_t seed = 0;
};

struct McResult {
  double probability = 0.0;
  int errors = 0;
  int trials = 0;
  Eigen::Index m = 0;
};

/// Monte-Carlo probability that the k largest DCT magnitudes of a randomly
/// subsampled (zero-filled) k-component signal miss the true indices.
/// Trial t draws from its own stream (seed, t), so results do not depend on
/// evaluation order. threads <= 1 runs sequentially.
McResult freq_error_probability(const McExperiment& e, int threads = 1);

/// True component indices used by trial `trial` of an experiment.
std::vector<Eigen::Index> trial_frequencies(const McExperiment& e, int trial);

}  // namespace asbsr
