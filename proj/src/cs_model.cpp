#include "asbsr/cs_model.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iterator>
#include <numbers>
#include <numeric>
#include <span>

#include "asbsr/random.hpp"
#include "asbsr/spectrum_analysis.hpp"
#include "asbsr/transforms.hpp"

namespace asbsr {

std::string to_string(LogBase base) {
  switch (base) {
    case LogBase::kNatural:
      return "natural";
    case LogBase::kBase10:
      return "base10";
    case LogBase::kBase2:
      return "base2";
  }
  return "unknown";
}

LogBase parse_log_base(std::string_view name) {
  if (name == "natural" || name == "e" || name == "ln") return LogBase::kNatural;
  if (name == "base10" || name == "10" || name == "log10") return LogBase::kBase10;
  if (name == "base2" || name == "2" || name == "log2") return LogBase::kBase2;
  throw InvalidInput("unknown log base: " + std::string(name));
}

double log_in_base(double x, LogBase base) {
  switch (base) {
    case LogBase::kNatural:
      return std::log(x);
    case LogBase::kBase10:
      return std::log10(x);
    case LogBase::kBase2:
      return std::log2(x);
  }
  return std::log(x);
}

BoundCheck bound_satisfied(const CsBoundQuery& q) {
  if (!(q.sparsity > 0.0 && q.sparsity < 1.0)) throw InvalidInput("bound_satisfied: sparsity must lie in (0, 1)");
  if (!(q.redundancy > 0.0) || !std::isfinite(q.redundancy)) {
    throw InvalidInput("bound_satisfied: redundancy must be positive");
  }
  const double margin = q.redundancy + 2.0 * log_in_base(q.redundancy * q.sparsity, q.log_base);
  return {margin > 0.0, margin};
}

MinRedundancy min_redundancy(double sparsity, LogBase base) {
  if (!(sparsity > 0.0 && sparsity < 1.0)) throw InvalidInput("min_redundancy: sparsity must lie in (0, 1)");
  // margin(R) = R + 2 log(R Ss) is strictly increasing in R.
  auto margin = [&](double r) { return r + 2.0 * log_in_base(r * sparsity, base); };
  double lo = 1e-300;
  double hi = 1.0;
  while (margin(hi) <= 0.0) hi *= 2.0;
  while (hi - lo > 1e-9 * 0.5) {
    const double mid = 0.5 * (lo + hi);
    if (margin(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double value = 0.5 * (lo + hi);
  return {value, margin(1.0) >= 0.0};
}

std::vector<CurvePoint> min_redundancy_curve(double smin, double smax, int steps, LogBase base) {
  if (!(smin > 0.0 && smax < 1.0 && smin <= smax)) throw InvalidInput("cs curve: need 0 < smin <= smax < 1");
  if (steps < 1) throw InvalidInput("cs curve: steps must be >= 1");
  std::vector<CurvePoint> out;
  out.reserve(static_cast<std::size_t>(steps));
  const double lmin = std::log(smin);
  const double lmax = std::log(smax);
  for (int i = 0; i < steps; ++i) {
    const double s = steps == 1 ? smin : std::exp(lmin + (lmax - lmin) * i / (steps - 1));
    out.push_back({s, min_redundancy(s, base).value});
  }
  return out;
}

std::vector<Eigen::Index> trial_frequencies(const McExperiment& e, int trial) {
  Rng rng(e.seed, stream::kMonteCarlo, 2 * static_cast<std::uint64_t>(trial));
  std::vector<Eigen::Index> freqs;
  auto to_index = [&](double f) {
    return std::clamp<Eigen::Index>(std::llround(f * static_cast<double>(e.n)), 1, e.n - 1);
  };
  constexpr auto kProbes = std::size(kProbeFrequencies);
  if (e.k == 1) {
    // Single component: cycle through the probe set so every frequency gets
    // an equal share of trials and the estimate is their average.
    freqs.push_back(to_index(kProbeFrequencies[static_cast<std::size_t>(trial) % kProbes]));
    return freqs;
  }
  std::vector<double> probes(std::begin(kProbeFrequencies), std::end(kProbeFrequencies));
  rng.shuffle(probes);
  for (std::size_t i = 0; i < probes.size() && static_cast<Eigen::Index>(freqs.size()) < e.k; ++i) {
    const Eigen::Index idx = to_index(probes[i]);
    if (std::find(freqs.begin(), freqs.end(), idx) == freqs.end()) freqs.push_back(idx);
  }
  while (static_cast<Eigen::Index>(freqs.size()) < e.k) {
    const auto idx = static_cast<Eigen::Index>(1 + rng.below(static_cast<std::uint64_t>(e.n - 1)));
    if (std::find(freqs.begin(), freqs.end(), idx) == freqs.end()) freqs.push_back(idx);
  }
  std::sort(freqs.begin(), freqs.end());
  return freqs;
}

namespace {

bool trial_fails(const McExperiment& e, Eigen::Index m, int trial) {
  const auto freqs = trial_frequencies(e, trial);
  const double norm = std::sqrt(2.0 / static_cast<double>(e.n));
  Rng rng(e.seed, stream::kMonteCarlo, 2 * static_cast<std::uint64_t>(trial) + 1);
  std::vector<Eigen::Index> nodes(static_cast<std::size_t>(e.n));
  std::iota(nodes.begin(), nodes.end(), Eigen::Index{0});
  Signal<double> subsampled = Signal<double>::Zero(e.n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto j = i + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(e.n - i)));
    std::swap(nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(j)]);
    const Eigen::Index pos = nodes[static_cast<std::size_t>(i)];
    double v = 0.0;
    for (Eigen::Index f : freqs) {
      v += norm * std::cos(std::numbers::pi * static_cast<double>(f) * (2.0 * static_cast<double>(pos) + 1.0) /
                           (2.0 * static_cast<double>(e.n)));
    }
    subsampled(pos) = v;
  }
  const Signal<double> spectrum = dct1(subsampled, Direction::kForward);
  const auto detected = largest_magnitude_indices(std::span<const double>(spectrum.data(), e.n), e.k);
  return detected != freqs;
}

}  // namespace

McResult freq_error_probability(const McExperiment& e, int threads) {
  if (e.n < 2) throw InvalidInput("freq_error_probability: n must be >= 2");
  if (e.k < 1 || e.k >= e.n) throw InvalidInput("freq_error_probability: k must lie in [1, n)");
  if (!(e.rate > 0.0 && e.rate <= 1.0)) throw InvalidInput("freq_error_probability: rate must lie in (0, 1]");
  if (e.trials < 1) throw InvalidInput("freq_error_probability: trials must be >= 1");
  const auto m = static_cast<Eigen::Index>(std::floor(e.rate * static_cast<double>(e.n) + 1e-9));
  if (m < e.k) throw InvalidInput("freq_error_probability: rate*n below k, identification impossible");

  auto count = [&](int begin, int end) {
    int errors = 0;
    for (int t = begin; t < end; ++t) errors += trial_fails(e, m, t) ? 1 : 0;
    return errors;
  };
  int errors = 0;
  if (threads <= 1) {
    errors = count(0, e.trials);
  } else {
    std::vector<std::future<int>> parts;
    for (int i = 0; i < threads; ++i) {
      const int begin = static_cast<int>(static_cast<long long>(e.trials) * i / threads);
      const int end = static_cast<int>(static_cast<long long>(e.trials) * (i + 1) / threads);
      parts.push_back(std::async(std::launch::async, count, begin, end));
    }
    for (auto& p : parts) errors += p.get();
  }
  return {static_cast<double>(errors) / e.trials, errors, e.trials, m};
}

}  // namespace asbsr
