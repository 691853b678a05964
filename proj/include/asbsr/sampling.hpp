#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "asbsr/core.hpp"
#include "asbsr/ec_masks.hpp"
#include "asbsr/transforms.hpp"

namespace asbsr {

enum class GridKind { kQuasiUniform, kJittered, kPseudorandom };

std::string to_string(GridKind kind);
GridKind parse_grid_kind(std::string_view name);

/// M measured pixels of an H x W grid.
template <typename Scalar>
struct Samples {
  Eigen::Index height = 0;
  Eigen::Index width = 0;
  std::vector<Position> positions;
  Signal<Scalar> values;

  Eigen::Index size() const { return static_cast<Eigen::Index>(positions.size()); }
  double rate() const { return static_cast<double>(size()) / static_cast<double>(height * width); }
};

using SampleSet = Samples<double>;

/// Throws InvalidInput unless positions is non-empty, in bounds and free of
/// duplicates.
void validate_positions(Eigen::Index height, Eigen::Index width, const std::vector<Position>& positions);

/// Exactly m distinct in-bounds positions in row-major order.
///  - quasi_uniform: rows of a near-square lattice with spacing sqrt(N/m),
///    rounded to the nearest node; collisions move to the nearest free node.
///  - jittered: one uniformly placed sample per cell of an m-cell tiling.
///  - pseudorandom: m nodes drawn uniformly without replacement.
/// Only jittered and pseudorandom consume the seed.
std::vector<Position> make_grid(GridKind kind, Eigen::Index height, Eigen::Index width, Eigen::Index m,
                                std::uint64_t seed);

/// Zeroes the DCT coefficients outside mask.
template <typename Derived>
Image<typename Derived::Scalar> prefilter(const Eigen::MatrixBase<Derived>& image, const SpectrumMask& mask) {
  if (image.rows() != mask.height() || image.cols() != mask.width()) {
    throw InvalidInput("prefilter: mask and image dimensions differ");
  }
  return dct2(mask.apply(dct2(image, Direction::kForward)), Direction::kInverse);
}

template <typename Derived>
Samples<typename Derived::Scalar> take_samples(const Eigen::MatrixBase<Derived>& image,
                                               const std::vector<Position>& positions) {
  validate_positions(image.rows(), image.cols(), positions);
  Samples<typename Derived::Scalar> s;
  s.height = image.rows();
  s.width = image.cols();
  s.positions = positions;
  s.values.resize(static_cast<Eigen::Index>(positions.size()));
  for (std::size_t i = 0; i < positions.size(); ++i) {
    s.values(static_cast<Eigen::Index>(i)) = image(positions[i].row, positions[i].col);
  }
  return s;
}

}  // namespace asbsr
