#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace asbsr {

/// Dense real field indexed (row, col). Pixel-domain images and DCT spectra
/// share this type; DC of a DCT spectrum sits at (0, 0).
template <typename Scalar>
using Image = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using ComplexImage = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Signal = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ImageGrid = Image<double>;
using RealSpectrum = Image<double>;
using ComplexSpectrum = ComplexImage<double>;
using BoolField = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Colour image as three independent gray channels.
struct RgbImage {
  ImageGrid red, green, blue;
};

enum class Direction { kForward, kInverse };

struct Position {
  int row = 0;
  int col = 0;

  friend bool operator==(const Position&, const Position&) = default;
};

// Error taxonomy. The CLI maps each class onto a distinct exit code.

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A calibrated EC-zone mask would collapse to the DC cell alone.
class DegenerateMask : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Parameters are individually valid but jointly unsatisfiable, e.g. fewer
/// observed pixels than the chosen spectral zone needs.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Derived>
void require_finite(const Eigen::DenseBase<Derived>& field, const char* what) {
  if (!field.allFinite()) {
    throw InvalidInput(std::string(what) + ": non-finite values");
  }
}

inline std::int64_t row_major_index(Position p, Eigen::Index width) {
  return static_cast<std::int64_t>(p.row) * width + p.col;
}

}  // namespace asbsr
