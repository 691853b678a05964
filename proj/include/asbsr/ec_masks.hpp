#pragma once

#include <string>
#include <string_view>

#include "asbsr/core.hpp"

namespace asbsr {

/// Boolean membership field over DCT (or DFT) index space.
class SpectrumMask {
 public:
  SpectrumMask() = default;
  explicit SpectrumMask(BoolField cells);

  static SpectrumMask full(Eigen::Index height, Eigen::Index width);
  static SpectrumMask empty(Eigen::Index height, Eigen::Index width);

  Eigen::Index height() const { return cells_.rows(); }
  Eigen::Index width() const { return cells_.cols(); }
  Eigen::Index size() const { return cells_.size(); }
  const BoolField& cells() const { return cells_; }
  bool operator()(Eigen::Index r, Eigen::Index c) const { return cells_(r, c); }

  Eigen::Index count() const { return cells_.count(); }
  double fraction() const { return static_cast<double>(count()) / static_cast<double>(size()); }

  /// Multiplies a coefficient field by the mask (zero outside).
  template <typename Derived>
  auto apply(const Eigen::MatrixBase<Derived>& field) const {
    using Scalar = typename Derived::Scalar;
    return cells_.select(field.array(), Scalar(0)).matrix();
  }

  friend bool operator==(const SpectrumMask& a, const SpectrumMask& b) {
    return a.cells_.rows() == b.cells_.rows() && a.cells_.cols() == b.cells_.cols() &&
           (a.cells_ == b.cells_).all();
  }

 private:
  BoolField cells_;
};

enum class ShapeKind { kRectangle, kTriangle, kPieSector, kEllipse, kSuperellipse };

std::string to_string(ShapeKind kind);
ShapeKind parse_shape_kind(std::string_view name);

/// Parametric EC-zone bounding shape. Coordinates are normalized frequencies
/// u = (col + 0.5) / width, v = (row + 0.5) / height, so a shape of a given
/// area fraction has the same silhouette on any grid. aspect_ratio is the
/// vertical extent over the horizontal extent before rotation.
struct ShapeSpec {
  ShapeKind kind = ShapeKind::kPieSector;
  double area_fraction = 0.25;
  double aspect_ratio = 1.0;
  double orientation_deg = 0.0;
  double superellipse_exponent = 3.0;
  double sector_extent_deg = 90.0;  ///< pie_sector only

  void validate() const;
};

/// Flat `key=value` text block, one pair per line.
std::string to_key_value(const ShapeSpec& spec);
ShapeSpec shape_from_key_value(std::string_view text);

/// Minkowski gauge of the shape at every cell centre: the smallest linear
/// scale at which the cell enters the shape (+inf when it never does).
Image<double> shape_gauge(const ShapeSpec& spec, Eigen::Index height, Eigen::Index width);

/// Uncalibrated mask: all cells whose gauge is <= scale.
SpectrumMask shape_mask_at_scale(const ShapeSpec& spec, double scale, Eigen::Index height, Eigen::Index width);

/// Mask of the given shape calibrated to spec.area_fraction. The DC cell is
/// always included. Throws DegenerateMask when the calibrated zone would be
/// the DC cell alone.
SpectrumMask make_shape_mask(const ShapeSpec& spec, Eigen::Index height, Eigen::Index width);

struct MaskOverlap {
  double inside_fraction;   ///< share of reference cells covered by the mask
  double outside_fraction;  ///< share of mask cells not in the reference
};

MaskOverlap mask_union_fraction(const SpectrumMask& mask, const SpectrumMask& reference);

/// Area of the approximating zone over the area of the reference zone.
double zone_redundancy(const SpectrumMask& mask, const SpectrumMask& reference);

}  // namespace asbsr
