#pragma once

#include <cstdint>
#include <string_view>

#include "asbsr/core.hpp"
#include "asbsr/ec_masks.hpp"

namespace asbsr::fixtures {

/// Random 1/f^1.5 field stretched to [20, 220] with a few soft-edged discs
/// added on top.
ImageGrid natural_like(Eigen::Index height, Eigen::Index width, std::uint64_t seed);

/// natural_like, prefiltered to a pie-sector zone of the given area fraction.
ImageGrid band_limited(Eigen::Index height, Eigen::Index width, double fraction, std::uint64_t seed);

/// Three correlated channels, each prefiltered to the same pie-sector zone.
RgbImage band_limited_color(Eigen::Index height, Eigen::Index width, double fraction, std::uint64_t seed);

/// Ellipse phantom confined to a centred disc of the given radius (in units
/// of the side).
ImageGrid phantom(Eigen::Index n, double radius);

/// Ink mask of `text` in a 5x7 bitmap font, each font pixel drawn as
/// scale x scale image pixels, lines wrapped to fill the image. true = ink.
BoolField text_mask(Eigen::Index height, Eigen::Index width, std::string_view text, int scale, int top, int left,
                    int line_gap);

}  // namespace asbsr::fixtures
