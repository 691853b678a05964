#include "fixtures.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "asbsr/random.hpp"
#include "asbsr/sampling.hpp"
#include "asbsr/transforms.hpp"

namespace asbsr::fixtures {

namespace {

ImageGrid power_law_field(Eigen::Index h, Eigen::Index w, Rng& rng) {
  ComplexSpectrum spec(h, w);
  for (Eigen::Index c = 0; c < w; ++c) {
    for (Eigen::Index r = 0; r < h; ++r) {
      const double fy = static_cast<double>(r <= h / 2 ? r : r - h) / static_cast<double>(h);
      const double fx = static_cast<double>(c <= w / 2 ? c : c - w) / static_cast<double>(w);
      const double f = std::max(std::hypot(fx, fy), 1.0 / static_cast<double>(std::max(h, w)));
      spec(r, c) = std::polar(std::pow(f, -1.5), 2.0 * std::numbers::pi * rng.uniform());
    }
  }
  ImageGrid z = dft2(spec, Direction::kInverse).real();
  const double lo = z.minCoeff();
  const double hi = z.maxCoeff();
  return ((z.array() - lo) / (hi - lo) * 200.0 + 20.0).matrix();
}

}  // namespace

ImageGrid natural_like(Eigen::Index height, Eigen::Index width, std::uint64_t seed) {
  Rng rng(seed, stream::kSynthetic, 0);
  ImageGrid z = power_law_field(height, width, rng);
  const double scale = static_cast<double>(std::min(height, width)) / 128.0;
  for (int d = 0; d < 6; ++d) {
    const double cy = rng.uniform() * static_cast<double>(height);
    const double cx = rng.uniform() * static_cast<double>(width);
    const double radius = (5.0 + 20.0 * rng.uniform()) * scale;
    const double step = 60.0 * rng.uniform() - 30.0;
    for (Eigen::Index c = 0; c < width; ++c) {
      for (Eigen::Index r = 0; r < height; ++r) {
        if (std::hypot(static_cast<double>(r) - cy, static_cast<double>(c) - cx) < radius) z(r, c) += step;
      }
    }
  }
  return z;
}

ImageGrid band_limited(Eigen::Index height, Eigen::Index width, double fraction, std::uint64_t seed) {
  ShapeSpec spec;
  spec.area_fraction = fraction;
  return prefilter(natural_like(height, width, seed), make_shape_mask(spec, height, width));
}

RgbImage band_limited_color(Eigen::Index height, Eigen::Index width, double fraction, std::uint64_t seed) {
  ShapeSpec spec;
  spec.area_fraction = fraction;
  const SpectrumMask mask = make_shape_mask(spec, height, width);
  const ImageGrid base = natural_like(height, width, seed);
  const ImageGrid tint_a = natural_like(height, width, seed ^ 0x5bd1e995ULL);
  const ImageGrid tint_b = natural_like(height, width, seed ^ 0x27d4eb2fULL);
  RgbImage rgb;
  rgb.red = prefilter(ImageGrid(0.7 * base + 0.3 * tint_a), mask);
  rgb.green = prefilter(base, mask);
  rgb.blue = prefilter(ImageGrid(0.6 * base + 0.4 * tint_b), mask);
  return rgb;
}

ImageGrid phantom(Eigen::Index n, double radius) {
  struct Ellipse {
    double value, cy, cx, ay, ax, angle_deg;
  };
  // Offsets and axes in units of the support radius.
  static constexpr std::array<Ellipse, 6> kEllipses{{
      {100.0, 0.0, 0.0, 0.92, 0.69, 0.0},
      {-60.0, -0.02, 0.0, 0.87, 0.62, 0.0},
      {40.0, 0.0, 0.22, 0.41, 0.11, -18.0},
      {40.0, 0.0, -0.22, 0.31, 0.16, 18.0},
      {30.0, 0.35, 0.0, 0.25, 0.21, 0.0},
      {50.0, -0.6, 0.06, 0.05, 0.1, 0.0},
  }};
  ImageGrid img = ImageGrid::Zero(n, n);
  const double center = (static_cast<double>(n) - 1.0) / 2.0;
  const double rad = radius * static_cast<double>(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const double y = (center - static_cast<double>(r)) / rad;
      const double x = (static_cast<double>(c) - center) / rad;
      for (const Ellipse& e : kEllipses) {
        const double t = e.angle_deg * std::numbers::pi / 180.0;
        const double dx = x - e.cx;
        const double dy = y - e.cy;
        const double u = dx * std::cos(t) + dy * std::sin(t);
        const double v = -dx * std::sin(t) + dy * std::cos(t);
        if ((u / e.ax) * (u / e.ax) + (v / e.ay) * (v / e.ay) <= 1.0) img(r, c) += e.value;
      }
    }
  }
  return img;
}

namespace {

using Glyph = std::array<const char*, 7>;

const Glyph* glyph(char ch) {
  static const Glyph kA{" ### ", "#   #", "#   #", "#####", "#   #", "#   #", "#   #"};
  static const Glyph kB{"#### ", "#   #", "#   #", "#### ", "#   #", "#   #", "#### "};
  static const Glyph kC{" ####", "#    ", "#    ", "#    ", "#    ", "#    ", " ####"};
  static const Glyph kD{"#### ", "#   #", "#   #", "#   #", "#   #", "#   #", "#### "};
  static const Glyph kE{"#####", "#    ", "#    ", "#### ", "#    ", "#    ", "#####"};
  static const Glyph kG{" ####", "#    ", "#    ", "# ###", "#   #", "#   #", " ####"};
  static const Glyph kI{" ### ", "  #  ", "  #  ", "  #  ", "  #  ", "  #  ", " ### "};
  static const Glyph kL{"#    ", "#    ", "#    ", "#    ", "#    ", "#    ", "#####"};
  static const Glyph kM{"#   #", "## ##", "# # #", "# # #", "#   #", "#   #", "#   #"};
  static const Glyph kN{"#   #", "##  #", "# # #", "#  ##", "#   #", "#   #", "#   #"};
  static const Glyph kO{" ### ", "#   #", "#   #", "#   #", "#   #", "#   #", " ### "};
  static const Glyph kP{"#### ", "#   #", "#   #", "#### ", "#    ", "#    ", "#    "};
  static const Glyph kR{"#### ", "#   #", "#   #", "#### ", "# #  ", "#  # ", "#   #"};
  static const Glyph kS{" ####", "#    ", "#    ", " ### ", "    #", "    #", "#### "};
  static const Glyph kT{"#####", "  #  ", "  #  ", "  #  ", "  #  ", "  #  ", "  #  "};
  static const Glyph kU{"#   #", "#   #", "#   #", "#   #", "#   #", "#   #", " ### "};
  static const Glyph kY{"#   #", "#   #", " # # ", "  #  ", "  #  ", "  #  ", "  #  "};
  switch (ch) {
    case 'A': return &kA;
    case 'B': return &kB;
    case 'C': return &kC;
    case 'D': return &kD;
    case 'E': return &kE;
    case 'G': return &kG;
    case 'I': return &kI;
    case 'L': return &kL;
    case 'M': return &kM;
    case 'N': return &kN;
    case 'O': return &kO;
    case 'P': return &kP;
    case 'R': return &kR;
    case 'S': return &kS;
    case 'T': return &kT;
    case 'U': return &kU;
    case 'Y': return &kY;
    default: return nullptr;
  }
}

}  // namespace

BoolField text_mask(Eigen::Index height, Eigen::Index width, std::string_view text, int scale, int top, int left,
                    int line_gap) {
  BoolField ink = BoolField::Constant(height, width, false);
  const int advance = 6 * scale;
  const int line = (7 + line_gap) * scale;
  int y = top;
  int x = left;
  for (char ch : text) {
    if (x + 5 * scale > width) {
      x = left;
      y += line;
    }
    if (y + 7 * scale > height) break;
    if (const Glyph* g = glyph(ch)) {
      for (int gr = 0; gr < 7; ++gr) {
        for (int gc = 0; gc < 5; ++gc) {
          if ((*g)[gr][gc] != '#') continue;
          ink.block(y + gr * scale, x + gc * scale, scale, scale).setConstant(true);
        }
      }
    }
    x += advance;
  }
  return ink;
}

}  // namespace asbsr::fixtures
