#include "asbsr/ec_masks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

namespace asbsr {

SpectrumMask::SpectrumMask(BoolField cells) : cells_(std::move(cells)) {
  if (cells_.rows() < 1 || cells_.cols() < 1) throw InvalidInput("SpectrumMask: empty field");
}

SpectrumMask SpectrumMask::full(Eigen::Index height, Eigen::Index width) {
  return SpectrumMask(BoolField::Constant(height, width, true));
}

SpectrumMask SpectrumMask::empty(Eigen::Index height, Eigen::Index width) {
  return SpectrumMask(BoolField::Constant(height, width, false));
}

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kRectangle:
      return "rectangle";
    case ShapeKind::kTriangle:
      return "triangle";
    case ShapeKind::kPieSector:
      return "pie_sector";
    case ShapeKind::kEllipse:
      return "ellipse";
    case ShapeKind::kSuperellipse:
      return "superellipse";
  }
  return "unknown";
}

ShapeKind parse_shape_kind(std::string_view name) {
  if (name == "rectangle") return ShapeKind::kRectangle;
  if (name == "triangle") return ShapeKind::kTriangle;
  if (name == "pie_sector" || name == "pie-sector" || name == "pie") return ShapeKind::kPieSector;
  if (name == "ellipse" || name == "oval") return ShapeKind::kEllipse;
  if (name == "superellipse" || name == "super_ellipse") return ShapeKind::kSuperellipse;
  throw InvalidInput("unknown shape kind: " + std::string(name));
}

void ShapeSpec::validate() const {
  if (!(area_fraction > 0.0 && area_fraction <= 1.0)) throw InvalidInput("ShapeSpec: area_fraction must lie in (0, 1]");
  if (!(aspect_ratio > 0.0) || !std::isfinite(aspect_ratio)) throw InvalidInput("ShapeSpec: aspect_ratio must be positive");
  if (!std::isfinite(orientation_deg)) throw InvalidInput("ShapeSpec: orientation must be finite");
  if (!(superellipse_exponent > 0.0) || !std::isfinite(superellipse_exponent)) {
    throw InvalidInput("ShapeSpec: superellipse_exponent must be positive");
  }
  if (!(sector_extent_deg > 0.0 && sector_extent_deg <= 90.0)) {
    throw InvalidInput("ShapeSpec: sector_extent_deg must lie in (0, 90]");
  }
}

std::string to_key_value(const ShapeSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  out << "kind=" << to_string(spec.kind) << '\n'
      << "area_fraction=" << spec.area_fraction << '\n'
      << "aspect_ratio=" << spec.aspect_ratio << '\n'
      << "orientation_deg=" << spec.orientation_deg << '\n'
      << "superellipse_exponent=" << spec.superellipse_exponent << '\n'
      << "sector_extent_deg=" << spec.sector_extent_deg << '\n';
  return out.str();
}

ShapeSpec shape_from_key_value(std::string_view text) {
  ShapeSpec spec;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidInput("ShapeSpec: malformed line '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    auto number = [&] {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != value.size()) throw InvalidInput("ShapeSpec: bad number for " + key);
      return v;
    };
    if (key == "kind") {
      spec.kind = parse_shape_kind(value);
    } else if (key == "area_fraction") {
      spec.area_fraction = number();
    } else if (key == "aspect_ratio") {
      spec.aspect_ratio = number();
    } else if (key == "orientation_deg") {
      spec.orientation_deg = number();
    } else if (key == "superellipse_exponent") {
      spec.superellipse_exponent = number();
    } else if (key == "sector_extent_deg") {
      spec.sector_extent_deg = number();
    } else {
      throw InvalidInput("ShapeSpec: unknown key " + key);
    }
  }
  spec.validate();
  return spec;
}

Image<double> shape_gauge(const ShapeSpec& spec, Eigen::Index height, Eigen::Index width) {
  spec.validate();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double theta = spec.orientation_deg * std::numbers::pi / 180.0;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double a = spec.aspect_ratio;
  const double p = spec.superellipse_exponent;
  const double sector_lo = spec.orientation_deg;
  const double sector_hi = spec.orientation_deg + spec.sector_extent_deg;

  Image<double> gauge(height, width);
  for (Eigen::Index c = 0; c < width; ++c) {
    for (Eigen::Index r = 0; r < height; ++r) {
      const double u = (static_cast<double>(c) + 0.5) / static_cast<double>(width);
      const double v = (static_cast<double>(r) + 0.5) / static_cast<double>(height);
      // Shape frame: rotate the point by -theta, then undo the aspect stretch.
      const double x = std::abs(u * cos_t + v * sin_t);
      const double y = std::abs(-u * sin_t + v * cos_t) / a;
      double g = kInf;
      switch (spec.kind) {
        case ShapeKind::kRectangle:
          g = std::max(x, y);
          break;
        case ShapeKind::kTriangle:
          g = x + y;
          break;
        case ShapeKind::kEllipse:
          g = std::hypot(x, y);
          break;
        case ShapeKind::kSuperellipse:
          g = std::pow(std::pow(x, p) + std::pow(y, p), 1.0 / p);
          break;
        case ShapeKind::kPieSector: {
          // A disc sector about DC; aspect and rotation do not deform it,
          // orientation only sets where the angular window starts.
          const double polar = std::atan2(v, u) * 180.0 / std::numbers::pi;
          const bool in_sector = spec.sector_extent_deg >= 90.0 || (polar >= sector_lo && polar <= sector_hi);
          g = in_sector ? std::hypot(u, v) : kInf;
          break;
        }
      }
      gauge(r, c) = g;
    }
  }
  return gauge;
}

SpectrumMask shape_mask_at_scale(const ShapeSpec& spec, double scale, Eigen::Index height, Eigen::Index width) {
  if (height < 1 || width < 1) throw InvalidInput("shape mask: empty grid");
  BoolField cells = (shape_gauge(spec, height, width).array() <= scale);
  cells(0, 0) = true;
  return SpectrumMask(std::move(cells));
}

SpectrumMask make_shape_mask(const ShapeSpec& spec, Eigen::Index height, Eigen::Index width) {
  spec.validate();
  if (height < 2 || width < 2) throw InvalidInput("make_shape_mask: grid must be at least 2x2");
  const Eigen::Index total = height * width;
  const auto target =
      std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::llround(spec.area_fraction * static_cast<double>(total))),
                               1, total);
  if (target <= 1) throw DegenerateMask("make_shape_mask: area fraction too small, zone would hold only DC");

  // Cells enter in order of increasing gauge (the scale at which a growing
  // shape first covers them); equal gauges enter in row-major order. Taking
  // the first `target` cells is the exact limit of bisecting on the scale.
  Image<double> gauge = shape_gauge(spec, height, width);
  gauge(0, 0) = -1.0;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto key = [&](Eigen::Index rm) { return gauge(rm / width, rm % width); };
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index lhs, Eigen::Index rhs) { return key(lhs) < key(rhs); });
  if (!std::isfinite(key(order[static_cast<std::size_t>(target - 1)]))) {
    throw InvalidInput("make_shape_mask: requested area exceeds what the shape can cover");
  }
  BoolField cells = BoolField::Constant(height, width, false);
  for (Eigen::Index i = 0; i < target; ++i) {
    const Eigen::Index rm = order[static_cast<std::size_t>(i)];
    cells(rm / width, rm % width) = true;
  }
  return SpectrumMask(std::move(cells));
}

MaskOverlap mask_union_fraction(const SpectrumMask& mask, const SpectrumMask& reference) {
  if (mask.height() != reference.height() || mask.width() != reference.width()) {
    throw InvalidInput("mask_union_fraction: dimension mismatch");
  }
  const auto both = (mask.cells() && reference.cells()).count();
  const auto only_mask = (mask.cells() && !reference.cells()).count();
  const double ref_count = static_cast<double>(reference.count());
  const double mask_count = static_cast<double>(mask.count());
  return {ref_count > 0 ? static_cast<double>(both) / ref_count : 0.0,
          mask_count > 0 ? static_cast<double>(only_mask) / mask_count : 0.0};
}

double zone_redundancy(const SpectrumMask& mask, const SpectrumMask& reference) {
  if (reference.count() == 0) throw InvalidInput("zone_redundancy: empty reference zone");
  return mask.fraction() / reference.fraction();
}

}  // namespace asbsr
