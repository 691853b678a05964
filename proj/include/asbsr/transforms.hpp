#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include "asbsr/core.hpp"

namespace asbsr {

namespace detail {

/// Orthonormal DCT-II / DCT-III of one length, computed through a single
/// complex FFT of the same length (even/odd reordering of the input).
template <typename Scalar>
class DctPlan {
 public:
  using Complex = std::complex<Scalar>;

  explicit DctPlan(Eigen::Index n) : n_(n), twiddle_(n), scale_(n), v_(n), spec_(n) {
    fft_.SetFlag(Eigen::FFT<Scalar>::Unscaled);
    const Scalar pi = std::numbers::pi_v<Scalar>;
    for (Eigen::Index k = 0; k < n; ++k) {
      twiddle_[k] = std::polar(Scalar(1), -pi * Scalar(k) / Scalar(2 * n));
      scale_[k] = std::sqrt((k == 0 ? Scalar(1) : Scalar(2)) / Scalar(n));
    }
  }

  void forward(const Scalar* in, Eigen::Index in_stride, Scalar* out, Eigen::Index out_stride) {
    if (n_ == 1) {  // kissfft cannot plan length 1
      out[0] = in[0];
      return;
    }
    const Eigen::Index half = (n_ + 1) / 2;
    for (Eigen::Index k = 0; k < half; ++k) v_[k] = Complex(in[2 * k * in_stride], 0);
    for (Eigen::Index k = 0; k < n_ / 2; ++k) v_[n_ - 1 - k] = Complex(in[(2 * k + 1) * in_stride], 0);
    fft_.fwd(spec_.data(), v_.data(), n_);
    for (Eigen::Index k = 0; k < n_; ++k) {
      out[k * out_stride] = (twiddle_[k] * spec_[k]).real() * scale_[k];
    }
  }

  void inverse(const Scalar* in, Eigen::Index in_stride, Scalar* out, Eigen::Index out_stride) {
    if (n_ == 1) {
      out[0] = in[0];
      return;
    }
    for (Eigen::Index k = 0; k < n_; ++k) {
      const Scalar re = in[k * in_stride] / scale_[k];
      const Scalar im = k == 0 ? Scalar(0) : -in[(n_ - k) * in_stride] / scale_[n_ - k];
      spec_[k] = std::conj(twiddle_[k]) * Complex(re, im);
    }
    fft_.inv(v_.data(), spec_.data(), n_);
    const Scalar norm = Scalar(1) / Scalar(n_);
    const Eigen::Index half = (n_ + 1) / 2;
    for (Eigen::Index k = 0; k < half; ++k) out[2 * k * out_stride] = v_[k].real() * norm;
    for (Eigen::Index k = 0; k < n_ / 2; ++k) out[(2 * k + 1) * out_stride] = v_[n_ - 1 - k].real() * norm;
  }

 private:
  Eigen::Index n_;
  Eigen::FFT<Scalar> fft_;
  std::vector<Complex> twiddle_;
  std::vector<Scalar> scale_;
  std::vector<Complex> v_;
  std::vector<Complex> spec_;
};

template <typename Scalar>
DctPlan<Scalar>& dct_plan(Eigen::Index n) {
  thread_local std::map<Eigen::Index, DctPlan<Scalar>> plans;
  auto it = plans.find(n);
  if (it == plans.end()) it = plans.emplace(n, DctPlan<Scalar>(n)).first;
  return it->second;
}

template <typename Scalar>
Eigen::FFT<Scalar>& unscaled_fft() {
  thread_local Eigen::FFT<Scalar> fft = [] {
    Eigen::FFT<Scalar> f;
    f.SetFlag(Eigen::FFT<Scalar>::Unscaled);
    return f;
  }();
  return fft;
}

/// Unitary 1D DFT applied along every column (axis 0) or row (axis 1).
template <typename Scalar>
void unitary_dft_axis(ComplexImage<Scalar>& field, int axis, Direction dir) {
  using Complex = std::complex<Scalar>;
  auto& fft = unscaled_fft<Scalar>();
  const Eigen::Index len = axis == 0 ? field.rows() : field.cols();
  const Eigen::Index count = axis == 0 ? field.cols() : field.rows();
  if (len == 1) return;
  const Scalar norm = Scalar(1) / std::sqrt(Scalar(len));
  std::vector<Complex> in(len), out(len);
  for (Eigen::Index j = 0; j < count; ++j) {
    for (Eigen::Index i = 0; i < len; ++i) in[i] = axis == 0 ? field(i, j) : field(j, i);
    if (dir == Direction::kForward) {
      fft.fwd(out.data(), in.data(), len);
    } else {
      fft.inv(out.data(), in.data(), len);
    }
    for (Eigen::Index i = 0; i < len; ++i) {
      (axis == 0 ? field(i, j) : field(j, i)) = out[i] * norm;
    }
  }
}

}  // namespace detail

/// Orthonormal 1D DCT-II (forward) or DCT-III (inverse).
template <typename Derived>
Signal<typename Derived::Scalar> dct1(const Eigen::MatrixBase<Derived>& signal, Direction dir) {
  using Scalar = typename Derived::Scalar;
  if (signal.size() < 1) throw InvalidInput("dct1: empty signal");
  require_finite(signal, "dct1");
  const Signal<Scalar> in = signal;
  Signal<Scalar> out(in.size());
  auto& plan = detail::dct_plan<Scalar>(in.size());
  if (dir == Direction::kForward) {
    plan.forward(in.data(), 1, out.data(), 1);
  } else {
    plan.inverse(in.data(), 1, out.data(), 1);
  }
  return out;
}

/// Orthonormal separable 2D DCT. Forward maps an image to its spectrum with
/// DC at (0, 0); inverse maps back. Energy is preserved exactly up to rounding.
template <typename Derived>
Image<typename Derived::Scalar> dct2(const Eigen::MatrixBase<Derived>& field, Direction dir) {
  using Scalar = typename Derived::Scalar;
  if (field.rows() < 1 || field.cols() < 1) throw InvalidInput("dct2: empty field");
  require_finite(field, "dct2");
  Image<Scalar> tmp = field;
  Image<Scalar> out(field.rows(), field.cols());
  const Eigen::Index rows = field.rows();
  const Eigen::Index cols = field.cols();
  auto& col_plan = detail::dct_plan<Scalar>(rows);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const Scalar* src = tmp.data() + j * rows;
    Scalar* dst = out.data() + j * rows;
    if (dir == Direction::kForward) {
      col_plan.forward(src, 1, dst, 1);
    } else {
      col_plan.inverse(src, 1, dst, 1);
    }
  }
  auto& row_plan = detail::dct_plan<Scalar>(cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Scalar* src = out.data() + i;
    Scalar* dst = tmp.data() + i;
    if (dir == Direction::kForward) {
      row_plan.forward(src, rows, dst, rows);
    } else {
      row_plan.inverse(src, rows, dst, rows);
    }
  }
  return tmp;
}

/// Unitary 2D DFT in natural (unshifted) order. Forward uses exp(-i...).
template <typename Scalar>
ComplexImage<Scalar> dft2(const ComplexImage<Scalar>& field, Direction dir) {
  if (field.rows() < 1 || field.cols() < 1) throw InvalidInput("dft2: empty field");
  require_finite(field, "dft2");
  ComplexImage<Scalar> out = field;
  detail::unitary_dft_axis(out, 0, dir);
  detail::unitary_dft_axis(out, 1, dir);
  return out;
}

template <typename Scalar>
ComplexImage<Scalar> dft2(const Image<Scalar>& field, Direction dir) {
  return dft2(ComplexImage<Scalar>(field.template cast<std::complex<Scalar>>()), dir);
}

/// Inner flat radius of the apodization window relative to the inscribed radius.
inline constexpr double kApodizationFlatRadius = 0.7;

/// Circular raised-cosine window: 1 up to 0.7 of the inscribed radius, then
/// a half-cosine taper reaching 0 at the inscribed circle.
template <typename Scalar = double>
Image<Scalar> apodization_window(Eigen::Index height, Eigen::Index width) {
  Image<Scalar> w(height, width);
  const double cy = (height - 1) / 2.0;
  const double cx = (width - 1) / 2.0;
  const double outer = std::min(height, width) / 2.0;
  const double inner = kApodizationFlatRadius * outer;
  for (Eigen::Index c = 0; c < width; ++c) {
    for (Eigen::Index r = 0; r < height; ++r) {
      const double d = std::hypot(r - cy, c - cx);
      double v;
      if (d <= inner) {
        v = 1.0;
      } else if (d >= outer) {
        v = 0.0;
      } else {
        v = 0.5 * (1.0 + std::cos(std::numbers::pi * (d - inner) / (outer - inner)));
      }
      w(r, c) = static_cast<Scalar>(v);
    }
  }
  return w;
}

template <typename Derived>
Image<typename Derived::Scalar> apodize(const Eigen::MatrixBase<Derived>& image) {
  using Scalar = typename Derived::Scalar;
  return image.cwiseProduct(apodization_window<Scalar>(image.rows(), image.cols()));
}

// ---------------------------------------------------------------------------
// Discrete Radon pair.

template <typename Scalar>
struct Sinogram {
  std::vector<double> angles_deg;  ///< strictly increasing, in [0, 180)
  Image<Scalar> values;            ///< angles x bins
  Eigen::Index image_size = 0;     ///< side of the square image it belongs to

  Eigen::Index bins() const { return values.cols(); }
};

/// Detector cells needed so that every pixel of an n x n image projects
/// strictly inside the detector at every angle.
inline Eigen::Index radon_bin_count(Eigen::Index n) {
  auto bins = static_cast<Eigen::Index>(std::ceil(std::numbers::sqrt2 * static_cast<double>(n - 1))) + 3;
  if (bins % 2 == 0) ++bins;
  return bins;
}

namespace detail {

inline void validate_angles(const std::vector<double>& angles) {
  if (angles.empty()) throw InvalidInput("radon: at least one angle required");
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (!std::isfinite(angles[i]) || angles[i] < 0.0 || angles[i] >= 180.0) {
      throw InvalidInput("radon: angles must lie in [0, 180)");
    }
    if (i > 0 && !(angles[i] > angles[i - 1])) throw InvalidInput("radon: angles must be strictly increasing");
  }
}

/// Detector coordinate (fractional bin) of pixel (r, c) at one angle.
struct ProjectionGeometry {
  double cos_t, sin_t, center, bin_center;

  ProjectionGeometry(double angle_deg, Eigen::Index n, Eigen::Index bins)
      : cos_t(std::cos(angle_deg * std::numbers::pi / 180.0)),
        sin_t(std::sin(angle_deg * std::numbers::pi / 180.0)),
        center((n - 1) / 2.0),
        bin_center((bins - 1) / 2.0) {}

  double bin(Eigen::Index r, Eigen::Index c) const {
    return (c - center) * cos_t + (center - r) * sin_t + bin_center;
  }
};

/// Exact strip integrals of a unit square pixel over unit detector cells. The
/// pixel's shadow is a trapezoid (two boxes of widths |cos| and |sin|
/// convolved); cell i spans [i - 0.5, i + 0.5].
class PixelFootprint {
 public:
  explicit PixelFootprint(const ProjectionGeometry& geo)
      : a_(std::abs(geo.cos_t)), b_(std::abs(geo.sin_t)), half_((a_ + b_) / 2.0) {
    if (a_ < b_) std::swap(a_, b_);
  }

  /// Fills up to three weights starting at cell `first`; returns the count.
  int weights(double t, Eigen::Index& first, std::array<double, 3>& w) const {
    first = static_cast<Eigen::Index>(std::floor(t - half_ + 0.5));
    const auto last = static_cast<Eigen::Index>(std::floor(t + half_ + 0.5));
    double lo = 0.0;
    int count = 0;
    for (Eigen::Index i = first; i <= last && count < 3; ++i, ++count) {
      const double hi = i == last ? 1.0 : cdf(static_cast<double>(i) + 0.5 - t);
      w[count] = hi - lo;
      lo = hi;
    }
    return count;
  }

 private:
  double cdf(double x) const {
    if (b_ < 1e-7) return std::clamp(x / a_ + 0.5, 0.0, 1.0);
    const double s = half_;
    const double d = (a_ - b_) / 2.0;
    auto ramp = [](double u) { return u > 0.0 ? u * u : 0.0; };
    const double v = (ramp(x + s) - ramp(x + d) - ramp(x - d) + ramp(x - s)) / (2.0 * a_ * b_);
    return std::clamp(v, 0.0, 1.0);
  }

  double a_, b_, half_;
};

}  // namespace detail

/// Pixel-driven projection: every pixel, taken as a unit square, deposits its
/// value onto the detector cells its shadow covers in proportion to the
/// covered length, so each projection sums exactly to the image mass.
template <typename Scalar>
Sinogram<Scalar> radon_forward(const Image<Scalar>& image, const std::vector<double>& angles_deg) {
  if (image.rows() != image.cols() || image.rows() < 1) throw InvalidInput("radon_forward: image must be square");
  require_finite(image, "radon_forward");
  detail::validate_angles(angles_deg);
  const Eigen::Index n = image.rows();
  const Eigen::Index bins = radon_bin_count(n);
  Sinogram<Scalar> sino{angles_deg, Image<Scalar>::Zero(static_cast<Eigen::Index>(angles_deg.size()), bins), n};
  for (std::size_t a = 0; a < angles_deg.size(); ++a) {
    const detail::ProjectionGeometry geo(angles_deg[a], n, bins);
    const detail::PixelFootprint foot(geo);
    auto row = sino.values.row(static_cast<Eigen::Index>(a));
    std::array<double, 3> w{};
    Eigen::Index first = 0;
    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index r = 0; r < n; ++r) {
        const Scalar v = image(r, c);
        if (v == Scalar(0)) continue;
        const int count = foot.weights(geo.bin(r, c), first, w);
        for (int k = 0; k < count; ++k) row(first + k) += static_cast<Scalar>(w[k]) * v;
      }
    }
  }
  return sino;
}

/// Filtered back-projection with the discrete Ram-Lak kernel. Back-projection
/// reuses the pixel footprint, the exact adjoint of radon_forward's deposit.
template <typename Scalar>
Image<Scalar> radon_inverse(const Sinogram<Scalar>& sino) {
  using Complex = std::complex<Scalar>;
  const auto num_angles = static_cast<Eigen::Index>(sino.angles_deg.size());
  if (num_angles < 2) throw InvalidInput("radon_inverse: at least two angles required");
  if (sino.values.rows() != num_angles) throw InvalidInput("radon_inverse: angle count does not match sinogram rows");
  if (sino.image_size < 1 || sino.bins() != radon_bin_count(sino.image_size)) {
    throw InvalidInput("radon_inverse: bin count inconsistent with image size");
  }
  require_finite(sino.values, "radon_inverse");
  detail::validate_angles(sino.angles_deg);

  const Eigen::Index bins = sino.bins();
  const Eigen::Index len = 2 * bins;
  auto& fft = detail::unscaled_fft<Scalar>();

  std::vector<Complex> kernel(len, Complex(0)), kernel_spec(len);
  kernel[0] = Complex(Scalar(0.25));
  for (Eigen::Index k = 1; k < bins; k += 2) {
    const Scalar h = Scalar(-1) / (std::numbers::pi_v<Scalar> * std::numbers::pi_v<Scalar> * Scalar(k * k));
    kernel[k] = Complex(h);
    kernel[len - k] = Complex(h);
  }
  fft.fwd(kernel_spec.data(), kernel.data(), len);

  Image<Scalar> filtered(num_angles, bins);
  std::vector<Complex> buf(len), spec(len);
  for (Eigen::Index a = 0; a < num_angles; ++a) {
    std::fill(buf.begin(), buf.end(), Complex(0));
    for (Eigen::Index b = 0; b < bins; ++b) buf[b] = Complex(sino.values(a, b));
    fft.fwd(spec.data(), buf.data(), len);
    for (Eigen::Index k = 0; k < len; ++k) spec[k] *= kernel_spec[k];
    fft.inv(buf.data(), spec.data(), len);
    for (Eigen::Index b = 0; b < bins; ++b) filtered(a, b) = buf[b].real() / Scalar(len);
  }

  const Eigen::Index n = sino.image_size;
  Image<Scalar> image = Image<Scalar>::Zero(n, n);
  for (Eigen::Index a = 0; a < num_angles; ++a) {
    const detail::ProjectionGeometry geo(sino.angles_deg[a], n, bins);
    const detail::PixelFootprint foot(geo);
    std::array<double, 3> w{};
    Eigen::Index first = 0;
    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index r = 0; r < n; ++r) {
        const int count = foot.weights(geo.bin(r, c), first, w);
        Scalar acc(0);
        for (int k = 0; k < count; ++k) acc += static_cast<Scalar>(w[k]) * filtered(a, first + k);
        image(r, c) += acc;
      }
    }
  }
  return image * (std::numbers::pi_v<Scalar> / Scalar(num_angles));
}

}  // namespace asbsr
