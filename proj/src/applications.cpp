#include "asbsr/applications.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "asbsr/random.hpp"
#include "asbsr/sampling.hpp"

namespace asbsr {

std::string to_string(Arrangement a) {
  return a == Arrangement::kRegularBayer ? "regular_bayer" : "semi_random";
}

Arrangement parse_arrangement(std::string_view name) {
  if (name == "regular_bayer" || name == "bayer" || name == "regular") return Arrangement::kRegularBayer;
  if (name == "semi_random" || name == "semi-random" || name == "random") return Arrangement::kSemiRandom;
  throw InvalidInput("unknown mosaic arrangement: " + std::string(name));
}

ChannelMap mosaic_pattern(Eigen::Index height, Eigen::Index width, Arrangement arrangement, std::uint64_t seed) {
  if (height < 2 || width < 2 || height % 2 || width % 2) {
    throw InvalidInput("mosaic: dimensions must be even and at least 2");
  }
  ChannelMap map(height, width);
  Rng rng(seed, stream::kMosaic, 0);
  for (Eigen::Index r = 0; r < height; r += 2) {
    for (Eigen::Index c = 0; c < width; c += 2) {
      const bool swap = arrangement == Arrangement::kSemiRandom && rng.below(2) == 1;
      map(r, c) = Channel::kGreen;
      map(r + 1, c + 1) = Channel::kGreen;
      map(r, c + 1) = swap ? Channel::kBlue : Channel::kRed;
      map(r + 1, c) = swap ? Channel::kRed : Channel::kBlue;
    }
  }
  return map;
}

namespace {

const ImageGrid& channel_plane(const RgbImage& rgb, Channel ch) {
  switch (ch) {
    case Channel::kRed:
      return rgb.red;
    case Channel::kGreen:
      return rgb.green;
    case Channel::kBlue:
      break;
  }
  return rgb.blue;
}

ImageGrid& channel_plane(RgbImage& rgb, Channel ch) {
  return const_cast<ImageGrid&>(channel_plane(std::as_const(rgb), ch));
}

constexpr Channel kChannels[] = {Channel::kRed, Channel::kGreen, Channel::kBlue};

void check_same_dims(const ImageGrid& a, const ImageGrid& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput(std::string(what) + ": dimension mismatch");
}

void check_field(const BoolField& f, Eigen::Index h, Eigen::Index w, const char* what) {
  if (f.rows() != h || f.cols() != w) throw InvalidInput(std::string(what) + ": mask dimensions differ");
  if (f.count() == 0) throw InvalidInput(std::string(what) + ": mask has no set cells");
}

}  // namespace

MosaicImage mosaic(const RgbImage& rgb, Arrangement arrangement, std::uint64_t seed) {
  check_same_dims(rgb.red, rgb.green, "mosaic");
  check_same_dims(rgb.red, rgb.blue, "mosaic");
  MosaicImage m;
  m.height = rgb.red.rows();
  m.width = rgb.red.cols();
  m.arrangement = arrangement;
  m.seed = seed;
  m.channel_of_pixel = mosaic_pattern(m.height, m.width, arrangement, seed);
  m.values.resize(m.height, m.width);
  for (Eigen::Index c = 0; c < m.width; ++c) {
    for (Eigen::Index r = 0; r < m.height; ++r) m.values(r, c) = channel_plane(rgb, m.channel_of_pixel(r, c))(r, c);
  }
  return m;
}

RgbImage demosaic_bilinear(const MosaicImage& m) {
  const Eigen::Index h = m.height;
  const Eigen::Index w = m.width;
  RgbImage out{ImageGrid(h, w), ImageGrid(h, w), ImageGrid(h, w)};
  for (Channel ch : kChannels) {
    const double diag = ch == Channel::kGreen ? 0.0 : 1.0;
    const double axis = ch == Channel::kGreen ? 1.0 : 2.0;
    ImageGrid& plane = channel_plane(out, ch);
    for (Eigen::Index c = 0; c < w; ++c) {
      for (Eigen::Index r = 0; r < h; ++r) {
        if (m.channel_of_pixel(r, c) == ch) {
          plane(r, c) = m.values(r, c);
          continue;
        }
        double num = 0.0;
        double den = 0.0;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            const Eigen::Index rr = std::clamp<Eigen::Index>(r + dr, 0, h - 1);
            const Eigen::Index cc = std::clamp<Eigen::Index>(c + dc, 0, w - 1);
            if (m.channel_of_pixel(rr, cc) != ch) continue;
            const double k = (dr == 0 || dc == 0) ? axis : diag;
            num += k * m.values(rr, cc);
            den += k;
          }
        }
        if (den == 0.0) {
          // Only reachable for green at an isolated spot; widen to the 3x3
          // box with unit weights.
          for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
              const Eigen::Index rr = std::clamp<Eigen::Index>(r + dr, 0, h - 1);
              const Eigen::Index cc = std::clamp<Eigen::Index>(c + dc, 0, w - 1);
              if (m.channel_of_pixel(rr, cc) != ch) continue;
              num += m.values(rr, cc);
              den += 1.0;
            }
          }
        }
        if (den == 0.0) throw NumericalFailure("demosaic_bilinear: channel missing from a neighbourhood");
        plane(r, c) = num / den;
      }
    }
  }
  return out;
}

DemosaicResult demosaic_bs(const MosaicImage& m, const ShapeSpec& shape, const ReconOptions& opts,
                           const RgbImage* reference) {
  opts.validate();
  auto run = [&](Channel ch) {
    SampleSet samples;
    samples.height = m.height;
    samples.width = m.width;
    for (Eigen::Index r = 0; r < m.height; ++r) {
      for (Eigen::Index c = 0; c < m.width; ++c) {
        if (m.channel_of_pixel(r, c) == ch) samples.positions.push_back({static_cast<int>(r), static_cast<int>(c)});
      }
    }
    samples.values.resize(samples.size());
    for (Eigen::Index i = 0; i < samples.size(); ++i) {
      const Position p = samples.positions[static_cast<std::size_t>(i)];
      samples.values(i) = m.values(p.row, p.col);
    }
    ShapeSpec spec = shape;
    spec.area_fraction = samples.rate();
    const SpectrumMask mask = make_shape_mask(spec, m.height, m.width);
    const ImageGrid* ref = reference ? &channel_plane(*reference, ch) : nullptr;
    return reconstruct_bs(samples, mask, ref, opts);
  };
  auto red = std::async(std::launch::async, run, Channel::kRed);
  auto green = std::async(std::launch::async, run, Channel::kGreen);
  auto blue = run(Channel::kBlue);
  auto r = red.get();
  auto g = green.get();
  return {{std::move(r.image), std::move(g.image), std::move(blue.image)},
          std::move(r.report),
          std::move(g.report),
          std::move(blue.report)};
}

double total_rmse(const RgbImage& reference, const RgbImage& estimate) {
  double sum = 0.0;
  double n = 0.0;
  for (Channel ch : kChannels) {
    check_same_dims(channel_plane(reference, ch), channel_plane(estimate, ch), "total_rmse");
    sum += (channel_plane(reference, ch) - channel_plane(estimate, ch)).squaredNorm();
    n += static_cast<double>(channel_plane(reference, ch).size());
  }
  return std::sqrt(sum / n);
}

OcclusionMask occlusion_from_zero_level(const ImageGrid& image) { return image.array() != 0.0; }

OcclusionMask random_square_occlusion(Eigen::Index height, Eigen::Index width, double fraction, int side,
                                      std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw InvalidInput("random_square_occlusion: fraction must lie in [0, 1)");
  if (side < 1 || side > height || side > width) throw InvalidInput("random_square_occlusion: bad square side");
  OcclusionMask observed = OcclusionMask::Constant(height, width, true);
  Rng rng(seed, stream::kOcclusion, 0);
  const auto target = static_cast<Eigen::Index>(std::ceil(fraction * static_cast<double>(height * width)));
  Eigen::Index covered = 0;
  while (covered < target) {
    const auto r0 = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(height - side + 1)));
    const auto c0 = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(width - side + 1)));
    auto block = observed.block(r0, c0, side, side);
    covered += block.count();
    block.setConstant(false);
  }
  return observed;
}

SupportMask circular_support(Eigen::Index height, Eigen::Index width, double radius) {
  if (height < 1 || width < 1 || !(radius > 0.0)) throw InvalidInput("circular_support: bad geometry");
  SupportMask s(height, width);
  const double cy = (static_cast<double>(height) - 1.0) / 2.0;
  const double cx = (static_cast<double>(width) - 1.0) / 2.0;
  for (Eigen::Index c = 0; c < width; ++c) {
    for (Eigen::Index r = 0; r < height; ++r) {
      const double y = (static_cast<double>(r) - cy) / static_cast<double>(height);
      const double x = (static_cast<double>(c) - cx) / static_cast<double>(width);
      s(r, c) = x * x + y * y <= radius * radius;
    }
  }
  return s;
}

SupportMask support_from_backprojection(const Sinogram<double>& sino, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidInput("support_from_backprojection: threshold must be >= 0");
  return radon_inverse(sino).array().abs() >= threshold;
}

Reconstruction<double> inpaint(const ImageGrid& image, const OcclusionMask& observed, const ShapeSpec& shape,
                               const ReconOptions& opts, const ImageGrid* reference) {
  require_finite(image, "inpaint");
  check_field(observed, image.rows(), image.cols(), "inpaint");
  shape.validate();
  const auto needed = shape.area_fraction * static_cast<double>(image.size());
  if (static_cast<double>(observed.count()) < needed) {
    throw Infeasible("inpaint: observed pixels (" + std::to_string(observed.count()) +
                     ") fewer than the spectral zone needs (" + std::to_string(std::llround(std::ceil(needed))) + ")");
  }
  const SpectrumMask mask = make_shape_mask(shape, image.rows(), image.cols());
  std::vector<Position> positions;
  for (Eigen::Index r = 0; r < image.rows(); ++r) {
    for (Eigen::Index c = 0; c < image.cols(); ++c) {
      if (observed(r, c)) positions.push_back({static_cast<int>(r), static_cast<int>(c)});
    }
  }
  return reconstruct_bs(take_samples(image, positions), mask, reference, opts);
}

ProjectionRecovery recover_projections(const Sinogram<double>& sino, const BoolField& known,
                                       const SupportMask& support, const ReconOptions& opts,
                                       const Sinogram<double>* reference) {
  const Eigen::Index n = sino.image_size;
  if (support.rows() != n || support.cols() != n) throw InvalidInput("recover_projections: support size differs");
  if (support.count() == 0) throw InvalidInput("recover_projections: empty support");
  if (known.rows() != sino.values.rows() || known.cols() != sino.values.cols()) {
    throw InvalidInput("recover_projections: known-cell mask does not match the sinogram");
  }
  if (known.count() == 0) throw InvalidInput("recover_projections: no known cells");
  if (reference && (reference->values.rows() != sino.values.rows() || reference->values.cols() != sino.values.cols())) {
    throw InvalidInput("recover_projections: reference sinogram has wrong shape");
  }
  require_finite(sino.values, "recover_projections");

  detail::IterationMonitor monitor(opts, reference != nullptr);
  Sinogram<double> estimate = sino;
  estimate.values = known.select(sino.values, 0.0);
  ImageGrid image;
  const auto m = static_cast<double>(known.count());
  while (true) {
    image = support.select(radon_inverse(estimate), 0.0);
    const Sinogram<double> projected = radon_forward(image, sino.angles_deg);
    const double misfit = known.select(projected.values - sino.values, 0.0).squaredNorm();
    estimate.values = known.select(sino.values, projected.values);
    std::optional<std::pair<double, double>> errs;
    if (reference) errs = detail::errors_against(reference->values, estimate.values);
    if (monitor.record(errs, std::sqrt(misfit / m))) break;
  }
  return {std::move(estimate), std::move(image), monitor.take()};
}

SpectrumMask circular_spectral_mask(Eigen::Index height, Eigen::Index width, double radius) {
  if (height < 1 || width < 1 || !(radius > 0.0)) throw InvalidInput("circular_spectral_mask: bad geometry");
  BoolField cells(height, width);
  for (Eigen::Index c = 0; c < width; ++c) {
    for (Eigen::Index r = 0; r < height; ++r) {
      const double fy = static_cast<double>(std::min(r, height - r)) / static_cast<double>(height);
      const double fx = static_cast<double>(std::min(c, width - c)) / static_cast<double>(width);
      cells(r, c) = fx * fx + fy * fy <= radius * radius;
    }
  }
  return SpectrumMask(std::move(cells));
}

FourierRecovery reconstruct_from_sparse_spectrum(const SpectrumSamples& known, const SupportMask& support,
                                                 const SpectrumMask& spectral_mask, const ReconOptions& opts,
                                                 const ImageGrid* reference) {
  const Eigen::Index h = known.height;
  const Eigen::Index w = known.width;
  check_field(support, h, w, "reconstruct_from_sparse_spectrum");
  if (spectral_mask.height() != h || spectral_mask.width() != w) {
    throw InvalidInput("reconstruct_from_sparse_spectrum: spectral mask dimensions differ");
  }
  if (known.values.size() != known.positions.size()) {
    throw InvalidInput("reconstruct_from_sparse_spectrum: values/positions size mismatch");
  }
  validate_positions(h, w, known.positions);
  for (const Position& p : known.positions) {
    if (!spectral_mask(p.row, p.col)) {
      throw InvalidInput("reconstruct_from_sparse_spectrum: known sample lies outside the spectral mask");
    }
  }
  if (reference && (reference->rows() != h || reference->cols() != w)) {
    throw InvalidInput("reconstruct_from_sparse_spectrum: reference has wrong dimensions");
  }

  auto restore = [&](ComplexSpectrum& s) {
    for (std::size_t i = 0; i < known.positions.size(); ++i) s(known.positions[i].row, known.positions[i].col) = known.values[i];
  };
  detail::IterationMonitor monitor(opts, reference != nullptr);
  ComplexSpectrum spectrum = ComplexSpectrum::Zero(h, w);
  restore(spectrum);
  ImageGrid image;
  const auto m = static_cast<double>(known.positions.size());
  while (true) {
    image = support.select(dft2(spectrum, Direction::kInverse).real(), 0.0);
    spectrum = dft2(image, Direction::kForward);
    double misfit = 0.0;
    for (std::size_t i = 0; i < known.positions.size(); ++i) {
      misfit += std::norm(spectrum(known.positions[i].row, known.positions[i].col) - known.values[i]);
    }
    restore(spectrum);
    spectrum = spectral_mask.apply(spectrum);
    std::optional<std::pair<double, double>> errs;
    if (reference) errs = detail::errors_against(*reference, image);
    if (monitor.record(errs, std::sqrt(misfit / m))) break;
  }
  return {std::move(image), std::move(spectrum), monitor.take()};
}

PhaseRetrieval phase_retrieve(const ImageGrid& modulus, const OcclusionMask& observed, const ShapeSpec& shape,
                              const PhaseRetrievalOptions& opts, const ImageGrid* reference,
                              const ImageGrid* initial_phase) {
  const Eigen::Index h = modulus.rows();
  const Eigen::Index w = modulus.cols();
  require_finite(modulus, "phase_retrieve");
  if ((modulus.array() < 0.0).any()) throw InvalidInput("phase_retrieve: modulus must be nonnegative");
  check_field(observed, h, w, "phase_retrieve");
  shape.validate();
  if (static_cast<double>(observed.count()) < shape.area_fraction * static_cast<double>(h * w)) {
    throw Infeasible("phase_retrieve: transparent fraction of the mask is below the spectral zone area");
  }
  if (initial_phase && (initial_phase->rows() != h || initial_phase->cols() != w)) {
    throw InvalidInput("phase_retrieve: initial phase has wrong dimensions");
  }
  if (reference && (reference->rows() != h || reference->cols() != w)) {
    throw InvalidInput("phase_retrieve: reference has wrong dimensions");
  }

  ComplexSpectrum unit(h, w);
  if (initial_phase) {
    unit = initial_phase->unaryExpr([](double p) { return std::polar(1.0, p); });
  } else {
    const ComplexSpectrum s = dft2(ImageGrid(observed.cast<double>()), Direction::kForward);
    unit = s.unaryExpr([](std::complex<double> z) { return std::polar(1.0, std::arg(z)); });
  }

  ImageGrid occluded_reference;
  if (reference) occluded_reference = observed.select(*reference, 0.0);
  detail::IterationMonitor monitor(opts.stage1, reference != nullptr);
  const double n = static_cast<double>(h * w);
  ImageGrid best;
  double best_residual = std::numeric_limits<double>::infinity();
  while (true) {
    const ComplexSpectrum current = modulus.cast<std::complex<double>>().cwiseProduct(unit);
    const ImageGrid x = observed.select(dft2(current, Direction::kInverse).real().cwiseMax(0.0), 0.0);
    const ComplexSpectrum spectrum = dft2(x, Direction::kForward);
    const double residual = std::sqrt((spectrum.cwiseAbs() - modulus).squaredNorm() / n);
    if (!std::isfinite(residual)) throw NumericalFailure("phase_retrieve: non-finite iterate");
    if (residual < best_residual) {
      best_residual = residual;
      best = x;
    }
    unit = spectrum.unaryExpr([](std::complex<double> z) {
      const double a = std::abs(z);
      return a > 0.0 ? z / a : std::complex<double>(1.0, 0.0);
    });
    std::optional<std::pair<double, double>> errs;
    if (reference) errs = detail::errors_against(occluded_reference, x);
    if (monitor.record(errs, residual)) break;
  }

  PhaseRetrieval out;
  out.occluded = std::move(best);
  out.stage1 = monitor.take();
  out.modulus_residual = best_residual;
  auto stage2 = inpaint(out.occluded, observed, shape, opts.stage2, reference);
  out.image = std::move(stage2.image);
  out.stage2 = std::move(stage2.report);
  return out;
}

}  // namespace asbsr
