#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asbsr/core.hpp"
#include "asbsr/ec_masks.hpp"
#include "asbsr/reconstruction.hpp"
#include "asbsr/transforms.hpp"

namespace asbsr {

// ---------------------------------------------------------------------------
// Demosaicing

enum class Channel : std::uint8_t { kRed, kGreen, kBlue };
enum class Arrangement { kRegularBayer, kSemiRandom };

std::string to_string(Arrangement a);
Arrangement parse_arrangement(std::string_view name);

using ChannelMap = Eigen::Matrix<Channel, Eigen::Dynamic, Eigen::Dynamic>;

/// Colour filter array image: one known channel value per pixel.
struct MosaicImage {
  Eigen::Index height = 0;
  Eigen::Index width = 0;
  ChannelMap channel_of_pixel;
  ImageGrid values;
  Arrangement arrangement = Arrangement::kRegularBayer;
  std::uint64_t seed = 0;
};

/// Green sits on the main diagonal of every 2x2 cell. Regular Bayer puts red
/// at the top-right and blue at the bottom-left; semi-random swaps the two
/// per cell with probability 1/2. Dimensions must be even.
ChannelMap mosaic_pattern(Eigen::Index height, Eigen::Index width, Arrangement arrangement, std::uint64_t seed);
MosaicImage mosaic(const RgbImage& rgb, Arrangement arrangement, std::uint64_t seed = 0);

/// Normalized-convolution fill of each channel from its own pixels: axis
/// neighbours weigh 2, diagonal ones 1 (green uses axis neighbours only),
/// borders replicate. On a Bayer pattern this is classic bilinear
/// demosaicing.
RgbImage demosaic_bilinear(const MosaicImage& m);

struct DemosaicResult {
  RgbImage image;
  ReconReport red, green, blue;
};

/// Each channel is reconstructed from its own pixels with the shape
/// calibrated to that channel's pixel density. The three channels run
/// concurrently.
DemosaicResult demosaic_bs(const MosaicImage& m, const ShapeSpec& shape, const ReconOptions& opts,
                           const RgbImage* reference = nullptr);

/// Square root of the mean of the three per-channel MSEs.
double total_rmse(const RgbImage& reference, const RgbImage& estimate);

// ---------------------------------------------------------------------------
// Masks over the pixel domain. true = observed (occlusion) or may be
// nonzero (support).

using OcclusionMask = BoolField;
using SupportMask = BoolField;

/// Pixels exactly equal to zero are treated as occluded.
OcclusionMask occlusion_from_zero_level(const ImageGrid& image);

/// Opaque side x side squares dropped at random until at least `fraction` of
/// the pixels are covered.
OcclusionMask random_square_occlusion(Eigen::Index height, Eigen::Index width, double fraction, int side,
                                      std::uint64_t seed);

/// Centred disc of radius `radius` in units of the image side.
SupportMask circular_support(Eigen::Index height, Eigen::Index width, double radius);

/// Pixels whose filtered back-projection magnitude reaches `threshold`.
SupportMask support_from_backprojection(const Sinogram<double>& sino, double threshold);

// ---------------------------------------------------------------------------
// In-painting

Reconstruction<double> inpaint(const ImageGrid& image, const OcclusionMask& observed, const ShapeSpec& shape,
                               const ReconOptions& opts, const ImageGrid* reference = nullptr);

// ---------------------------------------------------------------------------
// Projection recovery

struct ProjectionRecovery {
  Sinogram<double> sinogram;
  ImageGrid image;
  /// rmse traces are measured in the sinogram domain.
  ReconReport report;
};

/// Iterates filtered back-projection, support bounding, re-projection and
/// restoration of the known sinogram cells. `known` is angles x bins.
ProjectionRecovery recover_projections(const Sinogram<double>& sino, const BoolField& known,
                                       const SupportMask& support, const ReconOptions& opts,
                                       const Sinogram<double>* reference = nullptr);

// ---------------------------------------------------------------------------
// Sparse Fourier spectrum

/// Known DFT coefficients (unitary, DC at (0, 0)).
struct SpectrumSamples {
  Eigen::Index height = 0;
  Eigen::Index width = 0;
  std::vector<Position> positions;
  std::vector<std::complex<double>> values;
};

/// Disc of radius `radius` (in cycles per sample, 0.5 inscribes the
/// baseband) around DC of an unshifted DFT grid.
SpectrumMask circular_spectral_mask(Eigen::Index height, Eigen::Index width, double radius = 0.5);

struct FourierRecovery {
  ImageGrid image;
  ComplexSpectrum spectrum;  ///< after the last restoration and bounding
  ReconReport report;
};

FourierRecovery reconstruct_from_sparse_spectrum(const SpectrumSamples& known, const SupportMask& support,
                                                 const SpectrumMask& spectral_mask, const ReconOptions& opts,
                                                 const ImageGrid* reference = nullptr);

// ---------------------------------------------------------------------------
// Phase retrieval

struct PhaseRetrievalOptions {
  ReconOptions stage1{.max_iterations = 2000, .stop_rmse = std::nullopt, .plateau_window = 50, .plateau_epsilon = 0.0};
  ReconOptions stage2{};
};

struct PhaseRetrieval {
  ImageGrid occluded;  ///< stage 1: best iterate by modulus residual
  ImageGrid image;     ///< stage 2: in-painted
  ReconReport stage1;  ///< residual_trace is the modulus misfit
  ReconReport stage2;
  double modulus_residual = 0.0;
};

/// Recovers a real nonnegative image from the DFT modulus of its occluded
/// copy. Stage 1 alternates between the measured modulus and the occlusion
/// (plus real, nonnegative) constraint, starting from the phase of the
/// mask's own spectrum unless `initial_phase` is given. Stage 2 in-paints the
/// occlusions.
PhaseRetrieval phase_retrieve(const ImageGrid& modulus, const OcclusionMask& observed, const ShapeSpec& shape,
                              const PhaseRetrievalOptions& opts, const ImageGrid* reference = nullptr,
                              const ImageGrid* initial_phase = nullptr);

}  // namespace asbsr
