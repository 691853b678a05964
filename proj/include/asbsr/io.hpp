#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "asbsr/core.hpp"
#include "asbsr/reconstruction.hpp"
#include "asbsr/sampling.hpp"
#include "asbsr/spectrum_analysis.hpp"
#include "asbsr/transforms.hpp"

namespace asbsr::io {

namespace fs = std::filesystem;

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const fs::path& path, const std::string& bytes);
std::string read_file(const fs::path& path);

/// Grayscale PGM (P2/P5, 8 or 16 bit) or 8-bit PNG, by file signature.
ImageGrid read_gray(const fs::path& path);
/// 8-bit binary PGM; values rounded and clamped to [0, 255].
void write_pgm(const fs::path& path, const ImageGrid& image);

/// Colour PPM (P3/P6) or 8-bit RGB PNG.
RgbImage read_rgb(const fs::path& path);
void write_ppm(const fs::path& path, const RgbImage& image);

/// Bitmap with 1 = set (black), as PBM specifies. P1 and P4 are read; P4 is written.
BoolField read_pbm(const fs::path& path);
void write_pbm(const fs::path& path, const BoolField& bits);

/// Lossless double-precision sidecar: "ASBSRF64 <rows> <cols>\n" followed
/// by row-major little-endian doubles.
void write_raw(const fs::path& path, const ImageGrid& image);
ImageGrid read_raw(const fs::path& path);

/// Row-major CSV of the full matrix (no header), one image row per line.
std::string matrix_csv(const ImageGrid& image);

// CSV tables. Every table starts with a header row.
std::string samples_csv(const SampleSet& samples);
SampleSet parse_samples_csv(const std::string& text, Eigen::Index height, Eigen::Index width);
std::string positions_csv(const std::vector<Position>& positions);
std::vector<Position> parse_positions_csv(const std::string& text);
std::string mask_index_csv(const SpectrumMask& mask);
SpectrumMask parse_mask_index_csv(const std::string& text, Eigen::Index height, Eigen::Index width);
std::string report_csv(const ReconReport& report);
std::string sparsity_csv(const SparsityReport& report);
std::string sinogram_csv(const Sinogram<double>& sino);
Sinogram<double> parse_sinogram_csv(const std::string& text, Eigen::Index image_size);

/// Shortest round-trip decimal representation.
std::string format_number(double value);

}  // namespace asbsr::io
