#include "asbsr/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#ifdef ASBSR_HAVE_PNG
#include <png.h>
#endif

namespace asbsr::io {

void write_file_atomic(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place: " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

/// Netpbm header tokenizer: magic, then whitespace-separated integers with
/// '#' comments, then exactly one whitespace byte before binary data.
class NetpbmReader {
 public:
  explicit NetpbmReader(std::string bytes) : data_(std::move(bytes)) {}

  std::string magic() {
    if (data_.size() < 2 || data_[0] != 'P') throw IoError("not a netpbm file");
    pos_ = 2;
    return data_.substr(0, 2);
  }

  long integer() {
    skip_space();
    const char* begin = data_.data() + pos_;
    long v = 0;
    const auto [ptr, ec] = std::from_chars(begin, data_.data() + data_.size(), v);
    if (ec != std::errc() || ptr == begin) throw IoError("malformed netpbm header");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  /// One ASCII bit for P1, where digits may be unseparated.
  int bit() {
    skip_space();
    if (pos_ >= data_.size()) throw IoError("truncated P1 data");
    const char c = data_[pos_++];
    if (c != '0' && c != '1') throw IoError("malformed P1 data");
    return c - '0';
  }

  std::string_view binary(std::size_t count) {
    ++pos_;  // single whitespace after the header
    if (pos_ + count > data_.size()) throw IoError("truncated netpbm data");
    return std::string_view(data_).substr(pos_, count);
  }

 private:
  void skip_space() {
    while (pos_ < data_.size()) {
      const char c = data_[pos_];
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string data_;
  std::size_t pos_ = 0;
};

void check_dims(long w, long h) {
  if (w < 1 || h < 1 || w > (1L << 16) || h > (1L << 16)) throw IoError("unsupported image dimensions");
}

std::vector<ImageGrid> read_netpbm_channels(const std::string& bytes, int channels) {
  NetpbmReader rd(bytes);
  const std::string magic = rd.magic();
  const bool ascii = channels == 1 ? magic == "P2" : magic == "P3";
  const bool binary = channels == 1 ? magic == "P5" : magic == "P6";
  if (!ascii && !binary) throw IoError("unexpected netpbm type " + magic);
  const long w = rd.integer();
  const long h = rd.integer();
  check_dims(w, h);
  const long maxval = rd.integer();
  if (maxval < 1 || maxval > 65535) throw IoError("unsupported maxval");
  std::vector<ImageGrid> out(static_cast<std::size_t>(channels), ImageGrid(h, w));
  const std::size_t count = static_cast<std::size_t>(w * h * channels);
  if (ascii) {
    for (std::size_t i = 0; i < count; ++i) {
      const auto px = static_cast<Eigen::Index>(i / static_cast<std::size_t>(channels));
      out[i % static_cast<std::size_t>(channels)](px / w, px % w) = static_cast<double>(rd.integer());
    }
    return out;
  }
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  const auto raw = rd.binary(count * bytes_per);
  for (std::size_t i = 0; i < count; ++i) {
    double v;
    if (bytes_per == 1) {
      v = static_cast<unsigned char>(raw[i]);
    } else {
      v = static_cast<unsigned char>(raw[2 * i]) * 256.0 + static_cast<unsigned char>(raw[2 * i + 1]);
    }
    const auto px = static_cast<Eigen::Index>(i / static_cast<std::size_t>(channels));
    out[i % static_cast<std::size_t>(channels)](px / w, px % w) = v;
  }
  return out;
}

bool is_png(const std::string& bytes) {
  static constexpr unsigned char kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), kSig, 8) == 0;
}

#ifdef ASBSR_HAVE_PNG
std::vector<ImageGrid> read_png_channels(const fs::path& path, int channels) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.string().c_str())) {
    throw IoError("cannot read PNG " + path.string() + ": " + img.message);
  }
  img.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  std::vector<unsigned char> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&img);
    throw IoError("cannot decode PNG " + path.string() + ": " + img.message);
  }
  const auto h = static_cast<Eigen::Index>(img.height);
  const auto w = static_cast<Eigen::Index>(img.width);
  std::vector<ImageGrid> out(static_cast<std::size_t>(channels), ImageGrid(h, w));
  for (Eigen::Index r = 0; r < h; ++r) {
    for (Eigen::Index c = 0; c < w; ++c) {
      for (int ch = 0; ch < channels; ++ch) {
        out[static_cast<std::size_t>(ch)](r, c) = buf[static_cast<std::size_t>((r * w + c) * channels + ch)];
      }
    }
  }
  return out;
}
#endif

std::vector<ImageGrid> read_channels(const fs::path& path, int channels) {
  const std::string bytes = read_file(path);
  if (is_png(bytes)) {
#ifdef ASBSR_HAVE_PNG
    return read_png_channels(path, channels);
#else
    throw IoError("PNG support not compiled in");
#endif
  }
  return read_netpbm_channels(bytes, channels);
}

unsigned char to_byte(double v) {
  if (!std::isfinite(v)) return 0;
  return static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L));
}

std::vector<std::vector<std::string>> parse_csv_rows(const std::string& text, std::size_t columns,
                                                     const char* what) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != columns) throw IoError(std::string(what) + ": wrong column count in '" + line + "'");
    rows.push_back(std::move(cells));
  }
  return rows;
}

template <typename T>
T parse_cell(const std::string& cell, const char* what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw IoError(std::string(what) + ": cannot parse '" + cell + "'");
  }
  return v;
}

}  // namespace

ImageGrid read_gray(const fs::path& path) { return read_channels(path, 1).front(); }

void write_pgm(const fs::path& path, const ImageGrid& image) {
  std::string bytes = "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
  for (Eigen::Index r = 0; r < image.rows(); ++r) {
    for (Eigen::Index c = 0; c < image.cols(); ++c) bytes.push_back(static_cast<char>(to_byte(image(r, c))));
  }
  write_file_atomic(path, bytes);
}

RgbImage read_rgb(const fs::path& path) {
  auto ch = read_channels(path, 3);
  return {std::move(ch[0]), std::move(ch[1]), std::move(ch[2])};
}

void write_ppm(const fs::path& path, const RgbImage& image) {
  const Eigen::Index h = image.red.rows();
  const Eigen::Index w = image.red.cols();
  if (image.green.rows() != h || image.blue.rows() != h || image.green.cols() != w || image.blue.cols() != w) {
    throw InvalidInput("write_ppm: channel dimensions differ");
  }
  std::string bytes = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  for (Eigen::Index r = 0; r < h; ++r) {
    for (Eigen::Index c = 0; c < w; ++c) {
      bytes.push_back(static_cast<char>(to_byte(image.red(r, c))));
      bytes.push_back(static_cast<char>(to_byte(image.green(r, c))));
      bytes.push_back(static_cast<char>(to_byte(image.blue(r, c))));
    }
  }
  write_file_atomic(path, bytes);
}

BoolField read_pbm(const fs::path& path) {
  NetpbmReader rd(read_file(path));
  const std::string magic = rd.magic();
  if (magic != "P1" && magic != "P4") throw IoError("not a PBM file: " + path.string());
  const long w = rd.integer();
  const long h = rd.integer();
  check_dims(w, h);
  BoolField bits(h, w);
  if (magic == "P1") {
    for (long r = 0; r < h; ++r) {
      for (long c = 0; c < w; ++c) bits(r, c) = rd.bit() == 1;
    }
    return bits;
  }
  const auto stride = static_cast<std::size_t>((w + 7) / 8);
  const auto raw = rd.binary(stride * static_cast<std::size_t>(h));
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      const auto byte = static_cast<unsigned char>(raw[static_cast<std::size_t>(r) * stride + static_cast<std::size_t>(c / 8)]);
      bits(r, c) = ((byte >> (7 - c % 8)) & 1) != 0;
    }
  }
  return bits;
}

void write_pbm(const fs::path& path, const BoolField& bits) {
  const Eigen::Index h = bits.rows();
  const Eigen::Index w = bits.cols();
  std::string bytes = "P4\n" + std::to_string(w) + " " + std::to_string(h) + "\n";
  const auto stride = static_cast<std::size_t>((w + 7) / 8);
  std::string raw(stride * static_cast<std::size_t>(h), '\0');
  for (Eigen::Index r = 0; r < h; ++r) {
    for (Eigen::Index c = 0; c < w; ++c) {
      if (bits(r, c)) raw[static_cast<std::size_t>(r) * stride + static_cast<std::size_t>(c / 8)] |= static_cast<char>(1 << (7 - c % 8));
    }
  }
  write_file_atomic(path, bytes + raw);
}

void write_raw(const fs::path& path, const ImageGrid& image) {
  static_assert(std::endian::native == std::endian::little, "raw sidecar assumes a little-endian host");
  std::string bytes = "ASBSRF64 " + std::to_string(image.rows()) + " " + std::to_string(image.cols()) + "\n";
  const std::size_t header = bytes.size();
  bytes.resize(header + static_cast<std::size_t>(image.size()) * sizeof(double));
  char* out = bytes.data() + header;
  for (Eigen::Index r = 0; r < image.rows(); ++r) {
    for (Eigen::Index c = 0; c < image.cols(); ++c) {
      const double v = image(r, c);
      std::memcpy(out, &v, sizeof v);
      out += sizeof v;
    }
  }
  write_file_atomic(path, bytes);
}

ImageGrid read_raw(const fs::path& path) {
  const std::string bytes = read_file(path);
  const auto nl = bytes.find('\n');
  if (bytes.rfind("ASBSRF64 ", 0) != 0 || nl == std::string::npos) throw IoError("not a raw float sidecar");
  std::istringstream hdr(bytes.substr(9, nl - 9));
  long rows = 0, cols = 0;
  hdr >> rows >> cols;
  check_dims(cols, rows);
  if (bytes.size() != nl + 1 + static_cast<std::size_t>(rows * cols) * sizeof(double)) {
    throw IoError("raw float sidecar has wrong size");
  }
  ImageGrid image(rows, cols);
  const char* in = bytes.data() + nl + 1;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double v;
      std::memcpy(&v, in, sizeof v);
      in += sizeof v;
      image(r, c) = v;
    }
  }
  return image;
}

std::string matrix_csv(const ImageGrid& image) {
  std::string out;
  for (Eigen::Index r = 0; r < image.rows(); ++r) {
    for (Eigen::Index c = 0; c < image.cols(); ++c) {
      if (c) out += ',';
      out += format_number(image(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string samples_csv(const SampleSet& samples) {
  std::string out = "row,col,value\n";
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    const Position p = samples.positions[static_cast<std::size_t>(i)];
    out += std::to_string(p.row) + ',' + std::to_string(p.col) + ',' + format_number(samples.values(i)) + '\n';
  }
  return out;
}

SampleSet parse_samples_csv(const std::string& text, Eigen::Index height, Eigen::Index width) {
  const auto rows = parse_csv_rows(text, 3, "samples csv");
  SampleSet s;
  s.height = height;
  s.width = width;
  s.values.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    s.positions.push_back({parse_cell<int>(rows[i][0], "samples csv"), parse_cell<int>(rows[i][1], "samples csv")});
    s.values(static_cast<Eigen::Index>(i)) = parse_cell<double>(rows[i][2], "samples csv");
  }
  validate_positions(height, width, s.positions);
  return s;
}

std::string positions_csv(const std::vector<Position>& positions) {
  std::string out = "row,col\n";
  for (const Position& p : positions) out += std::to_string(p.row) + ',' + std::to_string(p.col) + '\n';
  return out;
}

std::vector<Position> parse_positions_csv(const std::string& text) {
  std::vector<Position> out;
  for (const auto& row : parse_csv_rows(text, 2, "positions csv")) {
    out.push_back({parse_cell<int>(row[0], "positions csv"), parse_cell<int>(row[1], "positions csv")});
  }
  return out;
}

std::string mask_index_csv(const SpectrumMask& mask) {
  std::string out = "row,col\n";
  for (Eigen::Index r = 0; r < mask.height(); ++r) {
    for (Eigen::Index c = 0; c < mask.width(); ++c) {
      if (mask(r, c)) out += std::to_string(r) + ',' + std::to_string(c) + '\n';
    }
  }
  return out;
}

SpectrumMask parse_mask_index_csv(const std::string& text, Eigen::Index height, Eigen::Index width) {
  BoolField cells = BoolField::Constant(height, width, false);
  for (const Position& p : parse_positions_csv(text)) {
    if (p.row < 0 || p.col < 0 || p.row >= height || p.col >= width) throw IoError("mask csv: index out of range");
    cells(p.row, p.col) = true;
  }
  return SpectrumMask(std::move(cells));
}

std::string report_csv(const ReconReport& report) {
  std::string out = "iteration,rmse_all,rmse_90,residual\n";
  for (std::size_t i = 0; i < report.residual_trace.size(); ++i) {
    out += std::to_string(i + 1) + ',';
    out += (i < report.rmse_all_trace.size() ? format_number(report.rmse_all_trace[i]) : std::string()) + ',';
    out += (i < report.rmse_90_trace.size() ? format_number(report.rmse_90_trace[i]) : std::string()) + ',';
    out += format_number(report.residual_trace[i]) + '\n';
  }
  return out;
}

std::string sparsity_csv(const SparsityReport& report) {
  return "k,n,sparsity,achieved_rmse,target_rmse\n" + std::to_string(report.k) + ',' + std::to_string(report.n) + ',' +
         format_number(report.sparsity) + ',' + format_number(report.achieved_rmse) + ',' +
         format_number(report.target_rmse) + '\n';
}

std::string sinogram_csv(const Sinogram<double>& sino) {
  std::string out = "angle,bin,value\n";
  for (std::size_t a = 0; a < sino.angles_deg.size(); ++a) {
    const std::string angle = format_number(sino.angles_deg[a]) + ',';
    for (Eigen::Index b = 0; b < sino.bins(); ++b) {
      out += angle + std::to_string(b) + ',' + format_number(sino.values(static_cast<Eigen::Index>(a), b)) + '\n';
    }
  }
  return out;
}

Sinogram<double> parse_sinogram_csv(const std::string& text, Eigen::Index image_size) {
  const Eigen::Index bins = radon_bin_count(image_size);
  std::map<double, std::vector<std::pair<Eigen::Index, double>>> by_angle;
  for (const auto& row : parse_csv_rows(text, 3, "sinogram csv")) {
    const auto bin = parse_cell<long>(row[1], "sinogram csv");
    if (bin < 0 || bin >= bins) throw IoError("sinogram csv: bin out of range for image size");
    by_angle[parse_cell<double>(row[0], "sinogram csv")].emplace_back(bin, parse_cell<double>(row[2], "sinogram csv"));
  }
  Sinogram<double> sino;
  sino.image_size = image_size;
  sino.values = ImageGrid::Zero(static_cast<Eigen::Index>(by_angle.size()), bins);
  Eigen::Index a = 0;
  for (const auto& [angle, cells] : by_angle) {
    sino.angles_deg.push_back(angle);
    for (const auto& [bin, value] : cells) sino.values(a, bin) = value;
    ++a;
  }
  return sino;
}

}  // namespace asbsr::io
