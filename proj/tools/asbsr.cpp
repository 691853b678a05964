// asbsr command-line front end. Every subcommand prints one key=value summary
// line on stdout; diagnostics go to stderr.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "asbsr/applications.hpp"
#include "asbsr/cs_model.hpp"
#include "asbsr/io.hpp"
#include "asbsr/random.hpp"
#include "asbsr/reconstruction.hpp"
#include "asbsr/sampling.hpp"
#include "asbsr/spectrum_analysis.hpp"

namespace {

using namespace asbsr;
namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3, kInfeasible = 4, kNumerical = 5 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Summary {
 public:
  explicit Summary(const std::string& command) { line_ = "command=" + command; }
  Summary& add(const std::string& key, const std::string& value) {
    line_ += ' ' + key + '=' + value;
    return *this;
  }
  Summary& add(const std::string& key, double value) { return add(key, io::format_number(value)); }
  Summary& add(const std::string& key, long long value) { return add(key, std::to_string(value)); }
  Summary& add(const std::string& key, int value) { return add(key, std::to_string(value)); }
  void print() const { std::cout << line_ << '\n'; }

 private:
  std::string line_;
};

bool has_extension(const fs::path& p, const char* ext) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

ImageGrid load_gray(const fs::path& p) { return has_extension(p, ".raw") ? io::read_raw(p) : io::read_gray(p); }

void save_gray(const fs::path& p, const ImageGrid& image) {
  if (has_extension(p, ".raw")) {
    io::write_raw(p, image);
  } else if (has_extension(p, ".csv")) {
    io::write_file_atomic(p, io::matrix_csv(image));
  } else {
    io::write_pgm(p, image);
  }
}

SpectrumMask load_mask(const fs::path& p, Eigen::Index h, Eigen::Index w) {
  if (has_extension(p, ".csv")) {
    if (h < 1 || w < 1) throw UsageError("a CSV mask needs --height and --width");
    return io::parse_mask_index_csv(io::read_file(p), h, w);
  }
  return SpectrumMask(io::read_pbm(p));
}

void save_mask(const fs::path& p, const BoolField& cells) {
  if (has_extension(p, ".csv")) {
    io::write_file_atomic(p, io::mask_index_csv(SpectrumMask(cells)));
  } else {
    io::write_pbm(p, cells);
  }
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed, const char* why) {
  if (!seed) throw UsageError(std::string("--seed is required: ") + why);
  return *seed;
}

// Shape options shared by every subcommand that builds an EC-zone mask.
struct ShapeArgs {
  std::string kind = "pie";
  double area = 0.25;
  double aspect = 1.0;
  double orientation = 0.0;
  double exponent = 3.0;
  double extent = 90.0;
  std::string file;

  void attach(CLI::App* app, const char* area_help = "EC-zone area fraction") {
    app->add_option("--shape", kind, "rectangle|triangle|pie|oval|superellipse")->capture_default_str();
    app->add_option("--area", area, area_help)->capture_default_str();
    app->add_option("--aspect", aspect, "vertical over horizontal extent")->capture_default_str();
    app->add_option("--orientation", orientation, "rotation in degrees")->capture_default_str();
    app->add_option("--exponent", exponent, "superellipse exponent")->capture_default_str();
    app->add_option("--extent", extent, "pie sector angle in degrees")->capture_default_str();
    app->add_option("--shape-file", file, "key=value shape description (overrides the flags)");
  }

  ShapeSpec spec() const {
    if (!file.empty()) return shape_from_key_value(io::read_file(file));
    ShapeSpec s;
    s.kind = parse_shape_kind(kind);
    s.area_fraction = area;
    s.aspect_ratio = aspect;
    s.orientation_deg = orientation;
    s.superellipse_exponent = exponent;
    s.sector_extent_deg = extent;
    s.validate();
    return s;
  }
};

struct IterArgs {
  int iterations = 500;
  double stop_rmse = -1.0;
  int plateau_window = 50;
  double plateau_eps = 0.0;

  void attach(CLI::App* app, int default_iterations) {
    iterations = default_iterations;
    app->add_option("--iters", iterations, "maximum iterations")->capture_default_str();
    app->add_option("--stop-rmse", stop_rmse, "stop once rmse_all against --ref reaches this level");
    app->add_option("--plateau-window", plateau_window, "iterations compared by the plateau rule")
        ->capture_default_str();
    app->add_option("--plateau-eps", plateau_eps, "relative improvement below which to stop (0 disables)")
        ->capture_default_str();
  }

  ReconOptions options() const {
    ReconOptions o;
    o.max_iterations = iterations;
    if (stop_rmse >= 0.0) o.stop_rmse = stop_rmse;
    o.plateau_window = plateau_window;
    o.plateau_epsilon = plateau_eps;
    o.validate();
    return o;
  }
};

void add_report(Summary& s, const ReconReport& r, const std::string& prefix = "") {
  s.add(prefix + "iterations", r.iterations_run).add(prefix + "stop", to_string(r.stop_reason));
  if (!r.rmse_all_trace.empty()) {
    s.add(prefix + "rmse_all", r.rmse_all_trace.back()).add(prefix + "rmse_90", r.rmse_90_trace.back());
    s.add(prefix + "psnr_db", psnr_from_rmse(r.rmse_all_trace.back()));
  }
  if (!r.residual_trace.empty()) s.add(prefix + "residual", r.residual_trace.back());
}

void maybe_write_trace(const std::string& path, const ReconReport& r) {
  if (!path.empty()) io::write_file_atomic(path, io::report_csv(r));
}

// analyze --------------------------------------------------------------------

struct AnalyzeArgs {
  std::string in, out, mask_out;
  double target_rmse = 0.0;
};

void run_analyze(const AnalyzeArgs& a) {
  const SparsityReport r = sparse_spectrum(load_gray(a.in), a.target_rmse);
  io::write_file_atomic(a.out, io::sparsity_csv(r));
  if (!a.mask_out.empty()) save_mask(a.mask_out, r.ec_mask.cells());
  Summary("analyze")
      .add("k", static_cast<long long>(r.k))
      .add("n", static_cast<long long>(r.n))
      .add("sparsity", r.sparsity)
      .add("achieved_rmse", r.achieved_rmse)
      .print();
}

// mask -------------------------------------------------------------------------

struct MaskArgs {
  ShapeArgs shape;
  Eigen::Index height = 0, width = 0;
  std::string out, spec_out;
};

void run_mask(const MaskArgs& a) {
  const ShapeSpec spec = a.shape.spec();
  const SpectrumMask m = make_shape_mask(spec, a.height, a.width);
  save_mask(a.out, m.cells());
  if (!a.spec_out.empty()) io::write_file_atomic(a.spec_out, to_key_value(spec));
  Summary("mask").add("count", static_cast<long long>(m.count())).add("fraction", m.fraction()).print();
}

// sample -----------------------------------------------------------------------

struct SampleArgs {
  std::string in, out, grid = "jittered", prefiltered_out;
  double rate = -1.0;
  long long count = -1;
  std::optional<std::uint64_t> seed;
  bool prefilter = false;
  ShapeArgs shape;
};

void run_sample(const SampleArgs& a) {
  ImageGrid img = load_gray(a.in);
  const GridKind kind = parse_grid_kind(a.grid);
  if ((a.rate >= 0.0) == (a.count >= 0)) throw UsageError("give exactly one of --rate and --count");
  const auto n = static_cast<double>(img.size());
  const auto m = a.count >= 0 ? static_cast<Eigen::Index>(a.count) : static_cast<Eigen::Index>(std::llround(a.rate * n));
  const std::uint64_t seed = kind == GridKind::kQuasiUniform ? a.seed.value_or(0) : require_seed(a.seed, "grid is random");
  if (a.prefilter) img = prefilter(img, make_shape_mask(a.shape.spec(), img.rows(), img.cols()));
  const SampleSet s = take_samples(img, make_grid(kind, img.rows(), img.cols(), m, seed));
  io::write_file_atomic(a.out, io::samples_csv(s));
  if (!a.prefiltered_out.empty()) save_gray(a.prefiltered_out, img);
  Summary("sample")
      .add("height", static_cast<long long>(img.rows()))
      .add("width", static_cast<long long>(img.cols()))
      .add("samples", static_cast<long long>(s.size()))
      .add("rate", s.rate())
      .print();
}

// reconstruct ------------------------------------------------------------------

struct ReconstructArgs {
  std::string in, mask, ref, out, raw_out, trace;
  Eigen::Index height = 0, width = 0;
  ShapeArgs shape;
  IterArgs iter;
};

void run_reconstruct(const ReconstructArgs& a) {
  std::optional<ImageGrid> ref;
  if (!a.ref.empty()) ref = load_gray(a.ref);
  Eigen::Index h = a.height;
  Eigen::Index w = a.width;
  if ((h < 1 || w < 1) && ref) {
    h = ref->rows();
    w = ref->cols();
  }
  std::optional<SpectrumMask> mask;
  if (!a.mask.empty()) {
    mask = load_mask(a.mask, h, w);
    h = mask->height();
    w = mask->width();
  }
  if (h < 1 || w < 1) throw UsageError("image size unknown: give --mask, --ref, or --height and --width");
  if (!mask) mask = make_shape_mask(a.shape.spec(), h, w);
  const SampleSet samples = io::parse_samples_csv(io::read_file(a.in), h, w);
  const auto rec = reconstruct_bs(samples, *mask, ref ? &*ref : nullptr, a.iter.options());
  if (!rec.image.allFinite()) throw NumericalFailure("reconstruction diverged");
  save_gray(a.out, rec.image);
  if (!a.raw_out.empty()) io::write_raw(a.raw_out, rec.image);
  maybe_write_trace(a.trace, rec.report);
  Summary s("reconstruct");
  s.add("samples", static_cast<long long>(samples.size())).add("mask_fraction", mask->fraction());
  add_report(s, rec.report);
  s.print();
}

// demosaic ---------------------------------------------------------------------

struct DemosaicArgs {
  std::string in, out, method = "bs", arrangement = "bayer", trace;
  std::optional<std::uint64_t> seed;
  ShapeArgs shape;
  IterArgs iter;
};

void run_demosaic(const DemosaicArgs& a) {
  const RgbImage rgb = io::read_rgb(a.in);
  const Arrangement arr = parse_arrangement(a.arrangement);
  const std::uint64_t seed =
      arr == Arrangement::kSemiRandom ? require_seed(a.seed, "semi-random arrangement") : a.seed.value_or(0);
  const MosaicImage m = mosaic(rgb, arr, seed);
  Summary s("demosaic");
  s.add("arrangement", to_string(arr)).add("method", a.method);
  RgbImage out;
  if (a.method == "bilinear") {
    out = demosaic_bilinear(m);
  } else if (a.method == "bs") {
    const DemosaicResult r = demosaic_bs(m, a.shape.spec(), a.iter.options(), &rgb);
    out = r.image;
    s.add("iterations", std::max({r.red.iterations_run, r.green.iterations_run, r.blue.iterations_run}));
    maybe_write_trace(a.trace, r.green);
  } else {
    throw UsageError("--method must be bs or bilinear");
  }
  io::write_ppm(a.out, out);
  s.add("total_rmse", total_rmse(rgb, out)).print();
}

// inpaint ----------------------------------------------------------------------

struct InpaintArgs {
  std::string in, occlusion, ref, out, raw_out, trace;
  double occlude_fraction = -1.0;
  int square = 3;
  std::optional<std::uint64_t> seed;
  ShapeArgs shape;
  IterArgs iter;
};

void run_inpaint(const InpaintArgs& a) {
  ImageGrid img = load_gray(a.in);
  std::optional<ImageGrid> ref;
  if (!a.ref.empty()) ref = load_gray(a.ref);
  OcclusionMask observed;
  if (!a.occlusion.empty()) {
    // PBM set bits mark occluded pixels.
    observed = !io::read_pbm(a.occlusion);
  } else if (a.occlude_fraction >= 0.0) {
    observed = random_square_occlusion(img.rows(), img.cols(), a.occlude_fraction, a.square,
                                       require_seed(a.seed, "random occlusion"));
    if (!ref) ref = img;
    img = observed.select(img, 0.0);
  } else {
    observed = occlusion_from_zero_level(img);
  }
  const auto rec = inpaint(img, observed, a.shape.spec(), a.iter.options(), ref ? &*ref : nullptr);
  save_gray(a.out, rec.image);
  if (!a.raw_out.empty()) io::write_raw(a.raw_out, rec.image);
  maybe_write_trace(a.trace, rec.report);
  Summary s("inpaint");
  s.add("occluded_fraction", 1.0 - static_cast<double>(observed.count()) / static_cast<double>(observed.size()));
  add_report(s, rec.report);
  s.print();
}

// radon-recover ----------------------------------------------------------------

struct RadonArgs {
  std::string in, out, image_out, trace;
  Eigen::Index image_size = 0;
  int angles = 180;
  double missing = -1.0;
  int decimate = 0;
  double support_radius = -1.0;
  double support_threshold = -1.0;
  std::optional<std::uint64_t> seed;
  IterArgs iter;
};

void run_radon(const RadonArgs& a) {
  Sinogram<double> sino;
  std::optional<Sinogram<double>> reference;
  if (has_extension(a.in, ".csv")) {
    if (a.image_size < 1) throw UsageError("a sinogram CSV needs --image-size");
    sino = io::parse_sinogram_csv(io::read_file(a.in), a.image_size);
  } else {
    std::vector<double> deg;
    for (int i = 0; i < a.angles; ++i) deg.push_back(180.0 * i / a.angles);
    sino = radon_forward(load_gray(a.in), deg);
    reference = sino;
  }
  BoolField known = BoolField::Constant(sino.values.rows(), sino.values.cols(), true);
  if (a.missing >= 0.0 && a.decimate > 0) throw UsageError("--missing and --decimate are exclusive");
  if (a.missing >= 0.0) {
    if (a.missing >= 1.0) throw InvalidInput("--missing must be in [0, 1)");
    Rng rng(require_seed(a.seed, "random sinogram thinning"), stream::kSinogramSamples, 0);
    for (Eigen::Index c = 0; c < known.cols(); ++c) {
      for (Eigen::Index r = 0; r < known.rows(); ++r) known(r, c) = rng.uniform() >= a.missing;
    }
  } else if (a.decimate > 0) {
    for (Eigen::Index r = 0; r < known.rows(); ++r) known.row(r).setConstant(r % (a.decimate + 1) == 0);
  } else if (!reference) {
    // Zero cells of a loaded sinogram are the missing ones.
    known = sino.values.array() != 0.0;
  }
  sino.values = known.select(sino.values, 0.0);
  const Eigen::Index n = sino.image_size;
  SupportMask support;
  if (a.support_radius > 0.0) {
    support = circular_support(n, n, a.support_radius);
  } else if (a.support_threshold >= 0.0) {
    support = support_from_backprojection(sino, a.support_threshold);
  } else {
    support = circular_support(n, n, 0.5);
  }
  const auto rec = recover_projections(sino, known, support, a.iter.options(), reference ? &*reference : nullptr);
  io::write_file_atomic(a.out, io::sinogram_csv(rec.sinogram));
  if (!a.image_out.empty()) save_gray(a.image_out, rec.image);
  maybe_write_trace(a.trace, rec.report);
  Summary s("radon-recover");
  s.add("known_fraction", static_cast<double>(known.count()) / static_cast<double>(known.size()));
  s.add("support_fraction", static_cast<double>(support.count()) / static_cast<double>(support.size()));
  add_report(s, rec.report);
  if (!rec.report.rmse_all_trace.empty()) {
    s.add("reduction", rec.report.rmse_all_trace.back() / rec.report.rmse_all_trace.front());
  }
  s.print();
}

// fourier-recover --------------------------------------------------------------

struct FourierArgs {
  std::string in, out, raw_out, trace;
  double rate = -1.0;
  double support_radius = 0.35;
  double spectral_radius = 0.5;
  std::optional<std::uint64_t> seed;
  IterArgs iter;
};

void run_fourier(const FourierArgs& a) {
  const ImageGrid full = load_gray(a.in);
  const Eigen::Index h = full.rows();
  const Eigen::Index w = full.cols();
  const SupportMask support = circular_support(h, w, a.support_radius);
  const ImageGrid img = support.select(full, 0.0);
  const SpectrumMask disc = circular_spectral_mask(h, w, a.spectral_radius);
  const double rate = a.rate >= 0.0 ? a.rate
                                    : std::numbers::pi * a.support_radius * a.support_radius * std::numbers::pi / 4.0;
  std::vector<Position> inside;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (disc(r, c)) inside.push_back({r, c});
    }
  }
  const auto m = static_cast<std::size_t>(std::llround(rate * static_cast<double>(h * w)));
  if (m < 1 || m > inside.size()) throw Infeasible("requested spectral samples do not fit inside the spectral mask");
  Rng rng(require_seed(a.seed, "random spectral samples"), stream::kSpectrumSamples, 0);
  rng.shuffle(inside);
  const ComplexSpectrum spectrum = dft2(img, Direction::kForward);
  SpectrumSamples known{h, w, {inside.begin(), inside.begin() + static_cast<std::ptrdiff_t>(m)}, {}};
  for (const Position& p : known.positions) known.values.push_back(spectrum(p.row, p.col));
  const auto rec = reconstruct_from_sparse_spectrum(known, support, disc, a.iter.options(), &img);
  save_gray(a.out, rec.image);
  if (!a.raw_out.empty()) io::write_raw(a.raw_out, rec.image);
  maybe_write_trace(a.trace, rec.report);
  Summary s("fourier-recover");
  s.add("spectral_samples", static_cast<long long>(m)).add("rate", static_cast<double>(m) / static_cast<double>(h * w));
  add_report(s, rec.report);
  s.print();
}

// phase-retrieve ---------------------------------------------------------------

struct PhaseArgs {
  std::string in, occlusion, out, occluded_out, trace;
  double occlude_fraction = 0.2;
  int square = 3;
  int stage1_iters = 2000;
  std::optional<std::uint64_t> seed;
  ShapeArgs shape;
  IterArgs iter;
};

void run_phase(const PhaseArgs& a) {
  const ImageGrid img = load_gray(a.in);
  OcclusionMask observed;
  if (!a.occlusion.empty()) {
    observed = !io::read_pbm(a.occlusion);
  } else {
    observed = random_square_occlusion(img.rows(), img.cols(), a.occlude_fraction, a.square,
                                       require_seed(a.seed, "random occlusion"));
  }
  const ImageGrid occluded = observed.select(img, 0.0);
  const ImageGrid modulus = dft2(occluded, Direction::kForward).cwiseAbs();
  PhaseRetrievalOptions opts;
  opts.stage1.max_iterations = a.stage1_iters;
  opts.stage2 = a.iter.options();
  const PhaseRetrieval r = phase_retrieve(modulus, observed, a.shape.spec(), opts, &img);
  save_gray(a.out, r.image);
  if (!a.occluded_out.empty()) save_gray(a.occluded_out, r.occluded);
  maybe_write_trace(a.trace, r.stage2);
  const double range = img.maxCoeff() - img.minCoeff();
  Summary s("phase-retrieve");
  s.add("stage1_iterations", r.stage1.iterations_run).add("modulus_residual", r.modulus_residual);
  add_report(s, r.stage2, "stage2_");
  if (!r.stage2.rmse_all_trace.empty() && range > 0.0) s.add("rmse_share_of_range", r.stage2.rmse_all_trace.back() / range);
  s.print();
}

// cs-curve / cs-mc -------------------------------------------------------------

struct CurveArgs {
  std::string base = "natural", out;
  double smin = 1e-3, smax = 0.5;
  int steps = 50;
};

void run_curve(const CurveArgs& a) {
  const LogBase base = parse_log_base(a.base);
  const auto curve = min_redundancy_curve(a.smin, a.smax, a.steps, base);
  std::string csv = "sparsity,min_redundancy\n";
  for (const CurvePoint& p : curve) csv += io::format_number(p.sparsity) + ',' + io::format_number(p.min_redundancy) + '\n';
  io::write_file_atomic(a.out, csv);
  Summary("cs-curve")
      .add("base", to_string(base))
      .add("rows", static_cast<int>(curve.size()))
      .add("r_at_0.1", min_redundancy(0.1, base).value)
      .print();
}

struct McArgs {
  std::string out;
  std::vector<long long> sizes{256};
  std::vector<double> rates{0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
  long long k = 1;
  int trials = 1000;
  int threads = 1;
  std::optional<std::uint64_t> seed;
};

void run_mc(const McArgs& a) {
  const std::uint64_t seed = require_seed(a.seed, "Monte-Carlo trials");
  std::string csv = "n,k,rate,m,trials,errors,probability\n";
  int rows = 0;
  for (long long n : a.sizes) {
    for (double rate : a.rates) {
      McExperiment e;
      e.n = n;
      e.k = a.k;
      e.rate = rate;
      e.trials = a.trials;
      e.seed = seed;
      const McResult r = freq_error_probability(e, a.threads);
      csv += std::to_string(n) + ',' + std::to_string(a.k) + ',' + io::format_number(rate) + ',' +
             std::to_string(r.m) + ',' + std::to_string(r.trials) + ',' + std::to_string(r.errors) + ',' +
             io::format_number(r.probability) + '\n';
      ++rows;
    }
  }
  io::write_file_atomic(a.out, csv);
  Summary("cs-mc").add("rows", rows).add("trials", a.trials).print();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arbitrary-sampling bounded-spectrum reconstruction toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "asbsr 1.0");

  AnalyzeArgs analyze;
  auto* c_analyze = app.add_subcommand("analyze", "sparse DCT spectrum needed for a target RMSE");
  c_analyze->add_option("--in", analyze.in, "gray image")->required();
  c_analyze->add_option("--target-rmse", analyze.target_rmse, "allowed reconstruction RMSE")->required();
  c_analyze->add_option("--out", analyze.out, "report CSV")->required();
  c_analyze->add_option("--mask-out", analyze.mask_out, "EC-zone mask (PBM or CSV)");

  MaskArgs mask;
  auto* c_mask = app.add_subcommand("mask", "calibrated EC-zone shape mask");
  mask.shape.attach(c_mask);
  c_mask->add_option("--height", mask.height)->required();
  c_mask->add_option("--width", mask.width)->required();
  c_mask->add_option("--out", mask.out, "mask (PBM or CSV)")->required();
  c_mask->add_option("--spec-out", mask.spec_out, "key=value shape description");

  SampleArgs sample;
  auto* c_sample = app.add_subcommand("sample", "take samples of an image on a sampling grid");
  c_sample->add_option("--in", sample.in, "gray image")->required();
  c_sample->add_option("--grid", sample.grid, "quasi_uniform|jittered|pseudorandom")->capture_default_str();
  c_sample->add_option("--rate", sample.rate, "fraction of pixels to sample");
  c_sample->add_option("--count", sample.count, "number of samples");
  c_sample->add_option("--seed", sample.seed, "random seed");
  c_sample->add_flag("--prefilter", sample.prefilter, "bound the image spectrum to the shape before sampling");
  c_sample->add_option("--prefiltered-out", sample.prefiltered_out, "write the (prefiltered) image");
  c_sample->add_option("--out", sample.out, "samples CSV")->required();
  sample.shape.attach(c_sample, "prefilter area fraction");

  ReconstructArgs recon;
  auto* c_recon = app.add_subcommand("reconstruct", "bounded-spectrum reconstruction from samples");
  c_recon->add_option("--in", recon.in, "samples CSV")->required();
  c_recon->add_option("--mask", recon.mask, "EC-zone mask (PBM or CSV); otherwise built from the shape flags");
  c_recon->add_option("--ref", recon.ref, "reference image for error traces");
  c_recon->add_option("--height", recon.height);
  c_recon->add_option("--width", recon.width);
  c_recon->add_option("--out", recon.out, "reconstructed image")->required();
  c_recon->add_option("--raw-out", recon.raw_out, "lossless float sidecar");
  c_recon->add_option("--trace", recon.trace, "per-iteration CSV");
  recon.shape.attach(c_recon);
  recon.iter.attach(c_recon, 500);

  DemosaicArgs dem;
  auto* c_dem = app.add_subcommand("demosaic", "mosaic a colour image and demosaic it");
  c_dem->add_option("--in", dem.in, "colour image")->required();
  c_dem->add_option("--out", dem.out, "demosaiced PPM")->required();
  c_dem->add_option("--method", dem.method, "bs|bilinear")->capture_default_str();
  c_dem->add_option("--arrangement", dem.arrangement, "bayer|semi_random")->capture_default_str();
  c_dem->add_option("--seed", dem.seed, "random seed");
  c_dem->add_option("--trace", dem.trace, "green-channel per-iteration CSV");
  dem.shape.attach(c_dem, "ignored: each channel uses its own pixel density");
  dem.iter.attach(c_dem, 500);

  InpaintArgs inp;
  auto* c_inp = app.add_subcommand("inpaint", "fill occluded pixels");
  c_inp->add_option("--in", inp.in, "gray image")->required();
  c_inp->add_option("--occlusion", inp.occlusion, "PBM whose set bits are occluded (default: zero pixels)");
  c_inp->add_option("--occlude", inp.occlude_fraction, "occlude this fraction with random squares");
  c_inp->add_option("--square", inp.square, "side of the random squares")->capture_default_str();
  c_inp->add_option("--seed", inp.seed, "random seed");
  c_inp->add_option("--ref", inp.ref, "reference image for error traces");
  c_inp->add_option("--out", inp.out, "in-painted image")->required();
  c_inp->add_option("--raw-out", inp.raw_out, "lossless float sidecar");
  c_inp->add_option("--trace", inp.trace, "per-iteration CSV");
  inp.shape.attach(c_inp);
  inp.iter.attach(c_inp, 2000);

  RadonArgs radon;
  auto* c_radon = app.add_subcommand("radon-recover", "recover missing projection samples");
  c_radon->add_option("--in", radon.in, "square image or sinogram CSV")->required();
  c_radon->add_option("--image-size", radon.image_size, "image side for a sinogram CSV");
  c_radon->add_option("--angles", radon.angles, "projection count for an image")->capture_default_str();
  c_radon->add_option("--missing", radon.missing, "drop this fraction of sinogram cells at random");
  c_radon->add_option("--decimate", radon.decimate, "drop d projections after each kept one");
  c_radon->add_option("--support-radius", radon.support_radius, "circular support radius (image sides)");
  c_radon->add_option("--support-threshold", radon.support_threshold, "support from back-projection level");
  c_radon->add_option("--seed", radon.seed, "random seed");
  c_radon->add_option("--out", radon.out, "recovered sinogram CSV")->required();
  c_radon->add_option("--image-out", radon.image_out, "final image estimate");
  c_radon->add_option("--trace", radon.trace, "per-iteration CSV");
  radon.iter.attach(c_radon, 300);

  FourierArgs four;
  auto* c_four = app.add_subcommand("fourier-recover", "support-limited image from sparse DFT samples");
  c_four->add_option("--in", four.in, "gray image (cut to the support)")->required();
  c_four->add_option("--rate", four.rate, "spectral samples per pixel (default pi r^2 pi/4)");
  c_four->add_option("--support-radius", four.support_radius)->capture_default_str();
  c_four->add_option("--spectral-radius", four.spectral_radius)->capture_default_str();
  c_four->add_option("--seed", four.seed, "random seed");
  c_four->add_option("--out", four.out, "recovered image")->required();
  c_four->add_option("--raw-out", four.raw_out, "lossless float sidecar");
  c_four->add_option("--trace", four.trace, "per-iteration CSV");
  four.iter.attach(c_four, 200);

  PhaseArgs phase;
  auto* c_phase = app.add_subcommand("phase-retrieve", "image from the DFT modulus of an occluded copy");
  c_phase->add_option("--in", phase.in, "gray image")->required();
  c_phase->add_option("--occlusion", phase.occlusion, "PBM whose set bits are occluded");
  c_phase->add_option("--occlude", phase.occlude_fraction, "random-square occlusion fraction")->capture_default_str();
  c_phase->add_option("--square", phase.square)->capture_default_str();
  c_phase->add_option("--stage1-iters", phase.stage1_iters)->capture_default_str();
  c_phase->add_option("--seed", phase.seed, "random seed");
  c_phase->add_option("--out", phase.out, "recovered image")->required();
  c_phase->add_option("--occluded-out", phase.occluded_out, "stage-1 estimate");
  c_phase->add_option("--trace", phase.trace, "stage-2 per-iteration CSV");
  phase.shape.attach(c_phase);
  phase.iter.attach(c_phase, 5000);

  CurveArgs curve;
  auto* c_curve = app.add_subcommand("cs-curve", "minimum redundancy versus sparsity");
  c_curve->add_option("--base", curve.base, "natural|base10|base2")->capture_default_str();
  c_curve->add_option("--sparsity-min", curve.smin)->capture_default_str();
  c_curve->add_option("--sparsity-max", curve.smax)->capture_default_str();
  c_curve->add_option("--steps", curve.steps)->capture_default_str();
  c_curve->add_option("--out", curve.out, "CSV")->required();

  McArgs mc;
  auto* c_mc = app.add_subcommand("cs-mc", "frequency identification error probability");
  c_mc->add_option("--n", mc.sizes, "signal lengths")->capture_default_str();
  c_mc->add_option("--rates", mc.rates, "sampling rates")->capture_default_str();
  c_mc->add_option("--k", mc.k)->capture_default_str();
  c_mc->add_option("--trials", mc.trials)->capture_default_str();
  c_mc->add_option("--threads", mc.threads)->capture_default_str();
  c_mc->add_option("--seed", mc.seed, "random seed");
  c_mc->add_option("--out", mc.out, "CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c_analyze) run_analyze(analyze);
    if (*c_mask) run_mask(mask);
    if (*c_sample) run_sample(sample);
    if (*c_recon) run_reconstruct(recon);
    if (*c_dem) run_demosaic(dem);
    if (*c_inp) run_inpaint(inp);
    if (*c_radon) run_radon(radon);
    if (*c_four) run_fourier(four);
    if (*c_phase) run_phase(phase);
    if (*c_curve) run_curve(curve);
    if (*c_mc) run_mc(mc);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
