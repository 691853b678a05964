#include "asbsr/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "asbsr/random.hpp"

namespace asbsr {

std::string to_string(GridKind kind) {
  switch (kind) {
    case GridKind::kQuasiUniform:
      return "quasi_uniform";
    case GridKind::kJittered:
      return "jittered";
    case GridKind::kPseudorandom:
      return "pseudorandom";
  }
  return "unknown";
}

GridKind parse_grid_kind(std::string_view name) {
  if (name == "quasi_uniform" || name == "quasi-uniform" || name == "quasi") return GridKind::kQuasiUniform;
  if (name == "jittered" || name == "jitter") return GridKind::kJittered;
  if (name == "pseudorandom" || name == "random") return GridKind::kPseudorandom;
  throw InvalidInput("unknown grid kind: " + std::string(name));
}

void validate_positions(Eigen::Index height, Eigen::Index width, const std::vector<Position>& positions) {
  if (positions.empty()) throw InvalidInput("sample positions: at least one position required");
  BoolField seen = BoolField::Constant(height, width, false);
  for (const Position& p : positions) {
    if (p.row < 0 || p.col < 0 || p.row >= height || p.col >= width) {
      throw InvalidInput("sample positions: (" + std::to_string(p.row) + "," + std::to_string(p.col) +
                         ") out of bounds");
    }
    if (seen(p.row, p.col)) {
      throw InvalidInput("sample positions: duplicate (" + std::to_string(p.row) + "," + std::to_string(p.col) + ")");
    }
    seen(p.row, p.col) = true;
  }
}

namespace {

void sort_row_major(std::vector<Position>& positions) {
  std::sort(positions.begin(), positions.end(),
            [](Position a, Position b) { return a.row < b.row || (a.row == b.row && a.col < b.col); });
}

/// Rows and columns of a near-square tiling with at least m cells.
std::pair<Eigen::Index, Eigen::Index> tiling(Eigen::Index height, Eigen::Index width, Eigen::Index m) {
  const double ideal = std::sqrt(static_cast<double>(m) * static_cast<double>(height) / static_cast<double>(width));
  Eigen::Index rows = std::clamp<Eigen::Index>(std::llround(ideal), 1, std::min(height, m));
  Eigen::Index cols = (m + rows - 1) / rows;
  if (cols > width) {
    cols = width;
    rows = (m + cols - 1) / cols;
  }
  return {rows, cols};
}

/// Nearest unoccupied node to the continuous target (y, x); ties go to the
/// lower row-major index. Rings of growing Chebyshev radius are scanned
/// around the rounded node until no farther ring can hold a closer node.
Position nearest_free(const BoolField& occupied, double y, double x, Position start) {
  const auto height = static_cast<int>(occupied.rows());
  const auto width = static_cast<int>(occupied.cols());
  Position best{-1, -1};
  double best_d2 = std::numeric_limits<double>::infinity();
  const int max_ring = std::max(height, width);
  for (int ring = 1; ring <= max_ring; ++ring) {
    for (int r = start.row - ring; r <= start.row + ring; ++r) {
      if (r < 0 || r >= height) continue;
      const bool edge_row = r == start.row - ring || r == start.row + ring;
      const int step = edge_row ? 1 : 2 * ring;
      for (int c = start.col - ring; c <= start.col + ring; c += step) {
        if (c < 0 || c >= width || occupied(r, c)) continue;
        const double d2 = (r - y) * (r - y) + (c - x) * (c - x);
        const bool closer = d2 < best_d2 || (d2 == best_d2 && (r < best.row || (r == best.row && c < best.col)));
        if (closer) {
          best = {r, c};
          best_d2 = d2;
        }
      }
    }
    if (best.row >= 0 && std::sqrt(best_d2) < ring + 0.5) break;
  }
  if (best.row < 0) throw InvalidInput("make_grid: no free node left");
  return best;
}

std::vector<Position> quasi_uniform_grid(Eigen::Index height, Eigen::Index width, Eigen::Index m) {
  const Eigen::Index rows = tiling(height, width, m).first;
  BoolField occupied = BoolField::Constant(height, width, false);
  std::vector<Position> out;
  out.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index in_row = (i + 1) * m / rows - i * m / rows;
    const double y = (static_cast<double>(i) + 0.5) * static_cast<double>(height) / static_cast<double>(rows) - 0.5;
    for (Eigen::Index j = 0; j < in_row; ++j) {
      const double x =
          (static_cast<double>(j) + 0.5) * static_cast<double>(width) / static_cast<double>(in_row) - 0.5;
      Position p{static_cast<int>(std::clamp<double>(std::floor(y + 0.5), 0, static_cast<double>(height - 1))),
                 static_cast<int>(std::clamp<double>(std::floor(x + 0.5), 0, static_cast<double>(width - 1)))};
      if (occupied(p.row, p.col)) p = nearest_free(occupied, y, x, p);
      occupied(p.row, p.col) = true;
      out.push_back(p);
    }
  }
  return out;
}

std::vector<Position> jittered_grid(Eigen::Index height, Eigen::Index width, Eigen::Index m, std::uint64_t seed) {
  const auto [rows, cols] = tiling(height, width, m);
  std::vector<Eigen::Index> cells(static_cast<std::size_t>(rows * cols));
  std::iota(cells.begin(), cells.end(), Eigen::Index{0});
  if (rows * cols > m) {
    Rng drop(seed, stream::kJitterDrop);
    drop.shuffle(cells);
    cells.resize(static_cast<std::size_t>(m));
    std::sort(cells.begin(), cells.end());
  }
  Rng rng(seed, stream::kJitter);
  std::vector<Position> out;
  out.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index cell : cells) {
    const Eigen::Index i = cell / cols;
    const Eigen::Index j = cell % cols;
    const auto r0 = static_cast<int>(i * height / rows);
    const auto r1 = static_cast<int>((i + 1) * height / rows);
    const auto c0 = static_cast<int>(j * width / cols);
    const auto c1 = static_cast<int>((j + 1) * width / cols);
    const int r = rng.range(r0, r1);
    const int c = rng.range(c0, c1);
    out.push_back({r, c});
  }
  return out;
}

std::vector<Position> pseudorandom_grid(Eigen::Index height, Eigen::Index width, Eigen::Index m, std::uint64_t seed) {
  const Eigen::Index n = height * width;
  std::vector<Eigen::Index> nodes(static_cast<std::size_t>(n));
  std::iota(nodes.begin(), nodes.end(), Eigen::Index{0});
  Rng rng(seed, stream::kPseudorandom);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto j = i + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(j)]);
  }
  std::vector<Position> out;
  out.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index node = nodes[static_cast<std::size_t>(i)];
    out.push_back({static_cast<int>(node / width), static_cast<int>(node % width)});
  }
  return out;
}

}  // namespace

std::vector<Position> make_grid(GridKind kind, Eigen::Index height, Eigen::Index width, Eigen::Index m,
                                std::uint64_t seed) {
  if (height < 1 || width < 1) throw InvalidInput("make_grid: empty grid");
  if (m < 1 || m > height * width) throw InvalidInput("make_grid: m must lie in [1, height*width]");
  std::vector<Position> out;
  switch (kind) {
    case GridKind::kQuasiUniform:
      out = quasi_uniform_grid(height, width, m);
      break;
    case GridKind::kJittered:
      out = jittered_grid(height, width, m, seed);
      break;
    case GridKind::kPseudorandom:
      out = pseudorandom_grid(height, width, m, seed);
      break;
  }
  sort_row_major(out);
  return out;
}

}  // namespace asbsr
