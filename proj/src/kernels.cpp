#include "rfront/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "rfront/terms.hpp"

namespace rfront {

namespace kernels {

namespace {

// Force on node i from node j; the only place the pair law is written.
inline void accumulate(const Vec2& pi, const Vec2& pj, std::size_t i, std::size_t j, double k2,
                       Vec2& acc) {
  double dx = pi.x - pj.x;
  double dy = pi.y - pj.y;
  double d2 = dx * dx + dy * dy;
  if (d2 < 1e-24) {
    dx = i < j ? -1e-6 : 1e-6;
    dy = 0.0;
    d2 = 1e-12;
  }
  // k^2/d along the unit vector = k^2 * delta / d^2
  const double f = k2 / d2;
  acc.x += dx * f;
  acc.y += dy * f;
}

inline Vec2 repulse_one(std::span<const Vec2> pos, double k2, std::size_t i) {
  Vec2 acc;
  const Vec2 pi = pos[i];
  for (std::size_t j = 0; j < pos.size(); ++j)
    if (j != i) accumulate(pi, pos[j], i, j, k2, acc);
  return acc;
}

struct Grid {
  double cell = 1.0;
  double min_x = 0.0, min_y = 0.0;
  std::int64_t nx = 1, ny = 1;
  std::vector<std::size_t> start;  // CSR over cells
  std::vector<std::size_t> items;  // node ids, ascending within a cell

  Grid(std::span<const Vec2> pos, double cell_size) : cell(cell_size) {
    if (pos.empty()) return;
    double max_x = pos[0].x, max_y = pos[0].y;
    min_x = pos[0].x;
    min_y = pos[0].y;
    for (const auto& p : pos) {
      min_x = std::min(min_x, p.x);
      min_y = std::min(min_y, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
    // Bound the cell count; very spread layouts fall back to coarser cells.
    const double span_cells = std::max(max_x - min_x, max_y - min_y) / cell;
    const double limit = 4096.0;
    if (span_cells > limit) cell = std::max(max_x - min_x, max_y - min_y) / limit;
    nx = static_cast<std::int64_t>((max_x - min_x) / cell) + 1;
    ny = static_cast<std::int64_t>((max_y - min_y) / cell) + 1;
    std::vector<std::size_t> count(static_cast<std::size_t>(nx * ny) + 1, 0);
    std::vector<std::size_t> cell_of(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
      cell_of[i] = index(cx(pos[i].x), cy(pos[i].y));
      ++count[cell_of[i] + 1];
    }
    for (std::size_t c = 1; c < count.size(); ++c) count[c] += count[c - 1];
    start = count;
    items.resize(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) items[count[cell_of[i]]++] = i;
  }

  std::int64_t cx(double x) const {
    return std::clamp<std::int64_t>(static_cast<std::int64_t>((x - min_x) / cell), 0, nx - 1);
  }
  std::int64_t cy(double y) const {
    return std::clamp<std::int64_t>(static_cast<std::int64_t>((y - min_y) / cell), 0, ny - 1);
  }
  std::size_t index(std::int64_t x, std::int64_t y) const { return static_cast<std::size_t>(y * nx + x); }
};

inline Vec2 repulse_grid_one(std::span<const Vec2> pos, const Grid& grid, double k2, double reach2,
                             std::size_t i) {
  Vec2 acc;
  const Vec2 pi = pos[i];
  const auto gx = grid.cx(pi.x);
  const auto gy = grid.cy(pi.y);
  for (std::int64_t y = std::max<std::int64_t>(0, gy - 1); y <= std::min(grid.ny - 1, gy + 1); ++y) {
    for (std::int64_t x = std::max<std::int64_t>(0, gx - 1); x <= std::min(grid.nx - 1, gx + 1); ++x) {
      const auto c = grid.index(x, y);
      for (std::size_t s = grid.start[c]; s < grid.start[c + 1]; ++s) {
        const std::size_t j = grid.items[s];
        if (j == i) continue;
        const double dx = pi.x - pos[j].x;
        const double dy = pi.y - pos[j].y;
        if (dx * dx + dy * dy < reach2) accumulate(pi, pos[j], i, j, k2, acc);
      }
    }
  }
  return acc;
}

}  // namespace

void repulsion_serial(std::span<const Vec2> pos, double k, std::span<Vec2> disp) {
  const double k2 = k * k;
  for (std::size_t i = 0; i < pos.size(); ++i) disp[i] = repulse_one(pos, k2, i);
}

void repulsion_omp(std::span<const Vec2> pos, double k, std::span<Vec2> disp) {
  const double k2 = k * k;
  const auto n = static_cast<std::int64_t>(pos.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) disp[i] = repulse_one(pos, k2, static_cast<std::size_t>(i));
}

void repulsion_grid_serial(std::span<const Vec2> pos, double k, std::span<Vec2> disp) {
  const Grid grid(pos, 2.0 * k);
  const double k2 = k * k, reach2 = 4.0 * k2;
  for (std::size_t i = 0; i < pos.size(); ++i) disp[i] = repulse_grid_one(pos, grid, k2, reach2, i);
}

void repulsion_grid_omp(std::span<const Vec2> pos, double k, std::span<Vec2> disp) {
  const Grid grid(pos, 2.0 * k);
  const double k2 = k * k, reach2 = 4.0 * k2;
  const auto n = static_cast<std::int64_t>(pos.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i)
    disp[i] = repulse_grid_one(pos, grid, k2, reach2, static_cast<std::size_t>(i));
}

std::vector<KeyList> reference_keys_serial(std::span<const RawRecord> records) {
  std::vector<KeyList> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    out[i].reserve(records[i].cited_refs.size());
    for (const auto& ref : records[i].cited_refs) out[i].push_back(citation_key(ref));
  }
  return out;
}

std::vector<KeyList> reference_keys_omp(std::span<const RawRecord> records) {
  std::vector<KeyList> out(records.size());
  const auto n = static_cast<std::int64_t>(records.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) {
    out[i].reserve(records[i].cited_refs.size());
    for (const auto& ref : records[i].cited_refs) out[i].push_back(citation_key(ref));
  }
  return out;
}

std::vector<std::optional<std::string>> record_keys_serial(std::span<const RawRecord> records) {
  std::vector<std::optional<std::string>> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) out[i] = citation_key(records[i]);
  return out;
}

std::vector<std::optional<std::string>> record_keys_omp(std::span<const RawRecord> records) {
  std::vector<std::optional<std::string>> out(records.size());
  const auto n = static_cast<std::int64_t>(records.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = citation_key(records[i]);
  return out;
}

void llr_serial(std::span<const Contingency> tables, std::span<double> out) {
  for (std::size_t i = 0; i < tables.size(); ++i) out[i] = signed_llr(tables[i]);
}

void llr_omp(std::span<const Contingency> tables, std::span<double> out) {
  const auto n = static_cast<std::int64_t>(tables.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = signed_llr(tables[i]);
}

}  // namespace kernels

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace rfront
