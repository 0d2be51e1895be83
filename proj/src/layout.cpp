#include "rfront/layout.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace rfront {

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

LayoutResult layout_force(const CitationGraph& graph, const LayoutOptions& opt) {
  if (opt.iterations < 1) throw std::invalid_argument("layout needs at least one iteration");
  if (!(opt.area > 0.0)) throw std::invalid_argument("layout area must be positive");
  LayoutResult result;
  result.seed = opt.seed;
  const std::size_t n = graph.node_count();
  if (n == 0) return result;

  const double side = std::sqrt(opt.area);
  std::mt19937_64 rng(opt.seed);
  result.coords.resize(n);
  for (auto& p : result.coords) {
    p.x = unit_uniform(rng) * side;
    p.y = unit_uniform(rng) * side;
  }
  const double k = std::sqrt(opt.area / static_cast<double>(n));
  result.ideal_length = k;

  // Reciprocal citations pull once.
  std::vector<Edge> springs;
  for (const auto& e : graph.edges()) {
    if (e.citing > e.cited) {
      auto back = graph.successors(e.cited);
      if (std::binary_search(back.begin(), back.end(), e.citing)) continue;
    }
    springs.push_back(e);
  }

  const bool use_grid = n > opt.grid_threshold;
  std::vector<kernels::Vec2> disp(n);
  const double t0 = opt.initial_temperature * side;
  for (std::size_t it = 0; it < opt.iterations; ++it) {
    auto& pos = result.coords;
    if (use_grid)
      opt.parallel ? kernels::repulsion_grid_omp(pos, k, disp) : kernels::repulsion_grid_serial(pos, k, disp);
    else
      opt.parallel ? kernels::repulsion_omp(pos, k, disp) : kernels::repulsion_serial(pos, k, disp);

    for (const auto& e : springs) {
      const double dx = pos[e.citing].x - pos[e.cited].x;
      const double dy = pos[e.citing].y - pos[e.cited].y;
      const double d = std::sqrt(dx * dx + dy * dy);
      // d^2/k along the unit vector = delta * d / k
      const double f = d / k;
      disp[e.citing].x -= dx * f;
      disp[e.citing].y -= dy * f;
      disp[e.cited].x += dx * f;
      disp[e.cited].y += dy * f;
    }

    const double t = t0 * (1.0 - static_cast<double>(it) / static_cast<double>(opt.iterations));
    for (std::size_t v = 0; v < n; ++v) {
      const double len = std::sqrt(disp[v].x * disp[v].x + disp[v].y * disp[v].y);
      if (!(len > 0.0) || !std::isfinite(len)) continue;
      const double step = std::min(len, t) / len;
      pos[v].x += disp[v].x * step;
      pos[v].y += disp[v].y * step;
    }
  }
  result.iterations_run = opt.iterations;
  return result;
}

}  // namespace rfront
