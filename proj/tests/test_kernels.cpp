#include <doctest.h>

#include <cmath>
#include <random>

#include "rfront/kernels.hpp"
#include "rfront/synth.hpp"
#include "rfront/terms.hpp"

using namespace rfront;
using kernels::Vec2;

namespace {

std::vector<Vec2> cloud(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> u(0.0, scale);
  std::vector<Vec2> pos(n);
  for (auto& p : pos) p = {u(rng), u(rng)};
  return pos;
}

// Direct pairwise sum, optionally cut off at `radius`.
std::vector<Vec2> naive_repulsion(const std::vector<Vec2>& pos, double k, double radius) {
  std::vector<Vec2> out(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = 0; j < pos.size(); ++j) {
      if (i == j) continue;
      const double dx = pos[i].x - pos[j].x, dy = pos[i].y - pos[j].y;
      const double d = std::hypot(dx, dy);
      if (d >= radius || d == 0.0) continue;
      const double f = k * k / d;
      out[i].x += dx / d * f;
      out[i].y += dy / d * f;
    }
  return out;
}

struct ThreadGuard {
  ~ThreadGuard() { set_threads(1); }
};

}  // namespace

TEST_CASE("repulsion matches the pairwise definition") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto pos = cloud(rng, 2 + rng() % 200, 1.0);
    const double k = 0.05 + 0.01 * double(rng() % 10);
    std::vector<Vec2> got(pos.size()), grid(pos.size());
    kernels::repulsion_serial(pos, k, got);
    kernels::repulsion_grid_serial(pos, k, grid);
    auto full = naive_repulsion(pos, k, INFINITY);
    auto cut = naive_repulsion(pos, k, 2 * k);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      CHECK(got[i].x == doctest::Approx(full[i].x).epsilon(1e-9));
      CHECK(got[i].y == doctest::Approx(full[i].y).epsilon(1e-9));
      CHECK(grid[i].x == doctest::Approx(cut[i].x).epsilon(1e-9));
      CHECK(grid[i].y == doctest::Approx(cut[i].y).epsilon(1e-9));
    }
  }
}

TEST_CASE("coincident points are separated") {
  std::vector<Vec2> pos{{0.5, 0.5}, {0.5, 0.5}};
  std::vector<Vec2> d(2);
  kernels::repulsion_serial(pos, 0.1, d);
  CHECK(std::isfinite(d[0].x));
  CHECK(d[0].x != d[1].x);
}

TEST_CASE("omp kernels are bit-identical to serial at any thread count") {
  ThreadGuard guard;
  std::mt19937_64 rng(2);
  auto pos = cloud(rng, 3000, 10.0);
  std::vector<Vec2> ref(pos.size()), ref_grid(pos.size());
  kernels::repulsion_serial(pos, 0.3, ref);
  kernels::repulsion_grid_serial(pos, 0.3, ref_grid);

  auto [records, truth] = generate_records(three_front_config(3));
  auto ref_keys = kernels::reference_keys_serial(records);
  auto ref_rec = kernels::record_keys_serial(records);

  std::vector<Contingency> tables;
  for (int i = 0; i < 5000; ++i)
    tables.push_back({static_cast<std::int64_t>(1 + rng() % 100), static_cast<std::int64_t>(rng() % 1000),
                      static_cast<std::int64_t>(rng() % 10000), static_cast<std::int64_t>(rng() % 100000)});
  std::vector<double> ref_llr(tables.size());
  kernels::llr_serial(tables, ref_llr);
  for (std::size_t i = 0; i < tables.size(); ++i) CHECK(ref_llr[i] == signed_llr(tables[i]));

  for (int threads : {1, 2, 4, 7}) {
    set_threads(threads);
    CAPTURE(threads);
    std::vector<Vec2> par(pos.size()), par_grid(pos.size());
    kernels::repulsion_omp(pos, 0.3, par);
    kernels::repulsion_grid_omp(pos, 0.3, par_grid);
    CHECK(par == ref);
    CHECK(par_grid == ref_grid);
    CHECK(kernels::reference_keys_omp(records) == ref_keys);
    CHECK(kernels::record_keys_omp(records) == ref_rec);
    std::vector<double> par_llr(tables.size());
    kernels::llr_omp(tables, par_llr);
    CHECK(par_llr == ref_llr);
  }
}
