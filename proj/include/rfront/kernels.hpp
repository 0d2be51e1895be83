#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version; both produce bit-identical results at any thread count
// because every output element is reduced in a fixed order by one thread.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rfront/corpus.hpp"

namespace rfront {

struct Contingency;

namespace kernels {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;
};

/// Repulsive displacement on every node: sum over j != i of k^2/d along
/// (p_i - p_j). Coincident points are pushed apart along x by index order.
void repulsion_serial(std::span<const Vec2> pos, double k, std::span<Vec2> disp);
void repulsion_omp(std::span<const Vec2> pos, double k, std::span<Vec2> disp);

/// Same force restricted to pairs closer than 2k, found through a uniform
/// grid of cell size 2k.
void repulsion_grid_serial(std::span<const Vec2> pos, double k, std::span<Vec2> disp);
void repulsion_grid_omp(std::span<const Vec2> pos, double k, std::span<Vec2> disp);

using KeyList = std::vector<std::optional<std::string>>;

/// Citation keys of every cited reference, per record.
std::vector<KeyList> reference_keys_serial(std::span<const RawRecord> records);
std::vector<KeyList> reference_keys_omp(std::span<const RawRecord> records);

std::vector<std::optional<std::string>> record_keys_serial(std::span<const RawRecord> records);
std::vector<std::optional<std::string>> record_keys_omp(std::span<const RawRecord> records);

void llr_serial(std::span<const Contingency> tables, std::span<double> out);
void llr_omp(std::span<const Contingency> tables, std::span<double> out);

}  // namespace kernels

/// Thread count for the OpenMP kernels; 0 keeps the runtime default.
void set_threads(int n);
int max_threads();

}  // namespace rfront
