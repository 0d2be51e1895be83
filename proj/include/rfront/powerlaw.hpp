#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "rfront/citation_graph.hpp"

namespace rfront {

/// y = a * x^b fitted by least squares on log10-log10 axes.
struct PowerLawFit {
  double a = 0.0;
  double b = 0.0;
  double r2_loglog = 0.0;    // determination of the log-log regression
  double corr_linear = 0.0;  // Pearson(observed, fitted) on the original scale
  std::size_t n_points = 0;
};

struct DegreePoint {
  double degree;
  double count;
};

class InsufficientPoints : public std::invalid_argument {
 public:
  InsufficientPoints() : std::invalid_argument("insufficient points") {}
};

/// Points with degree < 1 are skipped; counts must be positive.
PowerLawFit fit_power_law(std::span<const DegreePoint> points);
PowerLawFit fit_power_law(const DegreeHistogram& hist);

void write_fit_json(std::ostream& out, const PowerLawFit& fit);
/// `degree,observed,fitted` for every bin with degree >= 1.
void write_fit_csv(std::ostream& out, const DegreeHistogram& hist, const PowerLawFit& fit);

}  // namespace rfront
