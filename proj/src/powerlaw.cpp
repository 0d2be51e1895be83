#include "rfront/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace rfront {

PowerLawFit fit_power_law(std::span<const DegreePoint> points) {
  std::vector<DegreePoint> usable;
  for (const auto& p : points) {
    if (p.degree < 1.0) continue;
    if (!(p.count > 0.0) || !std::isfinite(p.count))
      throw std::invalid_argument("power-law fit needs positive finite counts");
    usable.push_back(p);
  }
  if (usable.size() < 2) throw InsufficientPoints();
  const std::size_t n = usable.size();

  // Logs are taken of count ratios against the first point, so that scaling
  // every count by the same factor leaves the slope bit-for-bit unchanged.
  const double ref = usable.front().count;
  std::vector<double> u(n), y(n);
  double mu = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = std::log10(usable[i].degree);
    y[i] = std::log10(usable[i].count / ref);
    mu += u[i];
    my += y[i];
  }
  mu /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double suu = 0.0, suy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double du = u[i] - mu, dy = y[i] - my;
    suu += du * du;
    suy += du * dy;
    syy += dy * dy;
  }
  if (suu == 0.0) throw InsufficientPoints();

  PowerLawFit fit;
  fit.n_points = n;
  fit.b = suy / suu;
  const double intercept = my - fit.b * mu;
  fit.a = ref * std::pow(10.0, intercept);

  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (intercept + fit.b * u[i]);
    ss_res += r * r;
  }
  fit.r2_loglog = syy == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);

  double mo = 0.0, mf = 0.0;
  std::vector<double> fitted(n);
  for (std::size_t i = 0; i < n; ++i) {
    fitted[i] = fit.a * std::pow(usable[i].degree, fit.b);
    mo += usable[i].count;
    mf += fitted[i];
  }
  mo /= static_cast<double>(n);
  mf /= static_cast<double>(n);
  double soo = 0.0, sff = 0.0, sof = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dob = usable[i].count - mo, df = fitted[i] - mf;
    soo += dob * dob;
    sff += df * df;
    sof += dob * df;
  }
  if (soo == 0.0 || sff == 0.0)
    fit.corr_linear = (soo == 0.0 && sff == 0.0) ? 1.0 : 0.0;
  else
    fit.corr_linear = std::clamp(sof / std::sqrt(soo * sff), -1.0, 1.0);
  return fit;
}

PowerLawFit fit_power_law(const DegreeHistogram& hist) {
  std::vector<DegreePoint> points;
  for (const auto& [d, c] : hist.bins)
    if (d >= 1) points.push_back({static_cast<double>(d), static_cast<double>(c)});
  return fit_power_law(points);
}

void write_fit_json(std::ostream& out, const PowerLawFit& fit) {
  nlohmann::ordered_json doc;
  doc["model"] = "y = a * x^b";
  doc["a"] = fit.a;
  doc["b"] = fit.b;
  doc["correlation"] = fit.corr_linear;
  doc["r_squared"] = fit.r2_loglog;
  doc["n_points"] = fit.n_points;
  out << doc.dump(2) << '\n';
}

void write_fit_csv(std::ostream& out, const DegreeHistogram& hist, const PowerLawFit& fit) {
  out << "degree,observed,fitted\n";
  char buf[64];
  for (const auto& [d, c] : hist.bins) {
    if (d < 1) continue;
    std::snprintf(buf, sizeof buf, "%.17g", fit.a * std::pow(static_cast<double>(d), fit.b));
    out << d << ',' << c << ',' << buf << '\n';
  }
}

}  // namespace rfront
