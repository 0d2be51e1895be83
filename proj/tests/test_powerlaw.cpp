#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rfront/powerlaw.hpp"

using namespace rfront;

namespace {

std::vector<DegreePoint> law(double a, double b, int n) {
  std::vector<DegreePoint> pts;
  for (int d = 1; d <= n; ++d) pts.push_back({double(d), a * std::pow(double(d), b)});
  return pts;
}

// Closed-form OLS in long double, written out independently of the library.
struct Ols {
  long double slope, intercept;
};
Ols ols(const std::vector<DegreePoint>& pts) {
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const long double n = pts.size();
  for (const auto& p : pts) {
    long double x = std::log10((long double)p.degree), y = std::log10((long double)p.count);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  long double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

}  // namespace

TEST_CASE("noiseless law is recovered") {
  auto fit = fit_power_law(law(100.0, -2.0, 10));
  CHECK(std::abs(fit.a - 100.0) <= 1e-9);
  CHECK(std::abs(fit.b + 2.0) <= 1e-9);
  CHECK(fit.r2_loglog == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.corr_linear == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.n_points == 10);

  auto pts = law(100.0, -2.0, 10);
  for (auto& p : pts) p.count *= 10.0;
  auto ten = fit_power_law(pts);
  CHECK(std::abs(ten.a - 1000.0) <= 1e-9 * 1000.0);
  CHECK(ten.b == fit.b);
}

TEST_CASE("random noiseless laws within 1e-9 relative") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ua(0.5, 1e5), ub(-3.5, -0.5);
  for (int i = 0; i < 500; ++i) {
    const double a = ua(rng), b = ub(rng);
    auto fit = fit_power_law(law(a, b, 2 + static_cast<int>(rng() % 60)));
    CHECK(std::abs(fit.a - a) <= 1e-9 * a);
    CHECK(std::abs(fit.b - b) <= 1e-9 * std::abs(b));
  }
}

TEST_CASE("fit matches an independent least-squares oracle on noisy data") {
  std::mt19937_64 rng(9);
  std::lognormal_distribution<double> noise(0.0, 0.3);
  for (int i = 0; i < 200; ++i) {
    auto pts = law(500.0, -1.8, 3 + static_cast<int>(rng() % 40));
    for (auto& p : pts) p.count *= noise(rng);
    auto fit = fit_power_law(pts);
    auto ref = ols(pts);
    CHECK(fit.b == doctest::Approx(double(ref.slope)).epsilon(1e-9));
    CHECK(std::log10(fit.a) == doctest::Approx(double(ref.intercept)).epsilon(1e-9));
    CHECK(fit.r2_loglog >= 0.0);
    CHECK(fit.r2_loglog <= 1.0);
  }
}

TEST_CASE("exponent is exactly invariant when scaled counts are exact") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    DegreeHistogram h;
    const int bins = 2 + static_cast<int>(rng() % 30);
    std::size_t d = 0;
    for (int i = 0; i < bins; ++i) h.bins[d += 1 + rng() % 3] = 1 + rng() % 5000;
    std::vector<DegreePoint> base, scaled, halved;
    const double c = double(1 + rng() % 1000);
    for (auto [deg, n] : h.bins) {
      base.push_back({double(deg), double(n)});
      scaled.push_back({double(deg), c * double(n)});  // integer product, exact
      halved.push_back({double(deg), std::ldexp(double(n), -7)});
    }
    auto f0 = fit_power_law(base);
    CHECK(fit_power_law(scaled).b == f0.b);
    CHECK(fit_power_law(halved).b == f0.b);
    CHECK(fit_power_law(scaled).a == doctest::Approx(c * f0.a).epsilon(1e-12));
  }
}

TEST_CASE("degenerate inputs") {
  CHECK_THROWS_AS(fit_power_law(std::vector<DegreePoint>{{1, 5}}), InsufficientPoints);
  CHECK_THROWS_AS(fit_power_law(std::vector<DegreePoint>{{0, 9}, {1, 5}}), InsufficientPoints);
  CHECK_THROWS_AS(fit_power_law(DegreeHistogram{}), InsufficientPoints);
  CHECK_THROWS_AS(fit_power_law(std::vector<DegreePoint>{{1, 5}, {2, 0}}), std::invalid_argument);
  try {
    fit_power_law(DegreeHistogram{});
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()) == "insufficient points");
  }
  // flat counts: a perfect horizontal line
  auto flat = fit_power_law(std::vector<DegreePoint>{{1, 7}, {2, 7}, {5, 7}});
  CHECK(flat.b == 0.0);
  CHECK(flat.a == doctest::Approx(7.0));
  CHECK(flat.r2_loglog == 1.0);
  CHECK(flat.corr_linear == 1.0);
}

TEST_CASE("fit writers") {
  DegreeHistogram h;
  h.bins = {{0, 3}, {1, 100}, {2, 25}, {4, 6}};
  auto fit = fit_power_law(h);
  std::ostringstream js, csv;
  write_fit_json(js, fit);
  auto doc = nlohmann::json::parse(js.str());
  CHECK(doc["b"].get<double>() == fit.b);
  CHECK(doc["a"].get<double>() == fit.a);
  write_fit_csv(csv, h, fit);
  std::string text = csv.str();
  CHECK(text.rfind("degree,observed,fitted\n1,100,", 0) == 0);
  CHECK(text.find("\n0,") == std::string::npos);
}
