#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hs/baiocchi.hpp"
#include "hs/errors.hpp"
#include "hs/fbdiag.hpp"
#include "hs/stefan.hpp"
#include "radial_oracle.hpp"
#include "width_oracle.hpp"

using namespace hs;

namespace {

std::vector<oracle::P2> flat(const std::vector<Point>& p) {
  std::vector<oracle::P2> out;
  for (const auto& q : p) out.push_back({q[0], q[1]});
  return out;
}

double diameter(const std::vector<Point>& p) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) d = std::max(d, distance(p[i], p[j], 2));
  return d;
}

// Cell-centered square grid on [-L, L]^2 without slot.
Grid square(double L, double h) {
  const int n = static_cast<int>(std::round(2 * L / h));
  return Grid::uniform(2, h, {-L, -L, 0}, {n, n, 1});
}

}  // namespace

TEST_CASE("regions at t = 0 are empty") {
  const Domain d = prepare(radial_scenario(1.0 / 16, 0.25));
  const auto s = fbdiag::extract_regions(d, {std::vector<double>(d.size(), 0.0)}, {0.0});
  REQUIRE(s.frames.size() == 1);
  CHECK(s.frames[0].active_cells == 0);
  CHECK(s.frames[0].fb_points.empty());
  CHECK(s.frames[0].area == 0.0);
}

TEST_CASE("radial free boundary is a circle of the oracle radius") {
  const double h = 1.0 / 32;
  const Domain d = prepare(radial_scenario(h, 0.5));
  const std::vector<double> times{0.1, 0.25};
  const auto sl = baiocchi::solve_slices(d, times);
  const auto series = fbdiag::extract_regions(d, {sl[0].W, sl[1].W}, times, 1e-8);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto rs = fbdiag::radius_stats(series.frames[k].fb_points, {0, 0, 0}, 2);
    const double R = oracle::radial_front(times[k]);
    CHECK(std::abs(rs.min - R) <= 2 * h);
    CHECK(std::abs(rs.max - R) <= 2 * h);
    // Free boundary stays off the slot.
    for (const auto& p : series.frames[k].fb_points) CHECK(norm(p, 2) > 1.0 + h);
    CHECK(series.frames[k].fb_length == doctest::Approx(2 * std::numbers::pi * R).epsilon(0.3));
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (series.frames[0].active[i]) CHECK(series.frames[1].active[i]);
  }
  CHECK(series.frames[1].weighted_measure == doctest::Approx(series.frames[1].area));
}

TEST_CASE("annulus: the wet set has two components before contact and one after") {
  const Domain d = prepare(annulus_scenario(0.0, 0.25, 1.0 / 8));
  const auto before = baiocchi::solve_slice(d, 1.5);
  const auto after = baiocchi::solve_slice(d, 3.0);
  CHECK(fbdiag::count_components(d.grid, fbdiag::wet_mask(d, before.active, 1e-9)) == 2);
  CHECK(fbdiag::count_components(d.grid, fbdiag::wet_mask(d, after.active, 1e-9)) == 1);
}

TEST_CASE("min diameter of simple sets") {
  CHECK(fbdiag::min_diameter({}, 2) == 0.0);
  std::vector<Point> seg;
  for (int i = 0; i <= 100; ++i) seg.push_back({0.3 + 0.01 * i * std::cos(0.4), 0.01 * i * std::sin(0.4), 0});
  CHECK(fbdiag::min_diameter(seg, 2) < std::sin(std::numbers::pi / 128) + 1e-12);
  std::vector<Point> disk;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  while (disk.size() < 4000) {
    const Point p{u(rng), u(rng), 0};
    if (norm(p, 2) <= 1.0) disk.push_back(p);
  }
  CHECK(fbdiag::min_diameter(disk, 2) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("min diameter of a rasterized 3-4-5 triangle against the exact width") {
  const double h = 0.02;
  std::vector<Point> tri;
  for (double x = 0.5 * h; x < 3; x += h)
    for (double y = 0.5 * h; y < 4; y += h)
      if (x / 3 + y / 4 <= 1) tri.push_back({x, y, 0});
  const double exact = oracle::exact_min_width(flat(tri));
  CHECK(exact == doctest::Approx(2.4).epsilon(0.02));
  for (int K : {8, 64, 256}) {
    const double md = fbdiag::min_diameter(tri, 2, K);
    CHECK(md >= exact - 1e-12);
    CHECK(md - exact <= diameter(tri) * std::sin(std::numbers::pi / (2 * K)) + 1e-12);
  }
}

TEST_CASE("min diameter is monotone under inclusion") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> T;
    for (int i = 0; i < 60; ++i) T.push_back({n(rng), 0.3 * n(rng), 0});
    std::vector<Point> S(T.begin(), T.begin() + 25);
    CHECK(fbdiag::min_diameter(S, 2) <= fbdiag::min_diameter(T, 2));
    std::vector<Point> T3;
    for (int i = 0; i < 60; ++i) T3.push_back({n(rng), n(rng), 0.2 * n(rng)});
    std::vector<Point> S3(T3.begin(), T3.begin() + 25);
    CHECK(fbdiag::min_diameter(S3, 3) <= fbdiag::min_diameter(T3, 3));
  }
}

TEST_CASE("flat free boundary is regular with density one half") {
  const double h = 1.0 / 64;
  const Grid g = square(2.0, h);
  Mask half(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) half[i] = g.center(i)[0] < 0.0;
  const std::vector<double> radii{1.0, 0.5, 0.25, 0.125};
  for (double delta : {0.1, h / 0.125}) {
    fbdiag::ClassifyThresholds th;
    th.delta_reg = delta;
    const auto rep = fbdiag::classify_point(g, half, {0, 0, 0}, radii, th);
    for (std::size_t k = 0; k < rep.radii.size(); ++k) {
      CHECK(std::abs(rep.density[k] - 0.5) <= h / rep.radii[k]);
    }
    CHECK(rep.classification == fbdiag::PointClass::Regular);
  }
}

TEST_CASE("a cusp of the inactive set is flagged") {
  const double h = 1.0 / 256;
  const Grid g = square(1.5, h);
  Mask active(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point c = g.center(i);
    const bool cusp = c[0] > 0 && c[1] * c[1] <= c[0] * c[0] * c[0];
    active[i] = !cusp;
  }
  const auto rep = fbdiag::classify_point(g, active, {0, 0, 0}, {1.0, 0.5, 0.25, 0.125});
  REQUIRE(rep.md_ratio.size() == 4);
  for (std::size_t k = 1; k < 4; ++k) CHECK(rep.md_ratio[k] < rep.md_ratio[k - 1]);
  CHECK(rep.classification == fbdiag::PointClass::CuspSuspect);
  for (double d : rep.density) {
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
  }
}

TEST_CASE("radial free boundary points are regular; slot points are excluded; large radii are dropped") {
  const double h = 1.0 / 64;
  const Scenario s = radial_scenario(h, 0.5);
  const Domain d = prepare(s);
  const auto sl = baiocchi::solve_slice(d, 0.25);
  const auto fr = fbdiag::make_frame(d, sl.active, 0.25);
  REQUIRE_FALSE(fr.fb_points.empty());
  for (std::size_t k = 0; k < fr.fb_points.size(); k += fr.fb_points.size() / 6) {
    const auto rep = fbdiag::classify_point(d.grid, sl.active, fr.fb_points[k], {16 * h, 8 * h, 4 * h}, {}, &s.slot);
    CHECK(rep.classification == fbdiag::PointClass::Regular);
  }
  const auto ex = fbdiag::classify_point(d.grid, sl.active, {1.0 + h, 0, 0}, {16 * h, 8 * h, 4 * h}, {}, &s.slot);
  CHECK(ex.classification == fbdiag::PointClass::Excluded);
  const auto big = fbdiag::classify_point(d.grid, sl.active, fr.fb_points[0], {100.0, 16 * h, 8 * h, 4 * h});
  CHECK(big.radii.size() == 3);
  CHECK_FALSE(big.warnings.empty());
}

TEST_CASE("geometric radii") {
  const auto r = fbdiag::geometric_radii(1.0, 4);
  REQUIRE(r.size() >= 4);
  CHECK(r[0] == 1.0);
  CHECK(r[3] == 0.125);
}

TEST_CASE("hausdorff distance between masks") {
  const Grid g = square(1.0, 0.1);
  Mask a(g.size(), 0), b(g.size(), 0);
  CHECK(fbdiag::hausdorff_cells(g, a, b) == 0.0);
  a[g.index(5, 5)] = 1;
  CHECK(std::isinf(fbdiag::hausdorff_cells(g, a, b)));
  b[g.index(5, 8)] = 1;
  CHECK(fbdiag::hausdorff_cells(g, a, b) == doctest::Approx(3.0));
  b[g.index(5, 5)] = 1;
  CHECK(fbdiag::hausdorff_cells(g, a, b) == doctest::Approx(3.0));
  a[g.index(5, 8)] = 1;
  CHECK(fbdiag::hausdorff_cells(g, a, b) == 0.0);
}

TEST_CASE("measure continuity: zero increments without injection, finite slopes, degenerate lambda") {
  Scenario s = radial_scenario(1.0 / 16, 0.5);
  s.p = BoundaryData::constant(0.0);
  const Domain z = prepare(s);
  std::vector<std::vector<double>> fields(4, std::vector<double>(z.size(), 0.0));
  const auto none = fbdiag::measure_continuity(fbdiag::extract_regions(z, fields, {0.1, 0.2, 0.3, 0.4}), 0.0);
  for (const auto& e : none.slopes) CHECK(e.increment == 0.0);
  CHECK(none.max_slope == 0.0);

  const Domain d = prepare(radial_scenario(1.0 / 16, 0.5));
  const std::vector<double> times{0.1, 0.2, 0.3, 0.4, 0.5};
  const auto sl = baiocchi::solve_slices(d, times);
  std::vector<std::vector<double>> W;
  for (const auto& x : sl) W.push_back(x.W);
  const auto rep = fbdiag::measure_continuity(fbdiag::extract_regions(d, W, times, 1e-8), 0.0);
  CHECK(rep.slopes.size() == 4);
  CHECK_FALSE(rep.degenerate);
  CHECK(rep.lambda_factor == 1.0);
  for (const auto& e : rep.slopes) {
    CHECK(std::isfinite(e.slope));
    CHECK_FALSE(e.spike);
  }
  const auto deg = fbdiag::measure_continuity(fbdiag::extract_regions(d, W, times, 1e-8), 1.0);
  CHECK(deg.degenerate);
  CHECK(std::isinf(deg.lambda_factor));
}

TEST_CASE("annulus contact shows as a flagged slope spike") {
  const Domain d = prepare(annulus_scenario(0.0, 0.25, 1.0 / 8));
  std::vector<double> times;
  for (int i = 1; i <= 24; ++i) times.push_back(i / 8.0);
  const auto sl = baiocchi::solve_slices(d, times);
  std::vector<std::vector<double>> W;
  for (const auto& x : sl) W.push_back(x.W);
  const auto rep = fbdiag::measure_continuity(fbdiag::extract_regions(d, W, times, 1e-8), 1.0);
  std::size_t spikes = 0;
  for (const auto& e : rep.slopes) {
    if (e.spike) {
      ++spikes;
      CHECK(e.t > 2.3);
      CHECK(e.t < 2.9);
    }
  }
  CHECK(spikes == 1);
  CHECK(rep.degenerate);
}

TEST_CASE("energy estimate: constant fields, slot rejection, uniform ratios") {
  const Domain d = prepare(radial_scenario(1.0 / 32, 0.3));
  const fbdiag::EnergyBall ball{{1.6, 0, 0}, 0.15, 0.3};
  TemperatureField c{0.1, std::vector<double>(d.size(), 2.0)};
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!d.grid.is_fluid(i)) c.theta[i] = 2.0;
  }
  const auto flat_rep = fbdiag::energy_estimate_check(d, {{c}}, {ball});
  CHECK(flat_rep.entries[0].gradient == 0.0);
  CHECK(flat_rep.entries[0].mass > 0.0);
  CHECK(flat_rep.entries[0].holds);
  CHECK_THROWS_AS(fbdiag::energy_estimate_check(d, {{c}}, {{{1.2, 0, 0}, 0.1, 0.3}}), ConfigError);

  std::vector<std::vector<TemperatureField>> series;
  for (double m : {64.0, 256.0}) {
    const auto r = stefan::run(d, m, {0.1, 0.2, 0.3});
    std::vector<TemperatureField> f;
    for (const auto& s : r.snapshots) f.push_back(s.theta);
    series.push_back(f);
  }
  const auto rep = fbdiag::energy_estimate_check(d, series, {ball});
  REQUIRE(rep.entries.size() == 2);
  for (const auto& e : rep.entries) CHECK(e.holds);
  const double a = rep.entries[0].ratio, b = rep.entries[1].ratio;
  CHECK(std::max(a, b) < 2.0 * std::min(a, b));
}
