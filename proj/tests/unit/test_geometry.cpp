#include <cmath>
#include <numbers>

#include "doctest.h"
#include "json.hpp"
#include "hs/domain.hpp"
#include "hs/errors.hpp"
#include "hs/geometry.hpp"
#include "hs/scenario.hpp"

using namespace hs;

TEST_CASE("unit ball slot: far-field band present and slot area count") {
  const auto slot = SlotGeometry::ball(2, {0, 0, 0}, 1.0);
  const Grid g = build_grid(slot, 0.1, 4.0);
  const double slot_cells = static_cast<double>(g.count(CellRole::Slot));
  CHECK(slot_cells == doctest::Approx(std::numbers::pi / 0.01).epsilon(0.05));
  CHECK(g.count(CellRole::FarField) > 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto c = g.coords(i);
    const bool in_band = c[0] < Grid::kBand || c[1] < Grid::kBand || c[0] >= g.shape()[0] - Grid::kBand ||
                         c[1] >= g.shape()[1] - Grid::kBand;
    if (in_band) CHECK(g.role(i) == CellRole::FarField);
    if (g.role(i) == CellRole::Slot) CHECK(slot.contains(g.center(i)));
    if (g.role(i) == CellRole::Fluid) CHECK_FALSE(slot.contains(g.center(i)));
  }
}

TEST_CASE("mask partition covers every cell exactly once") {
  const Grid g = build_grid(SlotGeometry::ball(3, {0, 0, 0}, 0.5), 0.125, 0.5);
  CHECK(g.count(CellRole::Slot) + g.count(CellRole::Fluid) + g.count(CellRole::FarField) == g.size());
}

TEST_CASE("fluid cells have all 2n neighbours inside the grid") {
  const Grid g = build_grid(SlotGeometry::ball(2, {0, 0, 0}, 1.0), 0.125, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.is_fluid(i)) continue;
    const auto c = g.coords(i);
    for (int a = 0; a < 2; ++a) {
      CHECK(c[a] >= 1);
      CHECK(c[a] + 1 < g.shape()[a]);
    }
    CHECK(g.distance_to_band(i) >= 1);
  }
}

TEST_CASE("two disjoint ball slots give two slot components") {
  const Scenario s = two_slot_scenario();
  const Grid g = build_grid(s.slot, s.h, 1.0);
  CHECK(count_slot_components(g) == 2);
  CHECK(count_slot_components(build_grid(SlotGeometry::ball(2, {0, 0, 0}, 1.0), 0.1, 1.0)) == 1);
}

TEST_CASE("overlapping slot balls are rejected") {
  CHECK_THROWS_AS(SlotGeometry::balls(2, {{0, 0, 0}, {1, 0, 0}}, {0.6, 0.6}), ConfigError);
  CHECK_THROWS_AS(SlotGeometry::ball(2, {0, 0, 0}, -1.0), ConfigError);
  CHECK_THROWS_AS(SlotGeometry::ball(4, {0, 0, 0}, 1.0), ConfigError);
}

TEST_CASE("margin below the envelope bound is rejected with the required margin") {
  Scenario s = radial_scenario(1.0 / 16.0, 0.5);
  const Domain ok = prepare(s);
  // Envelope for the unit slot with p = 1 reaches 2 + t_max.
  CHECK(ok.envelope.radius(s.t_max) == doctest::Approx(2.5));
  s.margin = 0.5;
  try {
    prepare(s);
    FAIL("expected an envelope error");
  } catch (const EnvelopeError& e) {
    CHECK(e.required_margin() > 0.5);
    CHECK(e.required_margin() == doctest::Approx(ok.margin));
  }
  s.margin = ok.margin;
  CHECK_NOTHROW(prepare(s));
}

TEST_CASE("boundary samples: unit outward normals and spacing below h") {
  for (const auto& slot : {SlotGeometry::ball(2, {0.3, -0.2, 0}, 1.0), SlotGeometry::ball(3, {0, 0, 0}, 0.75),
                           SlotGeometry::balls(2, {{-1.5, 0, 0}, {1.5, 0, 0}}, {0.5, 0.5})}) {
    const double h = 0.05;
    const auto samples = slot.sample_boundary(h);
    REQUIRE_FALSE(samples.empty());
    const int n = slot.dimension();
    for (const auto& s : samples) {
      CHECK(norm(s.normal, n) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(slot.signed_distance(s.x)) < 1e-12);
      // Outward: the normal points away from the nearest ball center.
      double best = 1e300;
      Point c{};
      for (const auto& ctr : slot.centers()) {
        if (distance(ctr, s.x, n) < best) best = distance(ctr, s.x, n), c = ctr;
      }
      double dot = 0.0;
      for (int a = 0; a < n; ++a) dot += s.normal[a] * (s.x[a] - c[a]);
      CHECK(dot > 0.0);
    }
    if (n == 2) {
      for (std::size_t i = 1; i < samples.size(); ++i) {
        if (distance(samples[i].x, samples[i - 1].x, 2) < 0.5) CHECK(distance(samples[i].x, samples[i - 1].x, 2) <= h);
      }
    }
  }
}

TEST_CASE("rounded polygon slot") {
  const auto slot = SlotGeometry::rounded_polygon({{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}}, 0.25);
  CHECK(slot.contains({0, 0, 0}));
  CHECK(slot.contains({1.2, 0, 0}));
  CHECK_FALSE(slot.contains({1.3, 0, 0}));
  CHECK(slot.signed_distance({2, 0, 0}) == doctest::Approx(0.75));
  CHECK_THROWS_AS(SlotGeometry::rounded_polygon({{0, 0, 0}, {1, 1, 0}, {2, 2, 0}}, 0.1), ConfigError);
}

TEST_CASE("annulus scenario profile") {
  const Scenario s = annulus_scenario();
  const auto u = [&](double r) { return s.u_init.evaluate({r, 0, 0}, 2); };
  CHECK(u(2.0) == 0.0);
  CHECK(u(2.74) == 0.0);
  CHECK(u(2.875) == doctest::Approx(0.5));
  CHECK(u(3.0) == 1.0);
  CHECK(u(4.0) == 1.0);
  CHECK(u(4.99) == 1.0);
  CHECK(u(5.0) == 0.0);
  CHECK(u(6.0) == 0.0);

  const Scenario p = annulus_scenario(0.2);
  CHECK(p.u_init.evaluate({0, 4.0, 0}, 2) == doctest::Approx(0.8));

  const Scenario z = annulus_scenario(1.0);
  for (double r : {1.5, 2.9, 3.0, 4.0, 4.9, 7.0}) CHECK(z.u_init.evaluate({r, 0, 0}, 2) == 0.0);
}

TEST_CASE("scenario validation") {
  Scenario s = radial_scenario();
  CHECK_NOTHROW(s.validate());
  s.u_init = InitialData::constant(1.5, 2.0);
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.u_init = InitialData::radial({1, 2}, {0.5, -0.1});
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = radial_scenario();
  s.m_list = {16, 8, 32};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = radial_scenario();
  s.lambda = 1.5;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = radial_scenario();
  s.p = BoundaryData::constant(-1.0);
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("scenario JSON round trip") {
  for (const Scenario& s : {radial_scenario(1.0 / 32, 0.3, 0.5), annulus_scenario(0.1), sandwich_scenario(),
                            two_slot_scenario()}) {
    const std::string text = scenario_to_json(s);
    const Scenario back = parse_scenario(text);
    CHECK(scenario_to_json(back) == text);
    CHECK(back.h == s.h);
    CHECK(back.t_max == s.t_max);
    CHECK(back.lambda == s.lambda);
    CHECK(back.m_list == s.m_list);
  }
}

TEST_CASE("scenario parse errors are configuration errors") {
  CHECK_THROWS_AS(parse_scenario("{"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"dimension": 2})"), ConfigError);
  auto j = nlohmann::json::parse(scenario_to_json(radial_scenario()));
  j["u_init"]["kind"] = "spline";
  CHECK_THROWS_AS(parse_scenario(j.dump()), ConfigError);
  j = nlohmann::json::parse(scenario_to_json(radial_scenario()));
  j["slot"]["radii"] = {-1.0};
  CHECK_THROWS_AS(parse_scenario(j.dump()), ConfigError);
  j = nlohmann::json::parse(scenario_to_json(radial_scenario()));
  j["grid"]["margin"] = "wide";
  CHECK_THROWS_AS(parse_scenario(j.dump()), ConfigError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ConfigError);
}

TEST_CASE("p samples interpolate by nearest boundary point") {
  BoundaryData p;
  p.kind = BoundaryData::Kind::Samples;
  p.points = {{1, 0, 0}, {-1, 0, 0}};
  p.values = {2.0, 0.5};
  CHECK(p.evaluate({0.9, 0.1, 0}, 2) == 2.0);
  CHECK(p.evaluate({-0.9, 0.3, 0}, 2) == 0.5);
  CHECK(p.max_value() == 2.0);
}
