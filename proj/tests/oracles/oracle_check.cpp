#include "doctest.h"
#include "fd.hpp"
#include "radial_oracle.hpp"
#include "width_oracle.hpp"

TEST_CASE("radial oracle front matches the known value at t = 0.25") {
  // (R^2/2) ln R - (R^2 - 1)/4 = 1/4 is solved by R^2 = e.
  CHECK(oracle::radial_front(0.25) == doctest::Approx(std::sqrt(std::exp(1.0))).epsilon(1e-12));
}

TEST_CASE("radial oracle potential solves its boundary problem") {
  const double t = 0.25;
  CHECK(oracle::radial_W(1.0, t) == doctest::Approx(t).epsilon(1e-12));
  CHECK(oracle::radial_W(oracle::radial_front(t), t) == doctest::Approx(0.0).epsilon(1e-12));
  auto w = [&](double r) { return oracle::radial_W(r, t); };
  CHECK(oracle::fd_radial_laplacian(w, 1.3, 2) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(oracle::fd_derivative(w, oracle::radial_front(t) - 1e-4) == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("radial oracle front grows with lambda") {
  double last = 0.0;
  for (double lambda : {0.0, 0.25, 0.5, 0.75}) {
    const double R = oracle::radial_front(0.25, lambda);
    CHECK(R > last);
    CHECK((1.0 - lambda) * oracle::radial_flux(R) == doctest::Approx(0.25).epsilon(1e-12));
    last = R;
  }
}

TEST_CASE("width oracle on simple shapes") {
  CHECK(oracle::exact_min_width({{0, 0}, {3, 0}, {0, 4}}) == doctest::Approx(2.4));
  CHECK(oracle::exact_min_width({{0, 0}, {1, 0}, {1, 1}, {0, 1}}) == doctest::Approx(1.0));
  CHECK(oracle::exact_min_width({{0, 0}, {1, 0}}) == 0.0);
}
