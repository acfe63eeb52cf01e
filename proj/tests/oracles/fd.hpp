#pragma once

#include <functional>

// Central finite differences for radial profiles.
namespace oracle {

inline double fd_derivative(const std::function<double(double)>& f, double r, double h = 1e-5) {
  return (f(r + h) - f(r - h)) / (2.0 * h);
}

/// Radial Laplacian f'' + (n - 1) f' / r.
inline double fd_radial_laplacian(const std::function<double(double)>& f, double r, int n, double h = 1e-4) {
  const double d2 = (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
  return d2 + (n - 1) * fd_derivative(f, r, h) / r;
}

}  // namespace oracle
