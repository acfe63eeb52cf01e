#pragma once

#include <vector>

#include "hs/geometry.hpp"

namespace hs {

struct Scenario;

namespace barriers {

/// Harmonic profile on the annulus alpha <= r <= 1 + alpha + beta, equal to 1
/// on the inner sphere and 0 on the outer one. n is 2 or 3.
double eval_u(double r, int n, double alpha, double beta);
/// Radial derivative of eval_u at the outer radius.
double eval_u_outer_derivative(int n, double alpha, double beta);

/// Solution of Delta v = 2n on the same annulus, zero on both spheres.
double eval_v(double r, int n, double alpha, double beta);
double eval_v_outer_derivative(int n, double alpha, double beta);

/// Limits of the outer derivatives as alpha grows without bound.
double u_outer_limit(double beta);
double v_outer_limit(int n, double beta);

struct DerivativeBounds {
  int n = 2;
  double gamma1 = 0.0;  ///< -gamma1 <= u_r
  double gamma2 = 0.0;  ///< u_r <= -gamma2 < 0
  double gamma3 = 0.0;  ///< 0 < gamma3 <= v_r
  double gamma4 = 0.0;  ///< v_r <= gamma4
  // Raw extremes of the scan before padding.
  double u_min = 0.0, u_max = 0.0, v_min = 0.0, v_max = 0.0;
  double pad_u = 0.0, pad_v = 0.0;
  std::size_t samples = 0;
};

/// Scans log-spaced alpha in [1, 1e6] times uniform beta in [0, 1], checks
/// every sign, and pads the extremes by the largest change between adjacent
/// scan points. Throws SolverError on a sign violation.
DerivativeBounds derivative_bounds(int n, int alpha_count = 200, int beta_count = 50);

/// Constant-speed supersolution envelope. The problem is translated to
/// `center` and rescaled by `scale` so that the slot sits in the unit ball and
/// u_I in the ball of radius 2; there the free boundary of the supersolution
/// is r = 2 + ell * t' with ell = k.
struct Envelope {
  Point center{};
  double scale = 1.0;
  double k = 0.0;
  double ell = 0.0;

  /// Envelope radius at physical time t, in physical units.
  double radius(double t) const { return scale * (2.0 + ell * t / (scale * scale)); }
  /// Physical front speed.
  double speed() const { return ell / scale; }
};

/// Throws ConfigError when u_I is not compactly supported.
Envelope supersolution_envelope(const Scenario& scenario);

/// The supersolution in rescaled units (unit slot, datum k).
double supersolution_value(double r, double t, double m, double k, double ell);

struct SupersolutionCheck {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double max_diffusion = 0.0;    ///< max of m * Laplacian (v - 1)_+; must be <= 0
  double min_time_derivative = 0.0;  ///< min of v_t; must be >= 0
  double max_gradient_excess = 0.0;  ///< max of |grad m(v-1)_+| - ell on the front
};

/// Evaluates the interior and front inequalities by finite differences of
/// supersolution_value on an (r, t) sample grid.
SupersolutionCheck check_supersolution(int n, double m, double k, double ell, double t_max,
                                       int r_count = 40, int t_count = 20);

struct SubsolutionSpeed {
  double ell = 0.0;   ///< front speed of the subsolution
  double c2 = 0.0;    ///< -c2 * k bounds the outer derivative of m w from above
  double eps = 0.0;
  double m0 = 0.0;    ///< smallest m for which the interior inequality holds
  DerivativeBounds bounds;
};

/// Speed of the expanding subsolution for slot datum k and source eps (taken
/// relative to k). Throws ConfigError when eps is too large for c2 > 0.
/// `inner_radius` is the rescaled slot radius (>= 1).
SubsolutionSpeed subsolution_speed(int n, double k, double eps, double inner_radius = 1.0);

/// The subsolution w^(m) in rescaled units, for inner radius a and speed ell.
/// Equal to 0 outside a <= r <= 1 + a + ell t.
double subsolution_value(double r, double t, double m, int n, double k, double eps, double a,
                         double ell);

struct ProfileSample {
  double r = 0.0;
  double value = 0.0;
  double derivative = 0.0;
};

/// Samples of eval_u or eval_v with centered-difference derivatives.
std::vector<ProfileSample> profile_u(int n, double alpha, double beta, int count);
std::vector<ProfileSample> profile_v(int n, double alpha, double beta, int count);

}  // namespace barriers
}  // namespace hs
