#include "hs/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hs/errors.hpp"
#include "hs/scenario.hpp"

namespace hs::barriers {

namespace {

void check_parameters(int n, double alpha, double beta) {
  if (n != 2 && n != 3) throw ConfigError("barrier dimension must be 2 or 3");
  if (!(alpha >= 1.0)) throw ConfigError("barrier inner radius alpha must be >= 1");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("barrier beta must lie in [0, 1]");
}

void check_radius(double r, double alpha, double outer) {
  const double slack = 1e-12 * outer;
  if (r < alpha - slack || r > outer + slack) {
    std::ostringstream msg;
    msg << "radius " << r << " outside the annulus [" << alpha << ", " << outer << "]";
    throw ConfigError(msg.str());
  }
}

// log(R / alpha) with R = 1 + alpha + beta, accurate for large alpha.
double log_ratio(double alpha, double beta) { return std::log1p((1.0 + beta) / alpha); }

// R^{2-n} - alpha^{2-n}, accurate for large alpha.
double power_gap(int n, double alpha, double beta) {
  const double L = log_ratio(alpha, beta);
  return std::pow(alpha, 2.0 - n) * std::expm1(-(n - 2.0) * L);
}

}  // namespace

double eval_u(double r, int n, double alpha, double beta) {
  check_parameters(n, alpha, beta);
  const double R = 1.0 + alpha + beta;
  check_radius(r, alpha, R);
  if (n == 2) return std::log(r / R) / std::log(alpha / R);
  return (std::pow(r, 2.0 - n) - std::pow(R, 2.0 - n)) / -power_gap(n, alpha, beta);
}

double eval_u_outer_derivative(int n, double alpha, double beta) {
  check_parameters(n, alpha, beta);
  const double R = 1.0 + alpha + beta;
  if (n == 2) return -1.0 / (R * log_ratio(alpha, beta));
  return (2.0 - n) * std::pow(R, 1.0 - n) / -power_gap(n, alpha, beta);
}

double eval_v(double r, int n, double alpha, double beta) {
  check_parameters(n, alpha, beta);
  const double R = 1.0 + alpha + beta;
  check_radius(r, alpha, R);
  const double outer_gap = alpha * alpha - R * R;
  if (n == 2) return (r * r - alpha * alpha) + std::log(r / alpha) * outer_gap / log_ratio(alpha, beta);
  return (r * r - alpha * alpha) +
         outer_gap * (std::pow(r, 2.0 - n) - std::pow(alpha, 2.0 - n)) / power_gap(n, alpha, beta);
}

double eval_v_outer_derivative(int n, double alpha, double beta) {
  check_parameters(n, alpha, beta);
  const double w = 1.0 + beta;
  const double R = 1.0 + alpha + beta;
  const double square_gap = w * (2.0 * alpha + w);  // R^2 - alpha^2
  if (n == 2) return 2.0 * R - square_gap / (R * log_ratio(alpha, beta));
  return 2.0 * R + (n - 2.0) * std::pow(R, 1.0 - n) * square_gap / power_gap(n, alpha, beta);
}

double u_outer_limit(double beta) { return -1.0 / (1.0 + beta); }
double v_outer_limit(int n, double beta) { return n * (1.0 + beta); }

DerivativeBounds derivative_bounds(int n, int alpha_count, int beta_count) {
  if (n != 2 && n != 3) throw ConfigError("barrier dimension must be 2 or 3");
  if (alpha_count < 2 || beta_count < 2) throw ConfigError("derivative scan needs >= 2 points per axis");
  const auto A = static_cast<std::size_t>(alpha_count);
  const auto B = static_cast<std::size_t>(beta_count);
  std::vector<double> U(A * B), V(A * B);
  for (std::size_t i = 0; i < A; ++i) {
    const double alpha = std::pow(10.0, 6.0 * static_cast<double>(i) / static_cast<double>(A - 1));
    for (std::size_t j = 0; j < B; ++j) {
      const double beta = static_cast<double>(j) / static_cast<double>(B - 1);
      const double ur = eval_u_outer_derivative(n, alpha, beta);
      const double vr = eval_v_outer_derivative(n, alpha, beta);
      if (!(ur < 0.0) || !(vr > 0.0)) {
        std::ostringstream msg;
        msg << "outer derivative sign violated at n=" << n << " alpha=" << alpha
            << " beta=" << beta << ": u_r=" << ur << " v_r=" << vr;
        throw SolverError(msg.str());
      }
      U[i * B + j] = ur;
      V[i * B + j] = vr;
    }
  }

  DerivativeBounds out;
  out.n = n;
  out.samples = A * B;
  out.u_min = *std::min_element(U.begin(), U.end());
  out.u_max = *std::max_element(U.begin(), U.end());
  out.v_min = *std::min_element(V.begin(), V.end());
  out.v_max = *std::max_element(V.begin(), V.end());
  for (std::size_t j = 0; j < B; ++j) {
    const double beta = static_cast<double>(j) / static_cast<double>(B - 1);
    out.u_min = std::min(out.u_min, u_outer_limit(beta));
    out.u_max = std::max(out.u_max, u_outer_limit(beta));
    out.v_min = std::min(out.v_min, v_outer_limit(n, beta));
    out.v_max = std::max(out.v_max, v_outer_limit(n, beta));
  }
  for (std::size_t i = 0; i < A; ++i) {
    for (std::size_t j = 0; j < B; ++j) {
      const std::size_t c = i * B + j;
      if (i + 1 < A) {
        out.pad_u = std::max(out.pad_u, std::abs(U[c + B] - U[c]));
        out.pad_v = std::max(out.pad_v, std::abs(V[c + B] - V[c]));
      }
      if (j + 1 < B) {
        out.pad_u = std::max(out.pad_u, std::abs(U[c + 1] - U[c]));
        out.pad_v = std::max(out.pad_v, std::abs(V[c + 1] - V[c]));
      }
    }
  }
  out.gamma1 = -out.u_min + out.pad_u;
  out.gamma2 = -out.u_max - out.pad_u;
  out.gamma3 = out.v_min - out.pad_v;
  out.gamma4 = out.v_max + out.pad_v;
  if (!(out.gamma2 > 0.0) || !(out.gamma3 > 0.0)) {
    throw SolverError("derivative scan too coarse: padded bounds lose their sign");
  }
  return out;
}

// ---------------------------------------------------------------------------

Envelope supersolution_envelope(const Scenario& scenario) {
  const int n = scenario.dimension();
  Envelope env;
  env.center = scenario.slot.enclosing_center();
  const double slot_radius = scenario.slot.enclosing_radius();
  const double support = scenario.u_init.support_radius(env.center, n);
  if (!std::isfinite(support)) {
    throw ConfigError("u_init is not compactly supported; no finite envelope exists");
  }
  env.scale = std::max(slot_radius, 0.5 * support);
  env.k = scenario.max_p();
  env.ell = env.k;
  return env;
}

double supersolution_value(double r, double t, double m, double k, double ell) {
  const double front = 2.0 + ell * t;
  if (r <= 1.0 || r > front) return 0.0;
  return k * (front - r) / (m * (1.0 + ell * t)) + 1.0;
}

SupersolutionCheck check_supersolution(int n, double m, double k, double ell, double t_max,
                                       int r_count, int t_count) {
  if (n != 2 && n != 3) throw ConfigError("barrier dimension must be 2 or 3");
  SupersolutionCheck out;
  out.max_diffusion = -std::numeric_limits<double>::infinity();
  out.min_time_derivative = std::numeric_limits<double>::infinity();
  out.max_gradient_excess = -std::numeric_limits<double>::infinity();
  auto theta = [&](double r, double t) {
    return m * std::max(supersolution_value(r, t, m, k, ell) - 1.0, 0.0);
  };
  const double hr = 1e-3;
  const double ht = 1e-4;
  for (int it = 0; it < t_count; ++it) {
    const double t = t_max * it / std::max(1, t_count - 1);
    const double front = 2.0 + ell * t;
    for (int ir = 1; ir <= r_count; ++ir) {
      // Interior samples, kept one difference step away from both ends.
      const double r = 1.0 + 2.0 * hr + (front - 1.0 - 4.0 * hr) * ir / (r_count + 1.0);
      const double tr = (theta(r + hr, t) - theta(r - hr, t)) / (2.0 * hr);
      const double trr = (theta(r + hr, t) - 2.0 * theta(r, t) + theta(r - hr, t)) / (hr * hr);
      const double diffusion = trr + (n - 1.0) / r * tr;
      const double vt = (supersolution_value(r, t + ht, m, k, ell) - supersolution_value(r, t, m, k, ell)) / ht;
      out.max_diffusion = std::max(out.max_diffusion, diffusion);
      out.min_time_derivative = std::min(out.min_time_derivative, vt);
      ++out.samples;
      if (diffusion > 1e-6 || vt < -1e-9) ++out.violations;
    }
    const double grad = std::abs(theta(front - hr, t) - theta(front - 2.0 * hr, t)) / hr;
    const double excess = grad - ell;
    out.max_gradient_excess = std::max(out.max_gradient_excess, excess);
    if (excess > 1e-6 * std::max(1.0, ell)) ++out.violations;
  }
  return out;
}

SubsolutionSpeed subsolution_speed(int n, double k, double eps, double inner_radius) {
  if (!(k > 0.0)) throw ConfigError("subsolution needs a positive slot datum k");
  if (!(eps >= 0.0)) throw ConfigError("subsolution source eps must be nonnegative");
  if (!(inner_radius >= 1.0)) throw ConfigError("subsolution inner radius must be >= 1");
  SubsolutionSpeed out;
  out.bounds = derivative_bounds(n);
  out.eps = eps;
  out.c2 = out.bounds.gamma2 - eps * out.bounds.gamma4 / (2.0 * n);
  if (!(out.c2 > 0.0)) {
    std::ostringstream msg;
    msg << "eps=" << eps << " too large: eps*gamma4/(2n)=" << eps * out.bounds.gamma4 / (2.0 * n)
        << " must stay below gamma2=" << out.bounds.gamma2;
    throw ConfigError(msg.str());
  }
  out.ell = 0.5 * out.c2 * k;

  // Interior inequality: eps*k >= w_t = (ell / m) * d/dbeta [k u + eps k v / (2n)].
  if (eps == 0.0) {
    out.m0 = std::numeric_limits<double>::infinity();
    return out;
  }
  const double a = inner_radius;
  const double db = 1e-5;
  double worst = 0.0;
  for (int ib = 0; ib <= 40; ++ib) {
    const double beta = std::min(1.0 - db, ib / 40.0);
    const double outer = 1.0 + a + beta;
    for (int ir = 0; ir <= 40; ++ir) {
      const double r = a + (outer - a) * ir / 40.0;
      auto g = [&](double b) {
        return eval_u(std::min(r, 1.0 + a + b), n, a, b) +
               eps / (2.0 * n) * eval_v(std::min(r, 1.0 + a + b), n, a, b);
      };
      const double dg = (g(beta + db) - g(beta)) / db;
      worst = std::max(worst, dg);
    }
  }
  out.m0 = std::ceil(out.ell * worst / eps);
  return out;
}

double subsolution_value(double r, double t, double m, int n, double k, double eps, double a,
                         double ell) {
  const double beta = ell * t;
  if (r < a || r > 1.0 + a + beta) return 0.0;
  return 1.0 + (k / m) * eval_u(r, n, a, beta) + eps * k / (2.0 * n * m) * eval_v(r, n, a, beta);
}

namespace {

template <class F>
std::vector<ProfileSample> sample_profile(double lo, double hi, int count, F f) {
  if (count < 2) throw ConfigError("profile needs at least 2 samples");
  std::vector<ProfileSample> out;
  const double hd = 1e-6 * hi;
  for (int i = 0; i < count; ++i) {
    const double r = lo + (hi - lo) * i / (count - 1);
    const double left = std::max(lo, r - hd);
    const double right = std::min(hi, r + hd);
    out.push_back({r, f(r), (f(right) - f(left)) / (right - left)});
  }
  return out;
}

}  // namespace

std::vector<ProfileSample> profile_u(int n, double alpha, double beta, int count) {
  return sample_profile(alpha, 1.0 + alpha + beta, count,
                        [&](double r) { return eval_u(r, n, alpha, beta); });
}

std::vector<ProfileSample> profile_v(int n, double alpha, double beta, int count) {
  return sample_profile(alpha, 1.0 + alpha + beta, count,
                        [&](double r) { return eval_v(r, n, alpha, beta); });
}

}  // namespace hs::barriers
