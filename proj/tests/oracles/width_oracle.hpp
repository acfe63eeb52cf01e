#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

// Exact minimum width of a planar point set: the minimum over convex hull
// edges of the largest distance from the edge line (rotating calipers,
// brute-force variant).
namespace oracle {

struct P2 {
  double x, y;
};

inline double cross(const P2& o, const P2& a, const P2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline std::vector<P2> convex_hull(std::vector<P2> p) {
  std::sort(p.begin(), p.end(), [](const P2& a, const P2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  if (p.size() < 3) return p;
  std::vector<P2> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i - 1]) <= 0) --k;
    h[k++] = p[i - 1];
  }
  h.resize(k - 1);
  return h;
}

inline double exact_min_width(const std::vector<P2>& points) {
  const auto h = convex_hull(points);
  if (h.size() < 3) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < h.size(); ++i) {
    const P2& a = h[i];
    const P2& b = h[(i + 1) % h.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    double far = 0.0;
    for (const P2& q : h) far = std::max(far, std::abs(cross(a, b, q)) / len);
    best = std::min(best, far);
  }
  return best;
}

}  // namespace oracle
