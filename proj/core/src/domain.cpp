#include "hs/domain.hpp"

#include <algorithm>
#include <sstream>

#include "hs/errors.hpp"

namespace hs {

Domain prepare(const Scenario& scenario, std::optional<double> reach_time) {
  scenario.validate();
  const barriers::Envelope env = barriers::supersolution_envelope(scenario);
  const ReachRequirement reach{env.center, env.radius(reach_time.value_or(scenario.t_max))};
  const double margin = scenario.margin ? *scenario.margin
                                        : required_margin(scenario.slot, scenario.h, reach);
  Domain d = prepare_on_grid(scenario, build_grid(scenario.slot, scenario.h, margin, reach));
  d.margin = margin;
  d.envelope = env;
  return d;
}

Domain prepare_on_grid(const Scenario& scenario, Grid grid) {
  Domain d;
  d.grid = std::move(grid);
  d.max_p = scenario.max_p();
  d.t_max = scenario.t_max;
  const Grid& g = d.grid;
  const int dim = g.dimension();
  const std::size_t n = g.size();
  d.u_init.assign(n, 0.0);
  d.slot_t.assign(n, 0.0);
  d.slot_tp.assign(n, 0.0);
  d.open_faces.assign(n, 0);

  for (std::size_t idx = 0; idx < n; ++idx) {
    if (g.role(idx) == CellRole::Slot) continue;
    d.u_init[idx] = scenario.u_init.evaluate(g.center(idx), dim);
    if (!g.is_fluid(idx)) continue;
    d.fluid_cells.push_back(idx);
    if (g.distance_to_band(idx) <= 2) d.guard_cells.push_back(idx);
    for (int axis = 0; axis < dim; ++axis) {
      for (int side : {-1, 1}) {
        // Fluid cells never touch the grid edge: the far-field band surrounds them.
        const std::size_t nb = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) + side * g.stride(axis));
        if (g.role(nb) != CellRole::Slot) {
          ++d.open_faces[idx];
          continue;
        }
        SlotFace f;
        f.cell = idx;
        f.axis = axis;
        f.side = side;
        const Point from = g.center(idx);
        const Point to = g.center(nb);
        f.fraction = scenario.slot.crossing_fraction(from, to);
        for (int k = 0; k < 3; ++k) f.crossing[k] = from[k] + f.fraction * (to[k] - from[k]);
        f.transmissibility = 1.0 / std::max(f.fraction, kMinFaceFraction);
        f.p = scenario.p.evaluate(f.crossing, dim);
        d.slot_t[idx] += f.transmissibility;
        d.slot_tp[idx] += f.transmissibility * f.p;
        d.slot_faces.push_back(f);
      }
    }
  }
  return d;
}

void check_guard(const Domain& domain, const std::vector<double>& field, const char* what,
                 double t) {
  for (std::size_t idx : domain.guard_cells) {
    if (field[idx] > 0.0) {
      const Point x = domain.grid.center(idx);
      std::ostringstream msg;
      msg << what << " became positive within two cells of the far-field band at t=" << t
          << " (cell at";
      for (int k = 0; k < domain.grid.dimension(); ++k) msg << ' ' << x[k];
      msg << "); enlarge the margin";
      throw EnvelopeError(msg.str(), domain.margin + 4.0 * domain.grid.h());
    }
  }
}

}  // namespace hs
