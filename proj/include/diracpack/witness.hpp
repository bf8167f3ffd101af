#pragma once

// Grid points next to the rhoE = 0 contour where G / rhoE exceeds the speed
// of light while the Dirac velocity j / rho stays subluminal.

#include "diracpack/grid_scan.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace diracpack {

struct WitnessReport {
  bool found = false;
  Point2 point;           // contour-adjacent cell with the largest |G|/|rhoE|
  double rhoE = 0.0;
  double G = 0.0;
  double speed = 0.0;     // |G| / |rhoE| there (infinite if rhoE is 0)
  double speedD = 0.0;
  double max_speed = 0.0; // same as speed; kept for report readability
  double min_adjacent_G = std::numeric_limits<double>::infinity();
  std::size_t adjacent_cells = 0;
  bool G_above_floor = false; // min_adjacent_G > noise_floor
};

/// map_G holds |G|, map_vD holds |v_D|. A cell is contour-adjacent when one
/// of its 4-neighbours lies on the other side of the -floor level.
inline WitnessReport superluminal_witness(const FieldMap &map_rhoE,
                                          const FieldMap &map_G,
                                          const FieldMap &map_vD,
                                          double floor) {
  const HalfPlaneGrid &g = map_rhoE.grid;
  if (map_G.values.size() != g.size() || map_vD.values.size() != g.size() ||
      map_G.grid.nx != g.nx || map_vD.grid.nx != g.nx)
    throw std::invalid_argument("superluminal_witness: maps on different grids");

  auto negative = [&](std::size_t i, std::size_t j) {
    return map_rhoE.at(i, j) < -floor;
  };
  WitnessReport rep;
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.nz; ++j) {
      const bool neg = negative(i, j);
      const bool adjacent = (i > 0 && negative(i - 1, j) != neg) ||
                            (i + 1 < g.nx && negative(i + 1, j) != neg) ||
                            (j > 0 && negative(i, j - 1) != neg) ||
                            (j + 1 < g.nz && negative(i, j + 1) != neg);
      if (!adjacent) continue;
      ++rep.adjacent_cells;
      const std::size_t idx = g.index(i, j);
      const double rE = map_rhoE.values[idx];
      const double G = map_G.values[idx];
      const double vD = map_vD.values[idx];
      rep.min_adjacent_G = std::min(rep.min_adjacent_G, G);
      if (map_vD.flags[idx] || vD > 1.0 + 1e-12) continue;
      const double speed = rE != 0.0 ? G / std::abs(rE)
                                     : std::numeric_limits<double>::infinity();
      if (speed > 1.0 && speed > rep.speed) {
        rep.found = true;
        rep.point = {g.x(i), g.z(j)};
        rep.rhoE = rE;
        rep.G = G;
        rep.speed = speed;
        rep.speedD = vD;
      }
    }
  rep.max_speed = rep.speed;
  rep.G_above_floor = rep.adjacent_cells > 0 && rep.min_adjacent_G > floor;
  return rep;
}

} // namespace diracpack
