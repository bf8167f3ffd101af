// Scans the energy quasi-density of a Gaussian Dirac packet on the (x, z)
// half plane and lists the regions where it is negative.
#include "diracpack/contours.hpp"
#include "diracpack/grid_scan.hpp"
#include "diracpack/io.hpp"

#include <iostream>

int main(int argc, char **argv) {
  using namespace diracpack;
  const double t = argc > 1 ? std::stod(argv[1]) : 2.5;
  const auto profile = make_profile(PhysParams(1.0, 0.1));
  const HalfPlaneGrid grid{};
  const auto quad = build_quadrature(profile, t, grid.r_max(), 1e-10);
  const FieldMap map = scan(grid, t, ObservableId::RhoE, profile, quad);

  std::cout << "t=" << format_double(t) << " nodes=" << quad.n_nodes
            << " noise_floor=" << format_double(map.noise_floor) << '\n';
  for (const auto &r : negative_components(map, map.noise_floor))
    std::cout << "region: " << r.cells.size() << " cells, min "
              << format_double(r.min_value) << " at centroid ("
              << format_double(r.centroid.x) << ", " << format_double(r.centroid.z)
              << ")\n";
}
