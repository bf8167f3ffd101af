// Two plane waves: as the energy of the first grows, rhoE at a fixed point
// approaches a negative limit.
#include "diracpack/io.hpp"
#include "diracpack/two_mode.hpp"

#include <iostream>

int main() {
  using namespace diracpack;
  const auto mode2 = plane_wave({0.0, 0.0, 0.0}, 1.0);
  const Bispinor chi{{1.0, 0.0, 0.0, 0.0}};
  const auto rep = negativity_search(mode2, chi, {10.0, 100.0, 1e3, 1e4});
  std::cout << "limit " << format_double(rep.limit) << '\n';
  for (const auto &s : rep.samples)
    std::cout << "E1=" << format_double(s.E1) << " rhoE=" << format_double(s.rhoE)
              << '\n';
  std::cout << "log-log slope of the error " << format_double(rep.fitted_slope) << '\n';
}
