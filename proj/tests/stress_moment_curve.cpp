// Three measures on the moment curve in R^5, two orthogonal planes.
// Nine equations in nine unknowns, so the search may or may not land.
#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "orthopart/masspart.hpp"
#include "orthopart/solver.hpp"

int main(int argc, char** argv) {
  using namespace orthopart;
  const std::size_t samples = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 2000;
  const std::size_t restarts = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 256;
  const auto ms = moment_curve_fixture(3, 5, samples, 1.5, 2024);
  SolveOptions opt;
  opt.restarts = restarts;
  opt.max_iters = 4000;
  opt.smoothing_width = argc > 3 ? std::strtod(argv[3], nullptr) : 0.0;
  opt.threads = std::max(1u, std::thread::hardware_concurrency());
  const auto r = solve_orthogonal(ms, 2, 2, opt);
  std::cout << to_string(r.status) << " residual " << r.residual << " max deviation " << r.verified.max_deviation
            << " restarts " << r.restarts_used << "\n";
  return r.status == SolveStatus::solved ? 0 : 1;
}
