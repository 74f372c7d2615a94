// Compares the serial reference build/query paths against the OpenMP ones
// and verifies that both produce identical results.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "patchloc/locator.hpp"
#include "patchloc/mesh.hpp"

using namespace patchloc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Case {
  const char* name;
  MeshTopology mesh;
  std::int64_t queries;
};

void run_case(Case& c) {
  BuildConfig serial_cfg;
  auto t0 = Clock::now();
  const LocatorIndex serial = build_index(c.mesh, serial_cfg);
  const double t_build_serial = seconds_since(t0);

  BuildConfig parallel_cfg;
  parallel_cfg.parallel = true;
  t0 = Clock::now();
  const LocatorIndex parallel = build_index(c.mesh, parallel_cfg);
  const double t_build_parallel = seconds_since(t0);

  if (!(serial.cells == parallel.cells) || serial.fan_offsets != parallel.fan_offsets ||
      serial.fan_sectors != parallel.fan_sectors) {
    std::printf("%s: PARALLEL BUILD MISMATCH\n", c.name);
    std::exit(1);
  }

  std::mt19937_64 gen(2024);
  auto uniform = [&gen](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
  };
  std::vector<Vec3> points(c.queries);
  for (auto& p : points) {
    p = {uniform(0, 1), uniform(0, 1), c.mesh.dim == 3 ? uniform(0, 1) : 0.0};
  }

  // Warm-up, then timed passes.
  (void)locate_batch(points, serial, false);
  t0 = Clock::now();
  const auto out_serial = locate_batch(points, serial, false);
  const double t_loc_serial = seconds_since(t0);
  t0 = Clock::now();
  const auto out_parallel = locate_batch(points, serial, true);
  const double t_loc_parallel = seconds_since(t0);

  if (out_serial != out_parallel) {
    std::printf("%s: PARALLEL LOCATE MISMATCH\n", c.name);
    std::exit(1);
  }

  std::printf("%-14s %10.4f %10.4f %7.2fx %12.4f %12.4f %7.2fx\n", c.name,
              t_build_serial, t_build_parallel, t_build_serial / t_build_parallel,
              t_loc_serial, t_loc_parallel, t_loc_serial / t_loc_parallel);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel paths run serially\n");
#endif
  std::printf("%-14s %10s %10s %8s %12s %12s %8s\n", "case", "build[s]", "build-omp",
              "speedup", "locate[s]", "locate-omp", "speedup");

  Case c2{"2D n=80", generate_structured_mesh(2, {{0, 0, 0}, {1, 1, 0}}, 80), 2000000};
  run_case(c2);
  Case c3{"3D n=8", generate_structured_mesh(3, {{0, 0, 0}, {1, 1, 1}}, 8), 1000000};
  run_case(c3);
  std::printf("serial and OpenMP paths agree on all cases\n");
  return 0;
}
