#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "patchloc/index.hpp"
#include "patchloc/locator.hpp"
#include "patchloc/mesh.hpp"

namespace patchloc {

// mt19937_64 with explicit seeding; doubles are drawn from the top 53 bits
// so streams replicate across standard libraries.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

enum class Method { Patch, Walk, AuxGrid, Brute };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct WalkConfig {
  std::int64_t particles = 10000;
  int steps = 10;
  double delta = 1.0;
  std::uint64_t seed = 1;
  Method method = Method::Patch;
  double patch_radius_override = 0.0;
  double padding = -1.0;
  bool parallel = false;
  int timing_repeats = 1;  // locate re-runs per step; reported time is the min
};

struct MethodTiming {
  std::string method;
  double delta = 0.0;
  double init_seconds = 0.0;
  double locate_seconds = 0.0;
  std::vector<double> per_step_seconds;
  std::int64_t checks_passed = 0;
  std::int64_t checks_total = 0;

  bool operator==(const MethodTiming&) const = default;
};

struct BenchReport {
  int dim = 0;
  std::int64_t n_elements = 0;
  double mesh_size = 0.0;
  double grid_spacing = 0.0;
  std::int64_t active_cells = 0;
  std::vector<MethodTiming> entries;

  bool operator==(const BenchReport&) const = default;
};

struct ExperimentOutput {
  BenchReport report;
  // outcomes[step][particle]: host element id, -1 for outside
  std::vector<std::vector<std::int32_t>> outcomes;
  double max_step_ratio = 0.0;  // max |displacement| / (delta * h_K)
};

// Random-walk locate experiment: N particles walk `steps` times with
// displacements bounded by delta * h_K of the current host, re-sampled until
// they stay in the domain; each step's relocation with the configured method
// is timed and a 1% subsample is verified against the brute-force oracle.
ExperimentOutput run_experiment(const MeshTopology& mesh, const WalkConfig& config);

enum class ReportFormat { Csv, Json, Table };

std::string emit_report(const BenchReport& report, ReportFormat format);
BenchReport report_from_json(const std::string& text);

}  // namespace patchloc
