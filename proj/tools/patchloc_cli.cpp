// Command-line driver: mesh generation, index builds, point location and
// the random-walk benchmark.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "patchloc/baselines.hpp"
#include "patchloc/bench.hpp"
#include "patchloc/locator.hpp"
#include "patchloc/mesh_io.hpp"

using namespace patchloc;

namespace {

std::vector<Vec3> read_points(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open points file: " + path);
  }
  std::vector<Vec3> points;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    Vec3 p;
    if (!(ls >> p.x >> p.y)) {
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      throw ParseError(path, line_no, "bad point line");
    }
    if (dim == 3 && !(ls >> p.z)) {
      throw ParseError(path, line_no, "expected 3 coordinates");
    }
    points.push_back(p);
  }
  return points;
}

void write_lines(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot write file: " + path);
  }
  out << content;
}

int run(int argc, char** argv) {
  CLI::App app{"patch-searching point locator for unstructured meshes"};
  app.require_subcommand(1);

  // gen-mesh
  auto* gen = app.add_subcommand("gen-mesh", "generate a structured mesh file");
  int gen_dim = 2;
  int gen_n = 10;
  std::string gen_out;
  std::string gen_kind = "tri";
  gen->add_option("--dim", gen_dim, "mesh dimension (2 or 3)");
  gen->add_option("--n", gen_n, "subdivisions per axis")->required();
  gen->add_option("--out", gen_out, "output mesh path (native format)")->required();
  gen->add_option("--kind", gen_kind, "tri (default) or mixed (2D triangle/quad)");

  // build
  auto* build = app.add_subcommand("build", "build the locator index and report stats");
  std::string build_mesh;
  double build_wstar = 0.0;
  double build_tau = -1.0;
  std::string build_out;
  std::string build_dump;
  bool build_parallel = false;
  build->add_option("--mesh", build_mesh, "mesh file")->required();
  build->add_option("--w-star", build_wstar, "working patch radius override");
  build->add_option("--tau", build_tau, "background box padding");
  build->add_option("--out", build_out, "write build stats JSON here (default stdout)");
  build->add_option("--dump-cells", build_dump, "write the per-cell table here");
  build->add_flag("--parallel", build_parallel, "build with OpenMP");

  // locate
  auto* loc = app.add_subcommand("locate", "locate a file of points");
  std::string loc_mesh;
  std::string loc_points;
  std::string loc_out;
  double loc_wstar = 0.0;
  double loc_tau = -1.0;
  bool loc_parallel = false;
  loc->add_option("--mesh", loc_mesh, "mesh file")->required();
  loc->add_option("--points", loc_points, "points file, one point per line")->required();
  loc->add_option("--out", loc_out, "outcome file, one element id per line");
  loc->add_option("--w-star", loc_wstar, "working patch radius override");
  loc->add_option("--tau", loc_tau, "background box padding");
  loc->add_flag("--parallel", loc_parallel, "locate with OpenMP");

  // bench
  auto* bench = app.add_subcommand("bench", "random-walk locate benchmark");
  std::string bench_mesh;
  std::vector<double> bench_deltas;
  int bench_steps = 10;
  std::int64_t bench_particles = 10000;
  std::uint64_t bench_seed = 1;
  std::string bench_method = "patch";
  double bench_wstar = 0.0;
  double bench_tau = -1.0;
  std::string bench_out;
  std::string bench_format = "table";
  std::string bench_outcomes;
  bool bench_parallel = false;
  int bench_repeats = 1;
  bench->add_option("--mesh", bench_mesh, "mesh file")->required();
  bench->add_option("--delta", bench_deltas, "step scale(s), repeatable");
  bench->add_option("--steps", bench_steps, "walk steps per particle");
  bench->add_option("--particles", bench_particles, "particle count");
  bench->add_option("--seed", bench_seed, "RNG seed");
  bench->add_option("--method", bench_method, "patch | walk | auxgrid | brute | all");
  bench->add_option("--w-star", bench_wstar, "working patch radius override");
  bench->add_option("--tau", bench_tau, "background box padding");
  bench->add_option("--out", bench_out, "write the report here (default stdout)");
  bench->add_option("--format", bench_format, "csv | json | table");
  bench->add_option("--outcomes", bench_outcomes, "write per-step host ids here");
  bench->add_flag("--parallel", bench_parallel, "patch method uses OpenMP");
  bench->add_option("--repeats", bench_repeats, "timing repeats per step (min is kept)");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    const Box domain = gen_dim == 3 ? Box{{0, 0, 0}, {1, 1, 1}} : Box{{0, 0, 0}, {1, 1, 0}};
    MeshTopology mesh;
    if (gen_kind == "mixed") {
      if (gen_dim != 2) throw Error("--kind mixed requires --dim 2");
      mesh = generate_mixed_mesh(domain, gen_n);
    } else if (gen_kind == "tri") {
      mesh = generate_structured_mesh(gen_dim, domain, gen_n);
    } else {
      throw Error("unknown --kind: " + gen_kind);
    }
    save_mesh_native(mesh, gen_out);
    std::cout << "wrote " << gen_out << ": dim " << mesh.dim << ", "
              << mesh.n_vertices() << " vertices, " << mesh.n_elements()
              << " elements\n";
    return 0;
  }

  if (build->parsed()) {
    const MeshTopology mesh = load_mesh(build_mesh);
    BuildConfig config;
    config.patch_radius_override = build_wstar;
    config.padding = build_tau;
    config.parallel = build_parallel;
    const LocatorIndex index = build_index(mesh, config);
    const std::string stats = index.stats.to_json();
    if (build_out.empty()) {
      std::cout << stats << '\n';
    } else {
      write_lines(build_out, stats + "\n");
    }
    if (!build_dump.empty()) {
      std::ofstream dump(build_dump);
      if (!dump) throw Error("cannot write file: " + build_dump);
      dump_cell_table(index.grid, index.cells, dump);
    }
    return 0;
  }

  if (loc->parsed()) {
    const MeshTopology mesh = load_mesh(loc_mesh);
    BuildConfig config;
    config.patch_radius_override = loc_wstar;
    config.padding = loc_tau;
    const LocatorIndex index = build_index(mesh, config);
    const auto points = read_points(loc_points, mesh.dim);
    const auto outcomes = locate_batch(points, index, loc_parallel);
    std::ostringstream out;
    for (const LocateOutcome& o : outcomes) {
      out << o.element << '\n';
    }
    if (loc_out.empty()) {
      std::cout << out.str();
    } else {
      write_lines(loc_out, out.str());
    }
    return 0;
  }

  // bench
  const MeshTopology mesh = load_mesh(bench_mesh);
  if (bench_deltas.empty()) bench_deltas.push_back(1.0);
  std::vector<Method> methods;
  if (bench_method == "all") {
    methods = {Method::Patch, Method::Walk, Method::AuxGrid, Method::Brute};
  } else {
    methods = {method_from_name(bench_method)};
  }
  BenchReport report;
  std::ostringstream outcome_stream;
  for (Method m : methods) {
    for (double delta : bench_deltas) {
      WalkConfig config;
      config.particles = bench_particles;
      config.steps = bench_steps;
      config.delta = delta;
      config.seed = bench_seed;
      config.method = m;
      config.patch_radius_override = bench_wstar;
      config.padding = bench_tau;
      config.parallel = bench_parallel;
      config.timing_repeats = bench_repeats;
      ExperimentOutput out = run_experiment(mesh, config);
      report.dim = out.report.dim;
      report.n_elements = out.report.n_elements;
      report.mesh_size = std::max(report.mesh_size, out.report.mesh_size);
      if (m == Method::Patch) {
        report.grid_spacing = out.report.grid_spacing;
        report.active_cells = out.report.active_cells;
      }
      report.entries.push_back(out.report.entries[0]);
      if (!bench_outcomes.empty()) {
        for (const auto& step : out.outcomes) {
          for (std::int32_t id : step) outcome_stream << id << '\n';
        }
      }
    }
  }
  ReportFormat format = ReportFormat::Table;
  if (bench_format == "csv") format = ReportFormat::Csv;
  else if (bench_format == "json") format = ReportFormat::Json;
  else if (bench_format != "table") throw Error("unknown --format: " + bench_format);
  const std::string text = emit_report(report, format);
  if (bench_out.empty()) {
    std::cout << text;
    if (format != ReportFormat::Csv) std::cout << '\n';
  } else {
    write_lines(bench_out, text);
  }
  if (!bench_outcomes.empty()) {
    write_lines(bench_outcomes, outcome_stream.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
}
