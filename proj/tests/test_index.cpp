#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "patchloc/baselines.hpp"
#include "patchloc/geometry.hpp"
#include "patchloc/index.hpp"
#include "test_support.hpp"

using namespace patchloc;
using patchloc::testing::Rng;
using patchloc::testing::unit_cube;
using patchloc::testing::unit_square;

namespace {

// Checks that every in-domain sample of every active cell has its
// brute-force host inside the patch of the cell's assigned vertex (and edge
// where one is assigned).
void check_patch_soundness(const MeshTopology& mesh, const LocatorIndex& index,
                           int random_samples) {
  Rng rng(101);
  const auto& grid = index.grid;
  const double pull = 1e-9 * grid.spacing;
  for (std::int64_t cell = 0; cell < grid.cell_count(); ++cell) {
    if (!index.cells.active[cell]) continue;
    REQUIRE(index.cells.cell_vertex[cell] != kNone);
    const auto i = static_cast<std::int32_t>(cell % grid.cells[0]);
    const auto rest = cell / grid.cells[0];
    const CellIndex ci{i, static_cast<std::int32_t>(rest % grid.cells[1]),
                       static_cast<std::int32_t>(rest / grid.cells[1])};
    const Vec3 lo = grid.cell_lo(ci);
    const Vec3 hi = grid.cell_hi(ci);

    std::vector<Vec3> samples;
    samples.push_back(grid.cell_center(ci));
    const int corners = mesh.dim == 3 ? 8 : 4;
    for (int corner = 0; corner < corners; ++corner) {
      samples.push_back({(corner & 1) ? hi.x - pull : lo.x + pull,
                         (corner & 2) ? hi.y - pull : lo.y + pull,
                         mesh.dim == 3 ? ((corner & 4) ? hi.z - pull : lo.z + pull) : 0.0});
    }
    for (int s = 0; s < random_samples; ++s) {
      samples.push_back({rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y),
                         mesh.dim == 3 ? rng.uniform(lo.z, hi.z) : 0.0});
    }

    const std::int32_t v = index.cells.cell_vertex[cell];
    const std::int32_t e = index.cells.cell_edge[cell];
    for (const Vec3& p : samples) {
      const LocateOutcome host = brute_force_locate(p, mesh, index.tolerance);
      if (!host.inside()) continue;  // sample fell outside the domain
      const auto& patch = mesh.vertex_elements[v];
      const bool in_patch = std::find(patch.begin(), patch.end(), host.element) !=
                            patch.end();
      REQUIRE(in_patch);
      if (e != kNone) {
        const auto& edge_patch = mesh.edge_elements[e];
        const bool in_edge_patch =
            std::find(edge_patch.begin(), edge_patch.end(), host.element) !=
            edge_patch.end();
        REQUIRE(in_edge_patch);
      }
    }
  }
}

void check_fan_partition(const MeshTopology& mesh, const LocatorIndex& index) {
  if (mesh.dim == 2) {
    for (std::int32_t v = 0; v < mesh.n_vertices(); ++v) {
      const auto angles = index.fan_angles_of(v);
      const auto sectors = index.fan_sectors_of(v);
      REQUIRE(angles.size() == mesh.vertex_edges[v].size());
      for (std::size_t i = 1; i < angles.size(); ++i) {
        CHECK(angles[i - 1] < angles[i]);
      }
      std::multiset<std::int32_t> payloads(sectors.begin(), sectors.end());
      std::multiset<std::int32_t> expected(mesh.vertex_elements[v].begin(),
                                           mesh.vertex_elements[v].end());
      const auto exterior = static_cast<std::int64_t>(payloads.count(kNone));
      if (mesh.vertex_on_boundary[v]) {
        CHECK(exterior >= 1);
      } else {
        CHECK(exterior == 0);
      }
      payloads.erase(kNone);
      CHECK(payloads == expected);
    }
  } else {
    for (std::int32_t e = 0; e < mesh.n_edges(); ++e) {
      const auto sectors = index.fan_sectors_of(e);
      const auto angles = index.fan_angles_of(e);
      for (std::size_t i = 1; i < angles.size(); ++i) {
        CHECK(angles[i - 1] < angles[i]);
      }
      std::multiset<std::int32_t> payloads(sectors.begin(), sectors.end());
      std::multiset<std::int32_t> expected(mesh.edge_elements[e].begin(),
                                           mesh.edge_elements[e].end());
      const auto exterior = static_cast<std::int64_t>(payloads.count(kNone));
      if (mesh.edge_on_boundary[e]) {
        CHECK(exterior >= 1);
      } else {
        CHECK(exterior == 0);
      }
      payloads.erase(kNone);
      CHECK(payloads == expected);
    }
  }
}

}  // namespace

TEST_CASE("two-triangle square: every active cell resolved") {
  const auto mesh = generate_structured_mesh(2, unit_square(), 1);
  const auto index = build_index(mesh);
  check_patch_soundness(mesh, index, 8);

  // Cells strictly inside a triangle carry the host shortcut.
  const auto& grid = index.grid;
  bool found_host = false;
  for (std::int64_t cell = 0; cell < grid.cell_count(); ++cell) {
    if (index.cells.cell_host[cell] != kNone) {
      found_host = true;
      break;
    }
  }
  CHECK(found_host);
}

TEST_CASE("host shortcut soundness") {
  const auto mesh = generate_structured_mesh(2, unit_square(), 4);
  const auto index = build_index(mesh);
  const auto& grid = index.grid;
  for (std::int64_t cell = 0; cell < grid.cell_count(); ++cell) {
    const std::int32_t host = index.cells.cell_host[cell];
    if (host == kNone) continue;
    const auto i = static_cast<std::int32_t>(cell % grid.cells[0]);
    const auto j = static_cast<std::int32_t>(cell / grid.cells[0]);
    const Vec3 lo = grid.cell_lo({i, j, 0});
    const Vec3 hi = grid.cell_hi({i, j, 0});
    for (int corner = 0; corner < 4; ++corner) {
      const Vec3 p{(corner & 1) ? hi.x : lo.x, (corner & 2) ? hi.y : lo.y, 0.0};
      CHECK(element_contains(mesh, host, p, index.tolerance) != Containment::Outside);
    }
  }
}

TEST_CASE("vertex fans on a single equilateral triangle") {
  const auto mesh = MeshTopology::build(
      2, {{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2, 0}}, {{0, 1, 2}});
  for (std::int32_t v = 0; v < 3; ++v) {
    const auto fan = build_vertex_fan(mesh, v);
    CHECK(fan.angles.size() == 2);
    CHECK(fan.sectors.size() == 2);
    const int ext = static_cast<int>(std::count(fan.sectors.begin(), fan.sectors.end(),
                                                kNone));
    CHECK(ext == 1);
    const int in = static_cast<int>(std::count(fan.sectors.begin(), fan.sectors.end(), 0));
    CHECK(in == 1);
  }
}

TEST_CASE("corner fan of the unit square") {
  const auto mesh = generate_structured_mesh(2, unit_square(), 1);
  // Vertex 0 sits at the origin with rays to (1,0), (1,1), (0,1).
  const auto fan = build_vertex_fan(mesh, 0);
  REQUIRE(fan.angles.size() == 3);
  CHECK(std::count(fan.sectors.begin(), fan.sectors.end(), kNone) == 1);
  // Both elements appear.
  CHECK(std::count(fan.sectors.begin(), fan.sectors.end(), 0) == 1);
  CHECK(std::count(fan.sectors.begin(), fan.sectors.end(), 1) == 1);
}

TEST_CASE("interior vertex fan on structured mesh has six mapped sectors") {
  const auto mesh = generate_structured_mesh(2, unit_square(), 10);
  std::int32_t interior = kNone;
  for (std::int32_t v = 0; v < mesh.n_vertices(); ++v) {
    if (!mesh.vertex_on_boundary[v]) {
      interior = v;
      break;
    }
  }
  REQUIRE(interior != kNone);
  const auto fan = build_vertex_fan(mesh, interior);
  CHECK(fan.angles.size() == 6);
  CHECK(std::count(fan.sectors.begin(), fan.sectors.end(), kNone) == 0);
  std::set<std::int32_t> distinct(fan.sectors.begin(), fan.sectors.end());
  CHECK(distinct.size() == 6);
}

TEST_CASE("edge fans on the six-tet cube") {
  const auto mesh = generate_structured_mesh(3, unit_cube(), 1);
  for (std::int32_t e = 0; e < mesh.n_edges(); ++e) {
    const auto fan = build_edge_fan(mesh, e);
    CHECK(fan.anchor == mesh.edges[e][0]);
    std::multiset<std::int32_t> payloads(fan.sectors.begin(), fan.sectors.end());
    std::multiset<std::int32_t> expected(mesh.edge_elements[e].begin(),
                                         mesh.edge_elements[e].end());
    if (!mesh.edge_on_boundary[e]) {
      // Interior edge: sectors tile the full turn, no exterior flag.
      CHECK(payloads.count(kNone) == 0);
      CHECK(fan.sectors.size() == mesh.edge_elements[e].size());
    } else {
      CHECK(payloads.count(kNone) >= 1);
      payloads.erase(kNone);
    }
    CHECK(payloads == expected);
  }
  // The cube diagonal is interior and shared by all six tets.
  const std::int32_t diag = mesh.edge_index(0, 7);
  REQUIRE(diag != kNone);
  CHECK(build_edge_fan(mesh, diag).sectors.size() == 6);
}

TEST_CASE("an edge shared by four tetrahedra gets a four-sector fan") {
  const auto mesh = generate_structured_mesh(3, unit_cube(), 2);
  bool found = false;
  for (std::int32_t e = 0; e < mesh.n_edges() && !found; ++e) {
    if (!mesh.edge_on_boundary[e] && mesh.edge_elements[e].size() == 4) {
      const auto fan = build_edge_fan(mesh, e);
      CHECK(fan.sectors.size() == 4);
      CHECK(std::count(fan.sectors.begin(), fan.sectors.end(), kNone) == 0);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("2D patch soundness sweep") {
  for (int n : {4, 10}) {
    const auto mesh = generate_structured_mesh(2, unit_square(), n);
    const auto index = build_index(mesh);
    check_patch_soundness(mesh, index, 4);
    check_fan_partition(mesh, index);
  }
}

TEST_CASE("mixed-mesh patch soundness sweep") {
  const auto mesh = generate_mixed_mesh(unit_square(), 6);
  const auto index = build_index(mesh);
  check_patch_soundness(mesh, index, 4);
  check_fan_partition(mesh, index);
}

TEST_CASE("3D patch soundness sweep") {
  const auto mesh = generate_structured_mesh(3, unit_cube(), 2);
  const auto index = build_index(mesh);
  check_patch_soundness(mesh, index, 4);
  check_fan_partition(mesh, index);
  CHECK(index.stats.patch_edge_cells > 0);
}

TEST_CASE("jittered meshes keep the patch guarantees") {
  {
    const auto mesh = patchloc::testing::jittered_mesh(2, 6, 2024);
    double area = 0.0;
    for (std::int32_t k = 0; k < mesh.n_elements(); ++k) area += element_measure(mesh, k);
    REQUIRE(area == doctest::Approx(1.0).epsilon(1e-10));
    const auto index = build_index(mesh);
    check_patch_soundness(mesh, index, 4);
    check_fan_partition(mesh, index);
  }
  {
    const auto mesh = patchloc::testing::jittered_mesh(3, 2, 2025);
    double vol = 0.0;
    for (std::int32_t k = 0; k < mesh.n_elements(); ++k) vol += element_measure(mesh, k);
    REQUIRE(vol == doctest::Approx(1.0).epsilon(1e-10));
    const auto index = build_index(mesh);
    check_patch_soundness(mesh, index, 4);
    check_fan_partition(mesh, index);
  }
}

TEST_CASE("single tetrahedron build resolves every active cell") {
  const auto mesh = MeshTopology::build(
      3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 2, 3}});
  const auto index = build_index(mesh);
  const auto& grid = index.grid;
  std::int64_t active = 0;
  std::int64_t with_edge = 0;
  for (std::int64_t cell = 0; cell < grid.cell_count(); ++cell) {
    if (!index.cells.active[cell]) continue;
    ++active;
    CHECK(index.cells.cell_vertex[cell] != kNone);
    if (index.cells.cell_edge[cell] != kNone) ++with_edge;
  }
  CHECK(active > 0);
  CHECK(with_edge > 0);
  check_patch_soundness(mesh, index, 4);
}

TEST_CASE("3D host shortcuts contain all cell corners") {
  const auto mesh = generate_structured_mesh(3, unit_cube(), 2);
  const auto index = build_index(mesh);
  const auto& grid = index.grid;
  std::int64_t hosts = 0;
  for (std::int64_t cell = 0; cell < grid.cell_count(); ++cell) {
    const std::int32_t host = index.cells.cell_host[cell];
    if (host == kNone) continue;
    ++hosts;
    const auto i = static_cast<std::int32_t>(cell % grid.cells[0]);
    const auto rest = cell / grid.cells[0];
    const CellIndex ci{i, static_cast<std::int32_t>(rest % grid.cells[1]),
                       static_cast<std::int32_t>(rest / grid.cells[1])};
    const Vec3 lo = grid.cell_lo(ci);
    const Vec3 hi = grid.cell_hi(ci);
    for (int corner = 0; corner < 8; ++corner) {
      const Vec3 p{(corner & 1) ? hi.x : lo.x, (corner & 2) ? hi.y : lo.y,
                   (corner & 4) ? hi.z : lo.z};
      CHECK(element_contains(mesh, host, p, index.tolerance) != Containment::Outside);
    }
  }
  CHECK(hosts > 0);
}

TEST_CASE("build determinism and parallel equivalence") {
  const auto mesh2 = generate_structured_mesh(2, unit_square(), 8);
  const auto a = build_index(mesh2);
  const auto b = build_index(mesh2);
  CHECK(a.cells == b.cells);
  CHECK(a.fan_offsets == b.fan_offsets);
  CHECK(a.fan_sectors == b.fan_sectors);

  BuildConfig parallel;
  parallel.parallel = true;
  const auto c = build_index(mesh2, parallel);
  CHECK(a.cells == c.cells);
  CHECK(a.fan_sectors == c.fan_sectors);

  const auto mesh3 = generate_structured_mesh(3, unit_cube(), 2);
  const auto s3 = build_index(mesh3);
  const auto p3 = build_index(mesh3, parallel);
  CHECK(s3.cells == p3.cells);
  CHECK(s3.fan_offsets == p3.fan_offsets);
  CHECK(s3.fan_sectors == p3.fan_sectors);
}

TEST_CASE("build visit counts grow linearly with refinement") {
  std::vector<std::int64_t> visits;
  for (int n : {10, 20, 40}) {
    const auto mesh = generate_structured_mesh(2, unit_square(), n);
    const auto index = build_index(mesh);
    visits.push_back(index.stats.edge_visits + index.stats.element_visits);
  }
  for (std::size_t i = 1; i < visits.size(); ++i) {
    const double ratio = static_cast<double>(visits[i]) / visits[i - 1];
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 6.0);
  }
}

TEST_CASE("build config controls and stats") {
  const auto mesh = generate_structured_mesh(2, unit_square(), 4);
  BuildConfig config;
  config.patch_radius_override = 0.01;
  config.seed = 42;
  const auto index = build_index(mesh, config);
  CHECK(index.metrics.patch_radius == 0.01);
  CHECK(index.stats.seed == 42);
  CHECK(index.stats.active_cells > 0);
  const std::string json = index.stats.to_json();
  CHECK(json.find("\"active_cells\"") != std::string::npos);

  BuildConfig bad;
  bad.patch_radius_override = 10.0;  // above the admissible cap
  CHECK_THROWS_AS(build_index(mesh, bad), Error);
}
