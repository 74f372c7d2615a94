#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "patchloc/mesh.hpp"
#include "patchloc/vec.hpp"

namespace patchloc {

using CellIndex = std::array<std::int32_t, 3>;  // k = 0 in 2D

// Background Cartesian grid over the padded domain box. Spacing is equal in
// all axes; the box is rounded up to whole cells on the high side.
struct GridSpec {
  int dim = 2;
  Vec3 origin;
  double spacing = 0.0;
  std::array<std::int32_t, 3> cells = {0, 0, 1};
  double padding = 0.0;

  std::int64_t cell_count() const {
    return static_cast<std::int64_t>(cells[0]) * cells[1] * cells[2];
  }
  std::int64_t linear_index(std::int32_t i, std::int32_t j, std::int32_t k) const {
    return i + static_cast<std::int64_t>(cells[0]) *
                   (j + static_cast<std::int64_t>(cells[1]) * k);
  }
  std::int64_t linear_index(const CellIndex& c) const {
    return linear_index(c[0], c[1], c[2]);
  }

  // Per-axis floor((p - origin)/spacing), clamped so points on the max face
  // resolve to the last cell. Empty when p is outside the grid box.
  std::optional<CellIndex> cell_of_point(const Vec3& p) const;

  Vec3 cell_lo(const CellIndex& c) const {
    return {origin.x + c[0] * spacing, origin.y + c[1] * spacing,
            origin.z + c[2] * spacing};
  }
  Vec3 cell_hi(const CellIndex& c) const {
    return {origin.x + (c[0] + 1) * spacing, origin.y + (c[1] + 1) * spacing,
            origin.z + (c[2] + 1) * spacing};
  }
  Vec3 cell_center(const CellIndex& c) const {
    return {origin.x + (c[0] + 0.5) * spacing, origin.y + (c[1] + 0.5) * spacing,
            origin.z + (c[2] + 0.5) * spacing};
  }
  CellIndex clamp(CellIndex c) const;
};

// Largest admissible grid spacing for the patch-inclusion guarantee.
double grid_spacing_bound(int dim, double patch_radius, double min_angle);

// padding < 0 selects the default 0.05 * max extent of the domain box.
GridSpec grid_spec_from_metrics(int dim, const MeshMetrics& metrics, const Box& domain,
                                double padding = -1.0);

// Per-cell state filled in by the index build. cell_vertex/cell_edge/-host
// are kNone until assigned; cell_edge stays kNone for cells outside the
// edge-patch set.
struct CellTable {
  std::vector<std::uint8_t> active;
  std::vector<std::int32_t> cell_vertex;
  std::vector<std::int32_t> cell_edge;
  std::vector<std::int32_t> cell_host;

  void resize(std::int64_t n) {
    active.assign(n, 0);
    cell_vertex.assign(n, kNone);
    cell_edge.assign(n, kNone);
    cell_host.assign(n, kNone);
  }

  bool operator==(const CellTable&) const = default;
};

// Flags every cell whose closed box meets some closed element. This
// over-approximates |cell ∩ domain| > 0 only on measure-zero tangencies.
void mark_active_cells(const MeshTopology& mesh, const GridSpec& grid, CellTable& table);

// Debug dump: one line per cell "id active vertex edge host".
void dump_cell_table(const GridSpec& grid, const CellTable& table, std::ostream& out);

}  // namespace patchloc
