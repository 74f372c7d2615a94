#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "patchloc/geometry.hpp"
#include "patchloc/grid.hpp"
#include "patchloc/mesh.hpp"

namespace patchloc {

// Angular fan around a vertex: edge directions sorted by pseudo-angle, one
// payload element per sector, -1 for the exterior sector at boundary
// vertices.
struct VertexFan {
  std::int32_t vertex = kNone;
  std::vector<PseudoAngle> angles;
  std::vector<std::int32_t> sectors;

  bool operator==(const VertexFan&) const = default;
};

// 3D analogue: directions of the edges fanning around an edge's anchor
// vertex, projected into the plane perpendicular to the edge.
struct EdgeFan {
  std::int32_t edge = kNone;
  std::int32_t anchor = kNone;
  PlaneBasis basis;
  std::vector<PseudoAngle> angles;
  std::vector<std::int32_t> sectors;
};

VertexFan build_vertex_fan(const MeshTopology& mesh, std::int32_t vertex);
EdgeFan build_edge_fan(const MeshTopology& mesh, std::int32_t edge);

struct BuildConfig {
  double patch_radius_override = 0.0;  // > 0: absolute working radius
  double tolerance = -1.0;             // < 0: default 1e-12 * mesh_size
  double padding = -1.0;               // < 0: default 0.05 * max extent
  std::uint64_t seed = 0;              // recorded, unused by the build
  bool parallel = false;               // OpenMP build; table is bit-identical
};

struct BuildStats {
  std::int64_t active_cells = 0;
  std::int64_t host_cells = 0;        // cells entirely inside one element
  std::int64_t edge_assigned = 0;     // vertex map set by the edge pass
  std::int64_t patch_edge_cells = 0;  // cells carrying an edge assignment
  std::int64_t face_single = 0;       // one crossing face resolved the cell
  std::int64_t face_pair = 0;         // shared-edge projection resolved the cell
  std::int64_t fallback_cells = 0;    // resolved by hosting the cell center
  std::int64_t edge_visits = 0;       // cells visited across all edge boxes
  std::int64_t face_visits = 0;
  std::int64_t element_visits = 0;
  double edge_pass_seconds = 0.0;
  double face_pass_seconds = 0.0;
  double element_pass_seconds = 0.0;
  double fan_seconds = 0.0;
  double total_seconds = 0.0;
  std::uint64_t seed = 0;

  std::string to_json() const;
};

// Query-time state: grid, per-cell maps, and the fan tables (per vertex in
// 2D, per edge in 3D) stored in CSR form.
struct LocatorIndex {
  const MeshTopology* mesh = nullptr;
  MeshMetrics metrics;
  GridSpec grid;
  CellTable cells;
  double tolerance = 0.0;

  std::vector<std::int64_t> fan_offsets;
  std::vector<PseudoAngle> fan_angles;
  std::vector<std::int32_t> fan_sectors;
  std::vector<std::int32_t> fan_anchor;   // 3D: anchor vertex per edge
  std::vector<PlaneBasis> fan_basis;      // 3D: plane frame per edge

  BuildStats stats;

  std::span<const PseudoAngle> fan_angles_of(std::int32_t id) const {
    return {fan_angles.data() + fan_offsets[id],
            static_cast<std::size_t>(fan_offsets[id + 1] - fan_offsets[id])};
  }
  std::span<const std::int32_t> fan_sectors_of(std::int32_t id) const {
    return {fan_sectors.data() + fan_offsets[id],
            static_cast<std::size_t>(fan_offsets[id + 1] - fan_offsets[id])};
  }
};

LocatorIndex build_index(const MeshTopology& mesh, const BuildConfig& config = {});
LocatorIndex build_index_2d(const MeshTopology& mesh, const MeshMetrics& metrics,
                            const GridSpec& grid, const BuildConfig& config = {});
LocatorIndex build_index_3d(const MeshTopology& mesh, const MeshMetrics& metrics,
                            const GridSpec& grid, const BuildConfig& config = {});

}  // namespace patchloc
