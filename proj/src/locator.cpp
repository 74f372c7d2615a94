#include "patchloc/locator.hpp"

#include <cmath>
#include <sstream>

namespace patchloc {

namespace {

// Any incident element hosts a point sitting on the vertex itself; the
// lowest id keeps the choice deterministic.
LocateOutcome lowest_incident(const MeshTopology& mesh, std::int32_t vertex) {
  return {mesh.vertex_elements[vertex].front()};
}

LocateOutcome lowest_edge_incident(const MeshTopology& mesh, std::int32_t edge) {
  return {mesh.edge_elements[edge].front()};
}

}  // namespace

LocateOutcome locate_2d(const Vec2& p, const LocatorIndex& index) {
  const auto cell = index.grid.cell_of_point({p.x, p.y, 0.0});
  if (!cell) return LocateOutcome::outside();
  const std::int64_t lin = index.grid.linear_index(*cell);
  if (!index.cells.active[lin]) return LocateOutcome::outside();
  const std::int32_t host = index.cells.cell_host[lin];
  if (host != kNone) return {host};

  const std::int32_t v = index.cells.cell_vertex[lin];
  const Vec2 dir = p - index.mesh->vertices[v].xy();
  if (dir.norm2() < index.tolerance * index.tolerance) {
    return lowest_incident(*index.mesh, v);
  }
  const int sector = sector_search(index.fan_angles_of(v), pseudo_angle(dir));
  const std::int32_t k = index.fan_sectors_of(v)[sector];
  return k == kNone ? LocateOutcome::outside() : LocateOutcome{k};
}

LocateOutcome locate_3d(const Vec3& p, const LocatorIndex& index) {
  const auto cell = index.grid.cell_of_point(p);
  if (!cell) return LocateOutcome::outside();
  std::int64_t lin = index.grid.linear_index(*cell);
  if (!index.cells.active[lin]) return LocateOutcome::outside();
  const std::int32_t host = index.cells.cell_host[lin];
  if (host != kNone) return {host};

  Vec3 q = p;
  if (index.cells.cell_edge[lin] == kNone) {
    // Moving step: project the query onto the sphere of radius w* around
    // the cell's vertex; the new point shares the host element and its cell
    // is guaranteed to carry an edge.
    const std::int32_t v = index.cells.cell_vertex[lin];
    const Vec3 dir = p - index.mesh->vertices[v];
    const double d = dir.norm();
    if (d < index.tolerance) {
      return lowest_incident(*index.mesh, v);
    }
    q = index.mesh->vertices[v] + dir * (index.metrics.patch_radius / d);
    const auto moved = index.grid.cell_of_point(q);
    if (!moved) return LocateOutcome::outside();
    lin = index.grid.linear_index(*moved);
    if (!index.cells.active[lin]) return LocateOutcome::outside();
    const std::int32_t moved_host = index.cells.cell_host[lin];
    if (moved_host != kNone) return {moved_host};
    if (index.cells.cell_edge[lin] == kNone) {
      std::ostringstream what;
      what << "locate_3d: moved query has no edge assignment (cell " << lin << ", p=("
           << p.x << ',' << p.y << ',' << p.z << "), moved=(" << q.x << ',' << q.y << ','
           << q.z << "), vertex " << v << ")";
      throw Error(what.str());
    }
  }

  const std::int32_t e = index.cells.cell_edge[lin];
  const std::int32_t anchor = index.fan_anchor[e];
  const auto w = project_to_plane(q - index.mesh->vertices[anchor], index.fan_basis[e]);
  if (!w) {
    // Query on the line through the edge: any surrounding element hosts it.
    return lowest_edge_incident(*index.mesh, e);
  }
  const int sector = sector_search(index.fan_angles_of(e), pseudo_angle(*w));
  const std::int32_t k = index.fan_sectors_of(e)[sector];
  return k == kNone ? LocateOutcome::outside() : LocateOutcome{k};
}

LocateOutcome locate(const Vec3& p, const LocatorIndex& index) {
  return index.mesh->dim == 2 ? locate_2d(p.xy(), index) : locate_3d(p, index);
}

std::vector<LocateOutcome> locate_batch(std::span<const Vec3> points,
                                        const LocatorIndex& index, bool parallel) {
  std::vector<LocateOutcome> out(points.size());
  const auto n = static_cast<std::int64_t>(points.size());
  bool failed = false;
  std::string message;
  if (index.mesh->dim == 2) {
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t i = 0; i < n; ++i) {
      out[i] = locate_2d(points[i].xy(), index);
    }
  } else {
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        out[i] = locate_3d(points[i], index);
      } catch (const std::exception& ex) {
        // Exceptions must not leak from the parallel region.
#pragma omp critical(patchloc_locate_batch)
        {
          failed = true;
          message = ex.what();
        }
      }
    }
  }
  if (failed) throw Error(message);
  return out;
}

}  // namespace patchloc
