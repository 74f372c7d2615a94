// Internal helpers shared by the active-cell marking and the index build:
// grid index ranges of bounding boxes and the box-in-convex-element test.
#pragma once

#include <algorithm>
#include <cmath>

#include "patchloc/grid.hpp"
#include "patchloc/mesh.hpp"

namespace patchloc::detail {

// Relative slack applied to cell boxes in the init-side intersection tests.
// Over-approximating the hit sets is safe (extra cells only widen candidate
// assignments); it guards exact-touching configurations against FP rounding.
inline constexpr double kCellSlack = 1e-9;

struct IndexRange {
  CellIndex lo;
  CellIndex hi;
};

inline IndexRange cell_range(const GridSpec& grid, const Box& b, int inflate = 0) {
  IndexRange r;
  for (int a = 0; a < 3; ++a) {
    r.lo[a] = 0;
    r.hi[a] = grid.dim > a ? grid.cells[a] - 1 : 0;
  }
  for (int a = 0; a < grid.dim; ++a) {
    const auto lo =
        static_cast<std::int32_t>(std::floor((b.lo[a] - grid.origin[a]) / grid.spacing));
    const auto hi =
        static_cast<std::int32_t>(std::floor((b.hi[a] - grid.origin[a]) / grid.spacing));
    r.lo[a] = std::max(0, lo - inflate);
    r.hi[a] = std::min(grid.cells[a] - 1, hi + inflate);
  }
  return r;
}

inline Box element_box(const MeshTopology& mesh, std::int32_t k) {
  const auto& elem = mesh.elements[k];
  Box b{mesh.vertices[elem[0]], mesh.vertices[elem[0]]};
  for (std::int32_t v : elem) b.expand(mesh.vertices[v]);
  return b;
}

inline Box edge_box(const MeshTopology& mesh, std::int32_t e) {
  Box b{mesh.vertices[mesh.edges[e][0]], mesh.vertices[mesh.edges[e][0]]};
  b.expand(mesh.vertices[mesh.edges[e][1]]);
  return b;
}

// Closed test: the cell box lies inside every inward halfspace of the convex
// element. Equivalent to all box corners lying in the element, via the
// support corner per plane.
inline bool cell_inside_element(const MeshTopology& mesh, std::int32_t k, const Vec3& lo,
                                const Vec3& hi) {
  const auto& elem = mesh.elements[k];
  const Vec3 center = (lo + hi) * 0.5;
  const Vec3 h = (hi - lo) * 0.5;
  if (mesh.dim == 2) {
    const int n = static_cast<int>(elem.size());
    for (int i = 0; i < n; ++i) {
      const Vec2 a = mesh.vertices[elem[i]].xy();
      const Vec2 b = mesh.vertices[elem[(i + 1) % n]].xy();
      const Vec2 nrm{-(b.y - a.y), b.x - a.x};  // inward for a CCW ring
      const double support =
          nrm.x * center.x + nrm.y * center.y - std::abs(nrm.x) * h.x - std::abs(nrm.y) * h.y;
      if (support < nrm.x * a.x + nrm.y * a.y) return false;
    }
    return true;
  }
  // Inward-wound faces of a positively oriented tetrahedron.
  static const int kF[4][3] = {{1, 3, 2}, {0, 2, 3}, {0, 3, 1}, {0, 1, 2}};
  const double vol6 = (mesh.vertices[elem[1]] - mesh.vertices[elem[0]])
                          .cross(mesh.vertices[elem[2]] - mesh.vertices[elem[0]])
                          .dot(mesh.vertices[elem[3]] - mesh.vertices[elem[0]]);
  const double orient = vol6 >= 0.0 ? 1.0 : -1.0;
  for (const auto& f : kF) {
    const Vec3& a = mesh.vertices[elem[f[0]]];
    const Vec3& b = mesh.vertices[elem[f[1]]];
    const Vec3& c = mesh.vertices[elem[f[2]]];
    const Vec3 nrm = (b - a).cross(c - a) * orient;
    const double support = nrm.dot(center) - std::abs(nrm.x) * h.x - std::abs(nrm.y) * h.y -
                           std::abs(nrm.z) * h.z;
    if (support < nrm.dot(a)) return false;
  }
  return true;
}

}  // namespace patchloc::detail
