#include "patchloc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "box_scan.hpp"
#include "patchloc/geometry.hpp"

namespace patchloc {

CellIndex GridSpec::clamp(CellIndex c) const {
  for (int a = 0; a < 3; ++a) {
    c[a] = std::max<std::int32_t>(0, std::min(c[a], cells[a] - 1));
  }
  return c;
}

std::optional<CellIndex> GridSpec::cell_of_point(const Vec3& p) const {
  CellIndex c = {0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    const double rel = (p[a] - origin[a]) / spacing;
    if (rel < 0.0 || rel > cells[a]) {
      return std::nullopt;
    }
    // Points on the max face resolve to the last cell.
    c[a] = std::min(static_cast<std::int32_t>(rel), cells[a] - 1);
  }
  return c;
}

double grid_spacing_bound(int dim, double patch_radius, double min_angle) {
  if (patch_radius <= 0.0 || min_angle <= 0.0) {
    throw Error("grid_spacing_bound: patch radius and angle must be positive");
  }
  const double s = std::sin(min_angle);
  if (dim == 2) {
    return patch_radius * s / (std::sqrt(2.0) * (1.0 + s));
  }
  const double sh = std::sin(0.5 * min_angle);
  return 2.0 * patch_radius * s * sh / (std::sqrt(3.0) * (1.0 + s) * (1.0 + sh));
}

GridSpec grid_spec_from_metrics(int dim, const MeshMetrics& metrics, const Box& domain,
                                double padding) {
  GridSpec g;
  g.dim = dim;
  g.padding = padding >= 0.0 ? padding : 0.05 * domain.max_extent();
  // Safety factor keeps the bound strict after the ceil-rounding below.
  g.spacing = 0.999 * grid_spacing_bound(dim, metrics.patch_radius, metrics.min_angle);
  g.origin = domain.lo - Vec3{g.padding, g.padding, g.padding};
  for (int a = 0; a < dim; ++a) {
    const double extent = domain.extent()[a] + 2.0 * g.padding;
    g.cells[a] = std::max<std::int32_t>(1, static_cast<std::int32_t>(
                                               std::ceil(extent / g.spacing - 1e-12)));
  }
  if (dim == 2) {
    g.origin.z = 0.0;
    g.cells[2] = 1;
  }
  return g;
}

void mark_active_cells(const MeshTopology& mesh, const GridSpec& grid, CellTable& table) {
  using detail::cell_range;
  using detail::element_box;
  using detail::IndexRange;
  if (static_cast<std::int64_t>(table.active.size()) != grid.cell_count()) {
    table.resize(grid.cell_count());
  }
  std::fill(table.active.begin(), table.active.end(), 0);

  const double slack = detail::kCellSlack * grid.spacing;
  if (mesh.dim == 2) {
    // Cells crossed by an element edge.
    for (const auto& e : mesh.edges) {
      const Vec2 p0 = mesh.vertices[e[0]].xy();
      const Vec2 p1 = mesh.vertices[e[1]].xy();
      Box eb{mesh.vertices[e[0]], mesh.vertices[e[0]]};
      eb.expand(mesh.vertices[e[1]]);
      const IndexRange r = cell_range(grid, eb);
      for (std::int32_t j = r.lo[1]; j <= r.hi[1]; ++j) {
        for (std::int32_t i = r.lo[0]; i <= r.hi[0]; ++i) {
          const CellIndex c{i, j, 0};
          const Vec2 lo = grid.cell_lo(c).xy() - Vec2{slack, slack};
          const Vec2 hi = grid.cell_hi(c).xy() + Vec2{slack, slack};
          if (segment_box_intersection(p0, p1, lo, hi)) {
            table.active[grid.linear_index(c)] = 1;
          }
        }
      }
    }
  } else {
    // Cells crossed by an element face.
    const Vec3 puff{slack, slack, slack};
    for (const auto& f : mesh.faces) {
      const Vec3& a = mesh.vertices[f[0]];
      const Vec3& b = mesh.vertices[f[1]];
      const Vec3& c3 = mesh.vertices[f[2]];
      Box fb{a, a};
      fb.expand(b);
      fb.expand(c3);
      const IndexRange r = cell_range(grid, fb);
      for (std::int32_t k = r.lo[2]; k <= r.hi[2]; ++k) {
        for (std::int32_t j = r.lo[1]; j <= r.hi[1]; ++j) {
          for (std::int32_t i = r.lo[0]; i <= r.hi[0]; ++i) {
            const CellIndex c{i, j, k};
            if (triangle_box_intersect(a, b, c3, grid.cell_lo(c) - puff,
                                       grid.cell_hi(c) + puff)) {
              table.active[grid.linear_index(c)] = 1;
            }
          }
        }
      }
    }
  }

  // Cells entirely inside an element.
  for (std::int32_t k = 0; k < mesh.n_elements(); ++k) {
    const IndexRange r = cell_range(grid, element_box(mesh, k));
    for (std::int32_t kk = r.lo[2]; kk <= r.hi[2]; ++kk) {
      for (std::int32_t j = r.lo[1]; j <= r.hi[1]; ++j) {
        for (std::int32_t i = r.lo[0]; i <= r.hi[0]; ++i) {
          const CellIndex c{i, j, kk};
          const std::int64_t lin = grid.linear_index(c);
          if (table.active[lin]) continue;
          if (detail::cell_inside_element(mesh, k, grid.cell_lo(c), grid.cell_hi(c))) {
            table.active[lin] = 1;
          }
        }
      }
    }
  }
}

void dump_cell_table(const GridSpec& grid, const CellTable& table, std::ostream& out) {
  out << "# cell active vertex edge host\n";
  out << "# grid dim=" << grid.dim << " spacing=" << grid.spacing << " cells=" << grid.cells[0]
      << 'x' << grid.cells[1] << 'x' << grid.cells[2] << '\n';
  for (std::int64_t id = 0; id < grid.cell_count(); ++id) {
    out << id << ' ' << int(table.active[id]) << ' ' << table.cell_vertex[id] << ' '
        << table.cell_edge[id] << ' ' << table.cell_host[id] << '\n';
  }
}

}  // namespace patchloc
