#include "patchloc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "box_scan.hpp"
#include "patchloc/geometry.hpp"

namespace patchloc {

namespace {

double default_tol(const MeshTopology& mesh) {
  return 1e-12 * mesh.bounds().extent().norm();
}

}  // namespace

LocateOutcome brute_force_locate(const Vec3& p, const MeshTopology& mesh, double tol) {
  if (tol < 0.0) tol = default_tol(mesh);
  for (std::int32_t k = 0; k < mesh.n_elements(); ++k) {
    if (element_contains(mesh, k, p, tol) != Containment::Outside) {
      return {k};
    }
  }
  return LocateOutcome::outside();
}

namespace {

struct FacetCrossing {
  double t = std::numeric_limits<double>::max();
  int facet = -1;
};

// Earliest parameter >= t_min at which the segment leaves the element
// through one of its facets (outward component strictly positive).
FacetCrossing exit_facet_2d(const MeshTopology& mesh, std::int32_t k, const Vec2& p0,
                            const Vec2& p1, double t_min, double tol) {
  const auto& ring = mesh.elements[k];
  const int n = static_cast<int>(ring.size());
  const Vec2 d = p1 - p0;
  FacetCrossing best;
  for (int i = 0; i < n; ++i) {
    const Vec2 a = mesh.vertices[ring[i]].xy();
    const Vec2 b = mesh.vertices[ring[(i + 1) % n]].xy();
    const Vec2 edge = b - a;
    const Vec2 outward{edge.y, -edge.x};  // CCW ring
    const double denom = d.dot(outward);
    if (denom <= 0.0) continue;
    const double t = (a - p0).dot(outward) / denom;
    if (t < t_min || t > 1.0 + tol) continue;
    // Crossing point must lie on the facet segment.
    const Vec2 x = p0 + d * t;
    const double along = (x - a).dot(edge);
    const double len2 = edge.norm2();
    if (along < -tol * std::sqrt(len2) || along > len2 + tol * std::sqrt(len2)) continue;
    if (t < best.t) {
      best.t = t;
      best.facet = i;
    }
  }
  return best;
}

FacetCrossing exit_facet_3d(const MeshTopology& mesh, std::int32_t k, const Vec3& p0,
                            const Vec3& p1, double t_min, double tol) {
  const auto& elem = mesh.elements[k];
  const Vec3 d = p1 - p0;
  // Outward-wound faces of a positively oriented tetrahedron; face i is
  // opposite vertex i.
  static const int kF[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
  FacetCrossing best;
  for (int i = 0; i < 4; ++i) {
    const Vec3& a = mesh.vertices[elem[kF[i][0]]];
    const Vec3& b = mesh.vertices[elem[kF[i][1]]];
    const Vec3& c = mesh.vertices[elem[kF[i][2]]];
    const Vec3 outward = (b - a).cross(c - a);
    const double denom = d.dot(outward);
    if (denom <= 0.0) continue;
    const double t = (a - p0).dot(outward) / denom;
    if (t < t_min || t > 1.0 + tol) continue;
    const Vec3 x = p0 + d * t;
    const Vec3 nrm = outward / outward.norm();
    // In-plane containment: with this winding the interior of the face lies
    // on the positive side of each directed edge around nrm.
    bool on_face = true;
    const Vec3 tri[3] = {a, b, c};
    for (int j = 0; j < 3 && on_face; ++j) {
      const Vec3& u = tri[j];
      const Vec3& v = tri[(j + 1) % 3];
      const Vec3 e = v - u;
      if ((e.cross(x - u)).dot(nrm) < -tol * e.norm()) {
        on_face = false;
      }
    }
    if (!on_face) continue;
    if (t < best.t) {
      best.t = t;
      best.facet = i;
    }
  }
  return best;
}

std::int32_t facet_neighbour_2d(const MeshTopology& mesh, std::int32_t k, int facet) {
  const auto& ring = mesh.elements[k];
  const int n = static_cast<int>(ring.size());
  const std::int32_t e = mesh.edge_index(ring[facet], ring[(facet + 1) % n]);
  for (std::int32_t other : mesh.edge_elements[e]) {
    if (other != k) return other;
  }
  return kNone;
}

std::int32_t facet_neighbour_3d(const MeshTopology& mesh, std::int32_t k, int facet) {
  const auto& elem = mesh.elements[k];
  static const int kF[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
  const std::int32_t f = mesh.face_index(elem[kF[facet][0]], elem[kF[facet][1]],
                                         elem[kF[facet][2]]);
  const auto& fe = mesh.face_elements[f];
  return fe[0] == k ? fe[1] : fe[0];
}

}  // namespace

LocateOutcome neighbour_walk_locate(std::int32_t start_element, const Vec3& p_start,
                                    const Vec3& p_end, const MeshTopology& mesh,
                                    WalkStats* stats) {
  const double tol = default_tol(mesh);
  std::int32_t current = start_element;
  double t_cur = 0.0;
  std::int64_t guard = 0;
  const std::int64_t cap = mesh.n_elements() + 8;
  int stuck_retries = 0;

  while (true) {
    if (++guard > cap) {
      throw Error("neighbour_walk_locate: cycle guard tripped at element " +
                  std::to_string(current));
    }
    if (element_contains(mesh, current, p_end, tol) != Containment::Outside) {
      return {current};
    }
    const FacetCrossing crossing =
        mesh.dim == 2 ? exit_facet_2d(mesh, current, p_start.xy(), p_end.xy(), t_cur, tol)
                      : exit_facet_3d(mesh, current, p_start, p_end, t_cur, tol);
    if (crossing.facet < 0) {
      // Grazing a corner: nudge the parameter forward and retry.
      if (++stuck_retries > 16) {
        throw Error("neighbour_walk_locate: no exit facet from element " +
                    std::to_string(current));
      }
      t_cur += 1e-12;
      continue;
    }
    stuck_retries = 0;
    const std::int32_t next = mesh.dim == 2 ? facet_neighbour_2d(mesh, current, crossing.facet)
                                            : facet_neighbour_3d(mesh, current, crossing.facet);
    if (stats != nullptr) ++stats->crossings;
    if (next == kNone) {
      return LocateOutcome::outside();  // boundary facet crossed outward
    }
    current = next;
    t_cur = crossing.t + 1e-12;  // corner tie-break: step past the crossing
  }
}

CandidateListGrid build_candidate_grid(const MeshTopology& mesh, double spacing) {
  CandidateListGrid clg;
  clg.mesh = &mesh;
  if (spacing <= 0.0) {
    double h = 0.0;
    for (std::int32_t k = 0; k < mesh.n_elements(); ++k) {
      h = std::max(h, element_circumdiameter(mesh, k));
    }
    spacing = h;
  }
  const Box bounds = mesh.bounds();
  clg.tol = 1e-12 * bounds.extent().norm();
  clg.grid.dim = mesh.dim;
  clg.grid.spacing = spacing;
  clg.grid.origin = bounds.lo;
  clg.grid.padding = 0.0;
  for (int a = 0; a < mesh.dim; ++a) {
    clg.grid.cells[a] = std::max<std::int32_t>(
        1, static_cast<std::int32_t>(std::ceil(bounds.extent()[a] / spacing)));
  }
  if (mesh.dim == 2) {
    clg.grid.cells[2] = 1;
    clg.grid.origin.z = 0.0;
  }

  // CSR fill in two passes; per-cell lists end up in ascending element order.
  const std::int64_t n_cells = clg.grid.cell_count();
  std::vector<std::int64_t> counts(n_cells, 0);
  for (std::int32_t k = 0; k < mesh.n_elements(); ++k) {
    const auto r = detail::cell_range(clg.grid, detail::element_box(mesh, k));
    for (std::int32_t kk = r.lo[2]; kk <= r.hi[2]; ++kk) {
      for (std::int32_t j = r.lo[1]; j <= r.hi[1]; ++j) {
        for (std::int32_t i = r.lo[0]; i <= r.hi[0]; ++i) {
          ++counts[clg.grid.linear_index(i, j, kk)];
        }
      }
    }
  }
  clg.offsets.assign(n_cells + 1, 0);
  for (std::int64_t c = 0; c < n_cells; ++c) {
    clg.offsets[c + 1] = clg.offsets[c] + counts[c];
  }
  clg.candidates.resize(clg.offsets.back());
  std::vector<std::int64_t> cursor(clg.offsets.begin(), clg.offsets.end() - 1);
  for (std::int32_t k = 0; k < mesh.n_elements(); ++k) {
    const auto r = detail::cell_range(clg.grid, detail::element_box(mesh, k));
    for (std::int32_t kk = r.lo[2]; kk <= r.hi[2]; ++kk) {
      for (std::int32_t j = r.lo[1]; j <= r.hi[1]; ++j) {
        for (std::int32_t i = r.lo[0]; i <= r.hi[0]; ++i) {
          clg.candidates[cursor[clg.grid.linear_index(i, j, kk)]++] = k;
        }
      }
    }
  }
  return clg;
}

LocateOutcome aux_grid_locate(const Vec3& p, const CandidateListGrid& clg) {
  const auto cell = clg.grid.cell_of_point(p);
  if (!cell) return LocateOutcome::outside();
  const std::int64_t lin = clg.grid.linear_index(*cell);
  for (std::int64_t i = clg.offsets[lin]; i < clg.offsets[lin + 1]; ++i) {
    const std::int32_t k = clg.candidates[i];
    if (element_contains(*clg.mesh, k, p, clg.tol) != Containment::Outside) {
      return {k};
    }
  }
  return LocateOutcome::outside();
}

}  // namespace patchloc
