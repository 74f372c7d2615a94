#include "patchloc/index.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "box_scan.hpp"
#include "patchloc/baselines.hpp"

namespace patchloc {

namespace {

using detail::cell_range;
using detail::edge_box;
using detail::element_box;
using detail::IndexRange;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// One assignment produced by the edge pass. Replays in ascending edge order:
// the largest edge id hitting a cell wins, which reproduces the sequential
// overwrite semantics for any thread count.
struct EdgeWrite {
  std::int64_t cell;
  std::int32_t edge;
  std::int32_t vertex;
  std::int32_t patch_edge;  // kNone unless the far-from-vertices test passed
};

template <typename Fn>
void for_cells_in(const IndexRange& r, Fn&& fn) {
  for (std::int32_t k = r.lo[2]; k <= r.hi[2]; ++k) {
    for (std::int32_t j = r.lo[1]; j <= r.hi[1]; ++j) {
      for (std::int32_t i = r.lo[0]; i <= r.hi[0]; ++i) {
        fn(CellIndex{i, j, k});
      }
    }
  }
}

std::int32_t lowest_vertex(const MeshTopology& mesh, std::int32_t element) {
  const auto& elem = mesh.elements[element];
  return *std::min_element(elem.begin(), elem.end());
}

std::int32_t lowest_edge(const MeshTopology& mesh, std::int32_t element) {
  const auto& elem = mesh.elements[element];
  std::int32_t best = kNone;
  if (mesh.dim == 2) {
    const int n = static_cast<int>(elem.size());
    for (int i = 0; i < n; ++i) {
      const std::int32_t e = mesh.edge_index(elem[i], elem[(i + 1) % n]);
      if (best == kNone || e < best) best = e;
    }
  } else {
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        const std::int32_t e = mesh.edge_index(elem[i], elem[j]);
        if (best == kNone || e < best) best = e;
      }
    }
  }
  return best;
}

std::int32_t lowest_face_edge(const MeshTopology& mesh, std::int32_t face) {
  const auto& f = mesh.faces[face];
  std::int32_t best = kNone;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const std::int32_t e = mesh.edge_index(f[i], f[j]);
      if (best == kNone || e < best) best = e;
    }
  }
  return best;
}

struct BuildScratch {
  std::vector<std::int32_t> writer_edge;          // per cell, merge arbiter
  std::vector<std::pair<std::int64_t, std::int32_t>> face_hits;  // (cell, face)
};

// Rethrows the first error raised inside a parallel loop after the region
// ends; OpenMP regions must not leak exceptions.
class ErrorCollector {
 public:
  template <typename Fn>
  void run(Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& ex) {
#pragma omp critical(patchloc_error_collector)
      {
        if (!failed_) {
          failed_ = true;
          message_ = ex.what();
        }
      }
    }
  }
  void rethrow() const {
    if (failed_) throw Error(message_);
  }

 private:
  bool failed_ = false;
  std::string message_;
};

// Edge pass, 2D: every cell of the edge's index box crossed by the segment
// is mapped to the segment vertex nearest to the crossing point.
void edge_pass_2d(const MeshTopology& mesh, const GridSpec& grid, LocatorIndex& index,
                  BuildScratch& scratch, bool parallel) {
  std::vector<EdgeWrite> writes;
  std::int64_t visits = 0;
  const double slack = detail::kCellSlack * grid.spacing;
  const auto n_edges = mesh.n_edges();

#pragma omp parallel if (parallel) reduction(+ : visits)
  {
    std::vector<EdgeWrite> local;
#pragma omp for schedule(dynamic, 64) nowait
    for (std::int64_t e = 0; e < n_edges; ++e) {
      const Vec2 p0 = mesh.vertices[mesh.edges[e][0]].xy();
      const Vec2 p1 = mesh.vertices[mesh.edges[e][1]].xy();
      const IndexRange r = cell_range(grid, edge_box(mesh, static_cast<std::int32_t>(e)));
      for_cells_in(r, [&](const CellIndex& c) {
        ++visits;
        const Vec2 lo = grid.cell_lo(c).xy() - Vec2{slack, slack};
        const Vec2 hi = grid.cell_hi(c).xy() + Vec2{slack, slack};
        const auto interval = segment_box_interval(p0, p1, lo, hi);
        if (!interval) return;
        const double t = 0.5 * (interval->first + interval->second);
        const Vec2 q = p0 + (p1 - p0) * t;
        const std::int32_t v = (q - p0).norm2() < (q - p1).norm2() ? mesh.edges[e][0]
                                                                   : mesh.edges[e][1];
        local.push_back({grid.linear_index(c), static_cast<std::int32_t>(e), v, kNone});
      });
    }
#pragma omp critical(patchloc_edge_pass_2d)
    writes.insert(writes.end(), local.begin(), local.end());
  }

  // Replay rule: the largest edge id hitting a cell wins, reproducing the
  // sequential overwrite order for any thread count.
  auto& writer = scratch.writer_edge;
  writer.assign(grid.cell_count(), kNone);
  for (const EdgeWrite& w : writes) {
    index.cells.active[w.cell] = 1;
    if (w.edge > writer[w.cell]) {
      writer[w.cell] = w.edge;
      index.cells.cell_vertex[w.cell] = w.vertex;
    }
  }
  index.stats.edge_visits += visits;
  index.stats.edge_assigned += static_cast<std::int64_t>(writes.size());
}

// Edge pass, 3D: cells whose circumscribed ball meets the edge. Assignments
// far from both edge vertices additionally record the edge itself.
void edge_pass_3d(const MeshTopology& mesh, const GridSpec& grid, LocatorIndex& index,
                  BuildScratch& scratch, bool parallel) {
  std::vector<EdgeWrite> writes;
  std::int64_t visits = 0;
  const double ball_radius =
      0.5 * std::sqrt(3.0) * grid.spacing + detail::kCellSlack * grid.spacing;
  const double capture = index.metrics.vertex_capture_radius;
  const auto n_edges = mesh.n_edges();

#pragma omp parallel if (parallel) reduction(+ : visits)
  {
    std::vector<EdgeWrite> local;
#pragma omp for schedule(dynamic, 16) nowait
    for (std::int64_t e = 0; e < n_edges; ++e) {
      const Vec3& p0 = mesh.vertices[mesh.edges[e][0]];
      const Vec3& p1 = mesh.vertices[mesh.edges[e][1]];
      // Inflated by one layer: the cell ball sticks out of the cell.
      const IndexRange r =
          cell_range(grid, edge_box(mesh, static_cast<std::int32_t>(e)), 1);
      for_cells_in(r, [&](const CellIndex& c) {
        ++visits;
        const auto hit =
            segment_ball_intersection(p0, p1, grid.cell_center(c), ball_radius);
        if (!hit) return;
        const double t = 0.5 * (hit->first + hit->second);
        const Vec3 q = p0 + (p1 - p0) * t;
        const double d0 = (q - p0).norm();
        const double d1 = (q - p1).norm();
        EdgeWrite w;
        w.cell = grid.linear_index(c);
        w.edge = static_cast<std::int32_t>(e);
        w.vertex = d0 < d1 ? mesh.edges[e][0] : mesh.edges[e][1];
        w.patch_edge =
            (d0 > capture && d1 > capture) ? static_cast<std::int32_t>(e) : kNone;
        local.push_back(w);
      });
    }
#pragma omp critical(patchloc_edge_pass_3d)
    writes.insert(writes.end(), local.begin(), local.end());
  }

  // Replay rule: the vertex map follows the largest edge id hitting the
  // cell; the edge map follows the largest edge id whose distance test
  // passed. Matches the sequential listing, where a later near-vertex hit
  // overwrites the vertex but leaves the stored edge alone.
  auto& writer = scratch.writer_edge;
  writer.assign(grid.cell_count(), kNone);
  std::vector<std::int32_t> writer_psi(grid.cell_count(), kNone);
  for (const EdgeWrite& w : writes) {
    if (w.edge > writer[w.cell]) {
      writer[w.cell] = w.edge;
      index.cells.cell_vertex[w.cell] = w.vertex;
    }
    if (w.patch_edge != kNone && w.edge > writer_psi[w.cell]) {
      writer_psi[w.cell] = w.edge;
      index.cells.cell_edge[w.cell] = w.patch_edge;
    }
  }
  index.stats.edge_visits += visits;
  index.stats.edge_assigned += static_cast<std::int64_t>(writes.size());
}

// Face pass, 3D: collect (cell, face) incidences for every cell crossed by a
// face; cells gain their active flag here.
void face_pass_3d(const MeshTopology& mesh, const GridSpec& grid, LocatorIndex& index,
                  BuildScratch& scratch, bool parallel) {
  auto& hits = scratch.face_hits;
  std::int64_t visits = 0;
  const auto n_faces = mesh.n_faces();
  const double slack = detail::kCellSlack * grid.spacing;
  const double half = 0.5 * grid.spacing + slack;
  const Vec3 puff{slack, slack, slack};

#pragma omp parallel if (parallel) reduction(+ : visits)
  {
    std::vector<std::pair<std::int64_t, std::int32_t>> local;
#pragma omp for schedule(dynamic, 16) nowait
    for (std::int64_t f = 0; f < n_faces; ++f) {
      const Vec3& a = mesh.vertices[mesh.faces[f][0]];
      const Vec3& b = mesh.vertices[mesh.faces[f][1]];
      const Vec3& c = mesh.vertices[mesh.faces[f][2]];
      Box fb{a, a};
      fb.expand(b);
      fb.expand(c);
      const Vec3 n = (b - a).cross(c - a);
      const IndexRange r = cell_range(grid, fb);
      const double plane_reach = half * (std::abs(n.x) + std::abs(n.y) + std::abs(n.z));
      for_cells_in(r, [&](const CellIndex& ci) {
        ++visits;
        // Plane prefilter rejects the bulk of the box cheaply.
        const Vec3 center = grid.cell_center(ci);
        if (std::abs(n.dot(center - a)) > plane_reach) return;
        if (triangle_box_intersect(a, b, c, grid.cell_lo(ci) - puff,
                                   grid.cell_hi(ci) + puff)) {
          local.push_back({grid.linear_index(ci), static_cast<std::int32_t>(f)});
        }
      });
    }
#pragma omp critical(patchloc_face_pass_3d)
    hits.insert(hits.end(), local.begin(), local.end());
  }

  std::sort(hits.begin(), hits.end());
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
  for (const auto& [cell, face] : hits) {
    index.cells.active[cell] = 1;
  }
  index.stats.face_visits += visits;
}

// Leftover pass, 3D: resolve cells via their crossing-face sets, exactly in
// listing order. Cells with one crossing face adopt it; cells with several
// use the first same-element pair and the shared-edge projection point.
void leftover_pass_3d(const MeshTopology& mesh, const GridSpec& grid, LocatorIndex& index,
                      BuildScratch& scratch, bool parallel) {
  auto& hits = scratch.face_hits;
  // Group boundaries in the sorted (cell, face) list.
  std::vector<std::int64_t> starts;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (i == 0 || hits[i].first != hits[i - 1].first) {
      starts.push_back(static_cast<std::int64_t>(i));
    }
  }
  starts.push_back(static_cast<std::int64_t>(hits.size()));
  const double capture = index.metrics.vertex_capture_radius;
  const auto n_groups = static_cast<std::int64_t>(starts.size()) - 1;
  std::int64_t face_single = 0;
  std::int64_t face_pair = 0;
  ErrorCollector errors;

#pragma omp parallel for schedule(static) reduction(+ : face_single, face_pair) \
    if (parallel)
  for (std::int64_t g = 0; g < n_groups; ++g) {
    errors.run([&] {
      const std::int64_t lo = starts[g];
      const std::int64_t hi = starts[g + 1];
      const std::int64_t cell = hits[lo].first;
      if (index.cells.cell_vertex[cell] != kNone && index.cells.cell_edge[cell] != kNone) {
        return;
      }
      const std::int64_t count = hi - lo;
      if (count == 1) {
        const std::int32_t f = hits[lo].second;
        index.cells.cell_vertex[cell] = mesh.faces[f][0];  // faces store sorted ids
        if (index.cells.cell_edge[cell] == kNone) {
          index.cells.cell_edge[cell] = lowest_face_edge(mesh, f);
        }
        ++face_single;
        return;
      }
      // First qualifying pair in (element id, face id) order: the lowest
      // element owning at least two of the crossing faces.
      std::int32_t best_elem = kNone;
      for (std::int64_t i = lo; i < hi; ++i) {
        for (const std::int32_t k : mesh.face_elements[hits[i].second]) {
          if (k == kNone) continue;
          if (best_elem != kNone && k >= best_elem) continue;
          int owned = 0;
          for (std::int64_t j = lo; j < hi && owned < 2; ++j) {
            const auto& fe = mesh.face_elements[hits[j].second];
            if (fe[0] == k || fe[1] == k) ++owned;
          }
          if (owned >= 2) best_elem = k;
        }
      }
      if (best_elem == kNone) {
        // Every pair spans distinct elements; legitimate when the edge pass
        // already resolved the vertex (the cell grazes a shared edge).
        if (index.cells.cell_vertex[cell] != kNone) return;
        throw Error("index build: cell " + std::to_string(cell) +
                    " crosses faces of disjoint elements and has no vertex assignment");
      }
      std::int32_t f1 = kNone;
      std::int32_t f2 = kNone;
      for (std::int64_t j = lo; j < hi && f2 == kNone; ++j) {
        const auto& fe = mesh.face_elements[hits[j].second];
        if (fe[0] == best_elem || fe[1] == best_elem) {
          (f1 == kNone ? f1 : f2) = hits[j].second;
        }
      }
      // Shared edge of the two faces: their two common vertices.
      std::int32_t shared[2];
      int ns = 0;
      for (std::int32_t va : mesh.faces[f1]) {
        for (std::int32_t vb : mesh.faces[f2]) {
          if (va == vb && ns < 2) shared[ns++] = va;
        }
      }
      if (ns != 2) {
        throw Error("index build: crossing faces of one element share no edge");
      }
      const std::int32_t e = mesh.edge_index(shared[0], shared[1]);
      const Vec3& va = mesh.vertices[mesh.edges[e][0]];
      const Vec3& vb = mesh.vertices[mesh.edges[e][1]];
      const std::int64_t lx = cell % grid.cells[0];
      const std::int64_t rest = cell / grid.cells[0];
      const CellIndex ci{static_cast<std::int32_t>(lx),
                         static_cast<std::int32_t>(rest % grid.cells[1]),
                         static_cast<std::int32_t>(rest / grid.cells[1])};
      const Vec3 chi = chi_point(va, vb, grid.cell_center(ci));
      const double d0 = (chi - va).norm();
      const double d1 = (chi - vb).norm();
      index.cells.cell_vertex[cell] = d0 < d1 ? mesh.edges[e][0] : mesh.edges[e][1];
      if (d0 > capture && d1 > capture && index.cells.cell_edge[cell] == kNone) {
        index.cells.cell_edge[cell] = e;
      }
      ++face_pair;
    });
  }
  errors.rethrow();
  index.stats.face_single = face_single;
  index.stats.face_pair = face_pair;
}

// Element pass (both dimensions): cells entirely inside an element become
// host-shortcut cells. A cell fits in at most one element, so the direct
// writes never race.
void element_pass(const MeshTopology& mesh, const GridSpec& grid, LocatorIndex& index,
                  bool parallel) {
  std::int64_t visits = 0;
  const auto n_elements = mesh.n_elements();

#pragma omp parallel for schedule(dynamic, 16) reduction(+ : visits) if (parallel)
  for (std::int64_t k = 0; k < n_elements; ++k) {
    const IndexRange r = cell_range(grid, element_box(mesh, static_cast<std::int32_t>(k)));
    const std::int32_t phi = lowest_vertex(mesh, static_cast<std::int32_t>(k));
    const std::int32_t psi = mesh.dim == 3 ? lowest_edge(mesh, static_cast<std::int32_t>(k))
                                           : kNone;
    for_cells_in(r, [&](const CellIndex& c) {
      ++visits;
      if (!detail::cell_inside_element(mesh, static_cast<std::int32_t>(k), grid.cell_lo(c),
                                       grid.cell_hi(c))) {
        return;
      }
      const std::int64_t lin = grid.linear_index(c);
      index.cells.active[lin] = 1;
      index.cells.cell_host[lin] = static_cast<std::int32_t>(k);
      index.cells.cell_vertex[lin] = phi;
      if (mesh.dim == 3 && index.cells.cell_edge[lin] == kNone) {
        index.cells.cell_edge[lin] = psi;
      }
    });
  }
  index.stats.element_visits += visits;
  index.stats.host_cells =
      std::count_if(index.cells.cell_host.begin(), index.cells.cell_host.end(),
                    [](std::int32_t h) { return h != kNone; });
}

// Active cells the geometric passes missed on floating-point slop: host the
// cell center (then pulled-in corners) by brute force and take the nearest
// vertex of that element.
void fallback_pass(const MeshTopology& mesh, const GridSpec& grid, LocatorIndex& index) {
  const double tol = index.tolerance;
  for (std::int64_t cell = 0; cell < grid.cell_count(); ++cell) {
    if (!index.cells.active[cell] || index.cells.cell_vertex[cell] != kNone) continue;
    const std::int64_t lx = cell % grid.cells[0];
    const std::int64_t rest = cell / grid.cells[0];
    const CellIndex ci{static_cast<std::int32_t>(lx),
                       static_cast<std::int32_t>(rest % grid.cells[1]),
                       static_cast<std::int32_t>(rest / grid.cells[1])};
    const Vec3 lo = grid.cell_lo(ci);
    const Vec3 hi = grid.cell_hi(ci);
    const double pull = 1e-9 * grid.spacing;
    std::vector<Vec3> samples{grid.cell_center(ci)};
    for (int corner = 0; corner < (mesh.dim == 3 ? 8 : 4); ++corner) {
      Vec3 p{(corner & 1) ? hi.x - pull : lo.x + pull,
             (corner & 2) ? hi.y - pull : lo.y + pull,
             mesh.dim == 3 ? ((corner & 4) ? hi.z - pull : lo.z + pull) : 0.0};
      samples.push_back(p);
    }
    std::int32_t host = kNone;
    Vec3 where;
    for (const Vec3& p : samples) {
      const LocateOutcome out = brute_force_locate(p, mesh, tol);
      if (out.inside()) {
        host = out.element;
        where = p;
        break;
      }
    }
    if (host == kNone) {
      throw Error("index build: active cell " + std::to_string(cell) +
                  " has no vertex assignment after all passes");
    }
    const auto& elem = mesh.elements[host];
    std::int32_t best = elem[0];
    double best_d = (mesh.vertices[elem[0]] - where).norm2();
    for (std::int32_t v : elem) {
      const double d = (mesh.vertices[v] - where).norm2();
      if (d < best_d) {
        best_d = d;
        best = v;
      }
    }
    index.cells.cell_vertex[cell] = best;
    ++index.stats.fallback_cells;
  }
}

void build_fans(const MeshTopology& mesh, LocatorIndex& index, bool parallel) {
  ErrorCollector errors;
  if (mesh.dim == 2) {
    const auto n = mesh.n_vertices();
    std::vector<VertexFan> fans(n);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t v = 0; v < n; ++v) {
      errors.run([&] { fans[v] = build_vertex_fan(mesh, static_cast<std::int32_t>(v)); });
    }
    errors.rethrow();
    index.fan_offsets.assign(n + 1, 0);
    for (std::int64_t v = 0; v < n; ++v) {
      index.fan_offsets[v + 1] = index.fan_offsets[v] +
                                 static_cast<std::int64_t>(fans[v].angles.size());
    }
    index.fan_angles.reserve(index.fan_offsets[n]);
    index.fan_sectors.reserve(index.fan_offsets[n]);
    for (const auto& fan : fans) {
      index.fan_angles.insert(index.fan_angles.end(), fan.angles.begin(), fan.angles.end());
      index.fan_sectors.insert(index.fan_sectors.end(), fan.sectors.begin(),
                               fan.sectors.end());
    }
  } else {
    const auto n = mesh.n_edges();
    std::vector<EdgeFan> fans(n);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t e = 0; e < n; ++e) {
      errors.run([&] { fans[e] = build_edge_fan(mesh, static_cast<std::int32_t>(e)); });
    }
    errors.rethrow();
    index.fan_offsets.assign(n + 1, 0);
    index.fan_anchor.resize(n);
    index.fan_basis.resize(n);
    for (std::int64_t e = 0; e < n; ++e) {
      index.fan_offsets[e + 1] = index.fan_offsets[e] +
                                 static_cast<std::int64_t>(fans[e].angles.size());
      index.fan_anchor[e] = fans[e].anchor;
      index.fan_basis[e] = fans[e].basis;
    }
    index.fan_angles.reserve(index.fan_offsets[n]);
    index.fan_sectors.reserve(index.fan_offsets[n]);
    for (const auto& fan : fans) {
      index.fan_angles.insert(index.fan_angles.end(), fan.angles.begin(), fan.angles.end());
      index.fan_sectors.insert(index.fan_sectors.end(), fan.sectors.begin(),
                               fan.sectors.end());
    }
  }
}

LocatorIndex make_base(const MeshTopology& mesh, const MeshMetrics& metrics,
                       const GridSpec& grid, const BuildConfig& config) {
  const double bound = grid_spacing_bound(mesh.dim, metrics.patch_radius, metrics.min_angle);
  if (grid.spacing > bound) {
    throw Error("index build: grid spacing exceeds the admissible bound");
  }
  LocatorIndex index;
  index.mesh = &mesh;
  index.metrics = metrics;
  index.grid = grid;
  index.tolerance =
      config.tolerance >= 0.0 ? config.tolerance : 1e-12 * metrics.mesh_size;
  index.cells.resize(grid.cell_count());
  index.stats.seed = config.seed;
  return index;
}

void finish_stats(LocatorIndex& index) {
  index.stats.active_cells = std::count(index.cells.active.begin(),
                                        index.cells.active.end(), std::uint8_t{1});
  index.stats.patch_edge_cells =
      std::count_if(index.cells.cell_edge.begin(), index.cells.cell_edge.end(),
                    [](std::int32_t e) { return e != kNone; });
}

}  // namespace

namespace {

struct FanRay {
  PseudoAngle angle;
  std::int32_t edge;
};

std::uint64_t ordered_key(std::int32_t a, std::int32_t b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(b));
}

// Whether c lies in the clockwise sector opened by a and closed by b.
bool cw_sector_contains(PseudoAngle a, PseudoAngle b, PseudoAngle c) {
  if (a.value < b.value) {
    return a.value <= c.value && c.value < b.value;
  }
  return c.value >= a.value || c.value < b.value;
}

void sort_and_check(std::vector<FanRay>& rays, const char* what, std::int32_t id) {
  std::sort(rays.begin(), rays.end(),
            [](const FanRay& a, const FanRay& b) { return a.angle < b.angle; });
  for (std::size_t i = 1; i < rays.size(); ++i) {
    if (!(rays[i - 1].angle < rays[i].angle)) {
      throw Error(std::string(what) + ": coincident directions at " + std::to_string(id));
    }
  }
}

// Fills sector payloads from an ordered (opening ray, closing ray) map.
template <typename Fan>
void assign_sectors(Fan& fan, const std::vector<FanRay>& rays,
                    const std::unordered_map<std::uint64_t, std::int32_t>& wedge) {
  const int n = static_cast<int>(rays.size());
  fan.angles.resize(n);
  fan.sectors.assign(n, kNone);
  for (int i = 0; i < n; ++i) {
    fan.angles[i] = rays[i].angle;
    auto it = wedge.find(ordered_key(rays[i].edge, rays[(i + 1) % n].edge));
    if (it != wedge.end()) fan.sectors[i] = it->second;
  }
}

Vec3 element_centroid(const MeshTopology& mesh, std::int32_t k) {
  Vec3 c{0, 0, 0};
  for (std::int32_t v : mesh.elements[k]) c = c + mesh.vertices[v];
  return c / static_cast<double>(mesh.elements[k].size());
}

}  // namespace

VertexFan build_vertex_fan(const MeshTopology& mesh, std::int32_t vertex) {
  const Vec2 origin = mesh.vertices[vertex].xy();
  std::vector<FanRay> rays;
  rays.reserve(mesh.vertex_edges[vertex].size());
  std::unordered_map<std::int32_t, PseudoAngle> angle_of;
  for (std::int32_t e : mesh.vertex_edges[vertex]) {
    const auto& ev = mesh.edges[e];
    const std::int32_t other = ev[0] == vertex ? ev[1] : ev[0];
    const Vec2 dir = mesh.vertices[other].xy() - origin;
    if (dir.norm2() == 0.0) {
      throw Error("vertex fan: zero-length incident edge");
    }
    const PseudoAngle angle = pseudo_angle(dir);
    rays.push_back({angle, e});
    angle_of.emplace(e, angle);
  }
  sort_and_check(rays, "vertex fan", vertex);

  // Each element owns the clockwise wedge between its two edges that
  // contains its centroid direction; the ordered pair keys the sector.
  std::unordered_map<std::uint64_t, std::int32_t> wedge;
  wedge.reserve(mesh.vertex_elements[vertex].size() * 2);
  for (std::int32_t k : mesh.vertex_elements[vertex]) {
    const auto pr = mesh.element_edges_at_vertex(k, vertex);
    const PseudoAngle toward = pseudo_angle(element_centroid(mesh, k).xy() - origin);
    if (cw_sector_contains(angle_of.at(pr[0]), angle_of.at(pr[1]), toward)) {
      wedge.emplace(ordered_key(pr[0], pr[1]), k);
    } else {
      wedge.emplace(ordered_key(pr[1], pr[0]), k);
    }
  }

  VertexFan fan;
  fan.vertex = vertex;
  assign_sectors(fan, rays, wedge);
  return fan;
}

EdgeFan build_edge_fan(const MeshTopology& mesh, std::int32_t edge) {
  EdgeFan fan;
  fan.edge = edge;
  fan.anchor = mesh.edges[edge][0];
  fan.basis = plane_basis_for_edge(mesh, edge);

  // Edges of the surrounding elements through the anchor, excluding the
  // owning edge itself; shared edges between neighbouring elements appear
  // once.
  std::vector<std::int32_t> ray_edges;
  for (std::int32_t k : mesh.edge_elements[edge]) {
    const auto pr = mesh.element_edges_at_vertex(k, fan.anchor, edge);
    ray_edges.push_back(pr[0]);
    ray_edges.push_back(pr[1]);
  }
  std::sort(ray_edges.begin(), ray_edges.end());
  ray_edges.erase(std::unique(ray_edges.begin(), ray_edges.end()), ray_edges.end());

  std::vector<FanRay> rays;
  rays.reserve(ray_edges.size());
  std::unordered_map<std::int32_t, PseudoAngle> angle_of;
  const Vec3 origin = mesh.vertices[fan.anchor];
  for (std::int32_t e : ray_edges) {
    const auto& ev = mesh.edges[e];
    const std::int32_t other = ev[0] == fan.anchor ? ev[1] : ev[0];
    const auto w = project_to_plane(mesh.vertices[other] - origin, fan.basis);
    if (!w) {
      throw Error("edge fan: incident edge parallel to the owning edge");
    }
    const PseudoAngle angle = pseudo_angle(*w);
    rays.push_back({angle, e});
    angle_of.emplace(e, angle);
  }
  sort_and_check(rays, "edge fan", edge);

  // Orient each element's projected wedge by its centroid direction.
  std::unordered_map<std::uint64_t, std::int32_t> wedge;
  wedge.reserve(mesh.edge_elements[edge].size() * 2);
  for (std::int32_t k : mesh.edge_elements[edge]) {
    const auto pr = mesh.element_edges_at_vertex(k, fan.anchor, edge);
    const auto toward = project_to_plane(element_centroid(mesh, k) - origin, fan.basis);
    if (!toward) {
      throw Error("edge fan: degenerate centroid projection");
    }
    const PseudoAngle tc = pseudo_angle(*toward);
    if (cw_sector_contains(angle_of.at(pr[0]), angle_of.at(pr[1]), tc)) {
      wedge.emplace(ordered_key(pr[0], pr[1]), k);
    } else {
      wedge.emplace(ordered_key(pr[1], pr[0]), k);
    }
  }

  assign_sectors(fan, rays, wedge);
  return fan;
}

LocatorIndex build_index_2d(const MeshTopology& mesh, const MeshMetrics& metrics,
                            const GridSpec& grid, const BuildConfig& config) {
  if (mesh.dim != 2) {
    throw Error("build_index_2d: not a 2D mesh");
  }
  const auto t_total = Clock::now();
  LocatorIndex index = make_base(mesh, metrics, grid, config);
  BuildScratch scratch;

  auto t0 = Clock::now();
  edge_pass_2d(mesh, grid, index, scratch, config.parallel);
  index.stats.edge_pass_seconds = seconds_since(t0);

  t0 = Clock::now();
  element_pass(mesh, grid, index, config.parallel);
  index.stats.element_pass_seconds = seconds_since(t0);

  fallback_pass(mesh, grid, index);

  t0 = Clock::now();
  build_fans(mesh, index, config.parallel);
  index.stats.fan_seconds = seconds_since(t0);

  finish_stats(index);
  index.stats.total_seconds = seconds_since(t_total);
  return index;
}

LocatorIndex build_index_3d(const MeshTopology& mesh, const MeshMetrics& metrics,
                            const GridSpec& grid, const BuildConfig& config) {
  if (mesh.dim != 3) {
    throw Error("build_index_3d: not a 3D mesh");
  }
  const auto t_total = Clock::now();
  LocatorIndex index = make_base(mesh, metrics, grid, config);
  BuildScratch scratch;

  auto t0 = Clock::now();
  edge_pass_3d(mesh, grid, index, scratch, config.parallel);
  index.stats.edge_pass_seconds = seconds_since(t0);

  t0 = Clock::now();
  face_pass_3d(mesh, grid, index, scratch, config.parallel);
  leftover_pass_3d(mesh, grid, index, scratch, config.parallel);
  index.stats.face_pass_seconds = seconds_since(t0);

  t0 = Clock::now();
  element_pass(mesh, grid, index, config.parallel);
  index.stats.element_pass_seconds = seconds_since(t0);

  fallback_pass(mesh, grid, index);

  t0 = Clock::now();
  build_fans(mesh, index, config.parallel);
  index.stats.fan_seconds = seconds_since(t0);

  finish_stats(index);
  index.stats.total_seconds = seconds_since(t_total);
  return index;
}

LocatorIndex build_index(const MeshTopology& mesh, const BuildConfig& config) {
  const MeshMetrics metrics = compute_metrics(mesh, config.patch_radius_override);
  const GridSpec grid =
      grid_spec_from_metrics(mesh.dim, metrics, mesh.bounds(), config.padding);
  return mesh.dim == 2 ? build_index_2d(mesh, metrics, grid, config)
                       : build_index_3d(mesh, metrics, grid, config);
}

std::string BuildStats::to_json() const {
  std::ostringstream out;
  out.precision(17);
  out << "{\"active_cells\":" << active_cells << ",\"host_cells\":" << host_cells
      << ",\"edge_assigned\":" << edge_assigned
      << ",\"patch_edge_cells\":" << patch_edge_cells << ",\"face_single\":" << face_single
      << ",\"face_pair\":" << face_pair << ",\"fallback_cells\":" << fallback_cells
      << ",\"edge_visits\":" << edge_visits << ",\"face_visits\":" << face_visits
      << ",\"element_visits\":" << element_visits
      << ",\"edge_pass_seconds\":" << edge_pass_seconds
      << ",\"face_pass_seconds\":" << face_pass_seconds
      << ",\"element_pass_seconds\":" << element_pass_seconds
      << ",\"fan_seconds\":" << fan_seconds << ",\"total_seconds\":" << total_seconds
      << ",\"seed\":" << seed << "}";
  return out.str();
}

}  // namespace patchloc
