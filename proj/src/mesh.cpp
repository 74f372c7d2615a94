#include "patchloc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace patchloc {

namespace {

constexpr std::uint64_t kFaceIdLimit = 1ull << 21;

std::uint64_t edge_key(std::int32_t a, std::int32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

std::uint64_t face_key(std::array<std::int32_t, 3> f) {
  std::sort(f.begin(), f.end());
  return (static_cast<std::uint64_t>(f[0]) << 42) |
         (static_cast<std::uint64_t>(f[1]) << 21) | static_cast<std::uint64_t>(f[2]);
}

double polygon_area(const std::vector<Vec3>& verts, const std::vector<std::int32_t>& ring) {
  double a2 = 0.0;
  const int n = static_cast<int>(ring.size());
  for (int i = 0; i < n; ++i) {
    const Vec3& u = verts[ring[i]];
    const Vec3& v = verts[ring[(i + 1) % n]];
    a2 += u.x * v.y - v.x * u.y;
  }
  return 0.5 * a2;
}

double tet_volume6(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a);
}

double interior_angle(const Vec2& u, const Vec2& corner, const Vec2& w) {
  const Vec2 p = u - corner;
  const Vec2 q = w - corner;
  return std::atan2(std::abs(p.cross(q)), p.dot(q));
}

struct TriangleMetrics {
  double circumdiameter;
  double width;
  double inradius;
  double min_angle;
};

TriangleMetrics triangle_metrics(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double la = (c - b).norm();
  const double lb = (a - c).norm();
  const double lc = (b - a).norm();
  const double area = 0.5 * std::abs((b - a).cross(c - a));
  const double lmax = std::max(la, std::max(lb, lc));
  TriangleMetrics m;
  m.circumdiameter = la * lb * lc / (2.0 * area);
  m.width = 2.0 * area / lmax;  // smallest altitude
  m.inradius = 2.0 * area / (la + lb + lc);
  m.min_angle = std::min({interior_angle(b, a, c), interior_angle(a, b, c),
                          interior_angle(a, c, b)});
  return m;
}

Vec3 tet_circumcenter(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const Vec3 r1 = b - a;
  const Vec3 r2 = c - a;
  const Vec3 r3 = d - a;
  const double q1 = 0.5 * r1.norm2();
  const double q2 = 0.5 * r2.norm2();
  const double q3 = 0.5 * r3.norm2();
  const double det = r1.dot(r2.cross(r3));
  if (det == 0.0) {
    throw Error("tet_circumcenter: degenerate tetrahedron");
  }
  const Vec3 x = (r2.cross(r3) * q1 + r3.cross(r1) * q2 + r1.cross(r2) * q3) / det;
  return a + x;
}

// Exact tetrahedron width: minimum of the four vertex-to-opposite-face
// distances and the three distances between opposite edge pairs.
double tet_width(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const Vec3 v[4] = {a, b, c, d};
  static const int kFaces[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  double w = std::numeric_limits<double>::max();
  for (int i = 0; i < 4; ++i) {
    const Vec3& p = v[kFaces[i][0]];
    const Vec3 n = (v[kFaces[i][1]] - p).cross(v[kFaces[i][2]] - p);
    w = std::min(w, std::abs(n.dot(v[i] - p)) / n.norm());
  }
  static const int kPairs[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
  for (const auto& pr : kPairs) {
    const Vec3 d1 = v[pr[1]] - v[pr[0]];
    const Vec3 d2 = v[pr[3]] - v[pr[2]];
    const Vec3 n = d1.cross(d2);
    const double len = n.norm();
    if (len > 0.0) {
      w = std::min(w, std::abs(n.dot(v[pr[2]] - v[pr[0]])) / len);
    }
  }
  return w;
}

double tet_min_dihedral(const Vec3 verts[4]) {
  static const int kEdges[6][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2},
                                   {1, 2, 0, 3}, {1, 3, 0, 2}, {2, 3, 0, 1}};
  double best = std::numeric_limits<double>::max();
  for (const auto& e : kEdges) {
    const Vec3& p = verts[e[0]];
    Vec3 dir = verts[e[1]] - p;
    dir = dir / dir.norm();
    Vec3 u = verts[e[2]] - p;
    Vec3 w = verts[e[3]] - p;
    u = u - dir * u.dot(dir);
    w = w - dir * w.dot(dir);
    best = std::min(best, std::atan2(u.cross(w).norm(), u.dot(w)));
  }
  return best;
}

double tet_min_face_angle(const Vec3 verts[4]) {
  static const int kFaces[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  double best = std::numeric_limits<double>::max();
  for (const auto& f : kFaces) {
    for (int i = 0; i < 3; ++i) {
      const Vec3& corner = verts[f[i]];
      Vec3 p = verts[f[(i + 1) % 3]] - corner;
      Vec3 q = verts[f[(i + 2) % 3]] - corner;
      best = std::min(best, std::atan2(p.cross(q).norm(), p.dot(q)));
    }
  }
  return best;
}

}  // namespace

std::int32_t MeshTopology::edge_index(std::int32_t a, std::int32_t b) const {
  auto it = edge_lookup_.find(edge_key(a, b));
  return it == edge_lookup_.end() ? kNone : it->second;
}

std::int32_t MeshTopology::face_index(std::int32_t a, std::int32_t b, std::int32_t c) const {
  auto it = face_lookup_.find(face_key({a, b, c}));
  return it == face_lookup_.end() ? kNone : it->second;
}

std::array<std::int32_t, 2> MeshTopology::element_edges_at_vertex(std::int32_t k,
                                                                  std::int32_t v,
                                                                  std::int32_t exclude) const {
  const auto& elem = elements[k];
  std::array<std::int32_t, 2> out = {kNone, kNone};
  int found = 0;
  if (dim == 2) {
    const int n = static_cast<int>(elem.size());
    for (int i = 0; i < n; ++i) {
      if (elem[i] == v) {
        out[0] = edge_index(v, elem[(i + n - 1) % n]);
        out[1] = edge_index(v, elem[(i + 1) % n]);
        found = 2;
        break;
      }
    }
  } else {
    for (std::int32_t other : elem) {
      if (other == v) continue;
      const std::int32_t e = edge_index(v, other);
      if (e == exclude) continue;
      if (found < 2) out[found] = e;
      ++found;
    }
  }
  if (found != 2 || out[0] == kNone || out[1] == kNone) {
    throw Error("element_edges_at_vertex: vertex/element mismatch");
  }
  if (out[0] > out[1]) std::swap(out[0], out[1]);
  return out;
}

Box MeshTopology::bounds() const { return bounds_; }

MeshTopology MeshTopology::build(int dim, std::vector<Vec3> vertices,
                                 std::vector<std::vector<std::int32_t>> elements) {
  if (dim != 2 && dim != 3) {
    throw Error("MeshTopology: dim must be 2 or 3");
  }
  if (vertices.empty() || elements.empty()) {
    throw Error("MeshTopology: empty mesh");
  }
  MeshTopology m;
  m.dim = dim;
  m.vertices = std::move(vertices);
  m.elements = std::move(elements);

  const auto nv = static_cast<std::int32_t>(m.vertices.size());
  // Index validation.
  for (std::size_t k = 0; k < m.elements.size(); ++k) {
    auto& elem = m.elements[k];
    const std::size_t want = dim == 3 ? 4 : elem.size();
    if ((dim == 3 && elem.size() != 4) || (dim == 2 && elem.size() < 3)) {
      throw Error("element " + std::to_string(k) + ": wrong vertex count");
    }
    (void)want;
    for (std::int32_t v : elem) {
      if (v < 0 || v >= nv) {
        throw Error("element " + std::to_string(k) + ": vertex index out of range");
      }
    }
    auto sorted = elem;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error("element " + std::to_string(k) + ": repeated vertex index");
    }
  }

  // Orient positively and reject degenerate elements.
  m.bounds_ = Box{m.vertices.front(), m.vertices.front()};
  for (const Vec3& v : m.vertices) m.bounds_.expand(v);
  const double scale = m.bounds_.extent().norm();
  const double measure_floor = 1e-14 * std::pow(scale, dim);
  for (std::size_t k = 0; k < m.elements.size(); ++k) {
    auto& elem = m.elements[k];
    if (dim == 2) {
      const double area = polygon_area(m.vertices, elem);
      if (std::abs(area) < measure_floor) {
        throw Error("element " + std::to_string(k) + ": degenerate (zero area)");
      }
      if (area < 0.0) std::reverse(elem.begin(), elem.end());
      if (elem.size() > 3) {
        // Convexity of the CCW ring.
        const int n = static_cast<int>(elem.size());
        for (int i = 0; i < n; ++i) {
          const Vec2 a = m.vertices[elem[i]].xy();
          const Vec2 b = m.vertices[elem[(i + 1) % n]].xy();
          const Vec2 c = m.vertices[elem[(i + 2) % n]].xy();
          if ((b - a).cross(c - b) < -1e-12 * scale * scale) {
            throw Error("element " + std::to_string(k) + ": non-convex polygon");
          }
        }
      }
    } else {
      const double vol6 = tet_volume6(m.vertices[elem[0]], m.vertices[elem[1]],
                                      m.vertices[elem[2]], m.vertices[elem[3]]);
      if (std::abs(vol6) / 6.0 < measure_floor) {
        throw Error("element " + std::to_string(k) + ": degenerate (zero volume)");
      }
      if (vol6 < 0.0) std::swap(elem[2], elem[3]);
    }
  }

  // Canonical edge/face ids: lexicographically sorted unique tuples.
  {
    std::vector<std::array<std::int32_t, 2>> all_edges;
    for (const auto& elem : m.elements) {
      if (dim == 2) {
        const int n = static_cast<int>(elem.size());
        for (int i = 0; i < n; ++i) {
          std::int32_t a = elem[i];
          std::int32_t b = elem[(i + 1) % n];
          if (a > b) std::swap(a, b);
          all_edges.push_back({a, b});
        }
      } else {
        for (int i = 0; i < 4; ++i) {
          for (int j = i + 1; j < 4; ++j) {
            std::int32_t a = elem[i];
            std::int32_t b = elem[j];
            if (a > b) std::swap(a, b);
            all_edges.push_back({a, b});
          }
        }
      }
    }
    std::sort(all_edges.begin(), all_edges.end());
    all_edges.erase(std::unique(all_edges.begin(), all_edges.end()), all_edges.end());
    m.edges = std::move(all_edges);
    m.edge_lookup_.reserve(m.edges.size() * 2);
    for (std::size_t e = 0; e < m.edges.size(); ++e) {
      m.edge_lookup_.emplace(edge_key(m.edges[e][0], m.edges[e][1]),
                             static_cast<std::int32_t>(e));
    }
  }

  if (dim == 3) {
    if (static_cast<std::uint64_t>(nv) >= kFaceIdLimit) {
      throw Error("MeshTopology: vertex count exceeds face-key capacity");
    }
    std::vector<std::array<std::int32_t, 3>> all_faces;
    for (const auto& elem : m.elements) {
      static const int kF[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
      for (const auto& f : kF) {
        std::array<std::int32_t, 3> tri = {elem[f[0]], elem[f[1]], elem[f[2]]};
        std::sort(tri.begin(), tri.end());
        all_faces.push_back(tri);
      }
    }
    std::sort(all_faces.begin(), all_faces.end());
    all_faces.erase(std::unique(all_faces.begin(), all_faces.end()), all_faces.end());
    m.faces = std::move(all_faces);
    m.face_lookup_.reserve(m.faces.size() * 2);
    for (std::size_t f = 0; f < m.faces.size(); ++f) {
      m.face_lookup_.emplace(face_key(m.faces[f]), static_cast<std::int32_t>(f));
    }
  }

  // Incidence maps; iteration in id order keeps every list ascending.
  m.vertex_elements.assign(nv, {});
  m.vertex_edges.assign(nv, {});
  m.edge_elements.assign(m.edges.size(), {});
  for (std::size_t k = 0; k < m.elements.size(); ++k) {
    for (std::int32_t v : m.elements[k]) {
      m.vertex_elements[v].push_back(static_cast<std::int32_t>(k));
    }
  }
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    m.vertex_edges[m.edges[e][0]].push_back(static_cast<std::int32_t>(e));
    m.vertex_edges[m.edges[e][1]].push_back(static_cast<std::int32_t>(e));
  }
  for (std::size_t k = 0; k < m.elements.size(); ++k) {
    const auto& elem = m.elements[k];
    if (dim == 2) {
      const int n = static_cast<int>(elem.size());
      for (int i = 0; i < n; ++i) {
        const std::int32_t e = m.edge_index(elem[i], elem[(i + 1) % n]);
        m.edge_elements[e].push_back(static_cast<std::int32_t>(k));
      }
    } else {
      for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
          const std::int32_t e = m.edge_index(elem[i], elem[j]);
          m.edge_elements[e].push_back(static_cast<std::int32_t>(k));
        }
      }
    }
  }
  if (dim == 3) {
    m.face_elements.assign(m.faces.size(), {kNone, kNone});
    for (std::size_t k = 0; k < m.elements.size(); ++k) {
      const auto& elem = m.elements[k];
      static const int kF[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
      for (const auto& fv : kF) {
        const std::int32_t f = m.face_index(elem[fv[0]], elem[fv[1]], elem[fv[2]]);
        auto& slots = m.face_elements[f];
        if (slots[0] == kNone) {
          slots[0] = static_cast<std::int32_t>(k);
        } else if (slots[1] == kNone) {
          slots[1] = static_cast<std::int32_t>(k);
        } else {
          throw Error("face " + std::to_string(f) + ": more than 2 incident elements");
        }
      }
    }
  }

  // Conformity and boundary flags.
  m.vertex_on_boundary.assign(nv, 0);
  m.edge_on_boundary.assign(m.edges.size(), 0);
  if (dim == 2) {
    for (std::size_t e = 0; e < m.edges.size(); ++e) {
      const std::size_t cnt = m.edge_elements[e].size();
      if (cnt == 0 || cnt > 2) {
        throw Error("edge " + std::to_string(e) + ": non-conforming (" +
                    std::to_string(cnt) + " incident elements)");
      }
      if (cnt == 1) {
        m.edge_on_boundary[e] = 1;
        m.vertex_on_boundary[m.edges[e][0]] = 1;
        m.vertex_on_boundary[m.edges[e][1]] = 1;
      }
    }
  } else {
    m.face_on_boundary.assign(m.faces.size(), 0);
    for (std::size_t f = 0; f < m.faces.size(); ++f) {
      if (m.face_elements[f][1] == kNone) {
        m.face_on_boundary[f] = 1;
        const auto& tri = m.faces[f];
        for (int i = 0; i < 3; ++i) {
          m.vertex_on_boundary[tri[i]] = 1;
          for (int j = i + 1; j < 3; ++j) {
            m.edge_on_boundary[m.edge_index(tri[i], tri[j])] = 1;
          }
        }
      }
    }
  }
  return m;
}

double element_measure(const MeshTopology& mesh, std::int32_t element) {
  const auto& elem = mesh.elements[element];
  if (mesh.dim == 2) {
    return polygon_area(mesh.vertices, elem);
  }
  return tet_volume6(mesh.vertices[elem[0]], mesh.vertices[elem[1]],
                     mesh.vertices[elem[2]], mesh.vertices[elem[3]]) / 6.0;
}

double element_circumdiameter(const MeshTopology& mesh, std::int32_t element) {
  const auto& elem = mesh.elements[element];
  if (mesh.dim == 3) {
    const Vec3 cc = tet_circumcenter(mesh.vertices[elem[0]], mesh.vertices[elem[1]],
                                     mesh.vertices[elem[2]], mesh.vertices[elem[3]]);
    return 2.0 * (mesh.vertices[elem[0]] - cc).norm();
  }
  if (elem.size() == 3) {
    return triangle_metrics(mesh.vertices[elem[0]].xy(), mesh.vertices[elem[1]].xy(),
                            mesh.vertices[elem[2]].xy())
        .circumdiameter;
  }
  // Polygons: diameter of the vertex set.
  double best = 0.0;
  for (std::size_t i = 0; i < elem.size(); ++i) {
    for (std::size_t j = i + 1; j < elem.size(); ++j) {
      best = std::max(best, (mesh.vertices[elem[i]] - mesh.vertices[elem[j]]).norm());
    }
  }
  return best;
}

MeshMetrics compute_metrics(const MeshTopology& mesh, double patch_radius_override) {
  MeshMetrics out;
  out.min_width = std::numeric_limits<double>::max();
  out.min_inradius = std::numeric_limits<double>::max();
  out.min_angle = std::numeric_limits<double>::max();
  out.min_edge_length = std::numeric_limits<double>::max();

  for (std::int64_t k = 0; k < mesh.n_elements(); ++k) {
    const auto& elem = mesh.elements[k];
    if (element_measure(mesh, static_cast<std::int32_t>(k)) <= 0.0) {
      throw Error("element " + std::to_string(k) + ": degenerate");
    }
    if (mesh.dim == 2) {
      // Polygons contribute through their vertex-0 triangle fan.
      const int n = static_cast<int>(elem.size());
      for (int i = 1; i + 1 < n; ++i) {
        const TriangleMetrics tm =
            triangle_metrics(mesh.vertices[elem[0]].xy(), mesh.vertices[elem[i]].xy(),
                             mesh.vertices[elem[i + 1]].xy());
        out.min_width = std::min(out.min_width, tm.width);
        out.min_inradius = std::min(out.min_inradius, tm.inradius);
        out.min_angle = std::min(out.min_angle, tm.min_angle);
      }
      out.mesh_size = std::max(out.mesh_size,
                               element_circumdiameter(mesh, static_cast<std::int32_t>(k)));
    } else {
      const Vec3 verts[4] = {mesh.vertices[elem[0]], mesh.vertices[elem[1]],
                             mesh.vertices[elem[2]], mesh.vertices[elem[3]]};
      out.mesh_size = std::max(out.mesh_size,
                               element_circumdiameter(mesh, static_cast<std::int32_t>(k)));
      out.min_width = std::min(out.min_width, tet_width(verts[0], verts[1], verts[2], verts[3]));
      const double vol = tet_volume6(verts[0], verts[1], verts[2], verts[3]) / 6.0;
      double face_area_sum = 0.0;
      static const int kF[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
      for (const auto& f : kF) {
        face_area_sum +=
            0.5 * (verts[f[1]] - verts[f[0]]).cross(verts[f[2]] - verts[f[0]]).norm();
      }
      out.min_inradius = std::min(out.min_inradius, 3.0 * vol / face_area_sum);
      out.min_angle = std::min(out.min_angle,
                               std::min(tet_min_dihedral(verts), tet_min_face_angle(verts)));
    }
  }
  for (const auto& e : mesh.edges) {
    out.min_edge_length =
        std::min(out.min_edge_length, (mesh.vertices[e[0]] - mesh.vertices[e[1]]).norm());
  }

  const double cap =
      mesh.dim == 3 ? std::min(out.min_width, 0.5 * out.min_edge_length) : out.min_width;
  if (patch_radius_override > 0.0) {
    if (patch_radius_override >= cap) {
      throw Error("patch radius override must stay below " + std::to_string(cap));
    }
    out.patch_radius = patch_radius_override;
  } else {
    out.patch_radius = 0.99 * cap;
  }
  out.vertex_capture_radius = out.patch_radius / (1.0 + std::sin(out.min_angle));
  out.quasi_uniformity = out.mesh_size / out.min_inradius;
  return out;
}

MeshTopology generate_structured_mesh(int dim, const Box& domain, int n) {
  if (n < 1) {
    throw Error("generate_structured_mesh: n must be >= 1");
  }
  const Vec3 ext = domain.extent();
  std::vector<Vec3> verts;
  std::vector<std::vector<std::int32_t>> elems;
  if (dim == 2) {
    const double dx = ext.x / n;
    const double dy = ext.y / n;
    verts.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= n; ++i) {
        verts.push_back({domain.lo.x + i * dx, domain.lo.y + j * dy, 0.0});
      }
    }
    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    elems.reserve(static_cast<std::size_t>(2) * n * n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        elems.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
        elems.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
      }
    }
  } else if (dim == 3) {
    const double dx = ext.x / n;
    const double dy = ext.y / n;
    const double dz = ext.z / n;
    verts.reserve(static_cast<std::size_t>(n + 1) * (n + 1) * (n + 1));
    for (int k = 0; k <= n; ++k) {
      for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
          verts.push_back(
              {domain.lo.x + i * dx, domain.lo.y + j * dy, domain.lo.z + k * dz});
        }
      }
    }
    auto vid = [n](int i, int j, int k) {
      return (k * (n + 1) + j) * (n + 1) + i;
    };
    // Six path tetrahedra per cube, all sharing the main diagonal; the same
    // split in every cube keeps the mesh conforming.
    static const int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                     {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    elems.reserve(static_cast<std::size_t>(6) * n * n * n);
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          for (const auto& perm : kPerms) {
            int c[3] = {i, j, k};
            std::vector<std::int32_t> tet;
            tet.push_back(vid(c[0], c[1], c[2]));
            for (int step = 0; step < 3; ++step) {
              c[perm[step]] += 1;
              tet.push_back(vid(c[0], c[1], c[2]));
            }
            elems.push_back(std::move(tet));
          }
        }
      }
    }
  } else {
    throw Error("generate_structured_mesh: dim must be 2 or 3");
  }
  return MeshTopology::build(dim, std::move(verts), std::move(elems));
}

MeshTopology generate_mixed_mesh(const Box& domain, int n) {
  if (n < 1) {
    throw Error("generate_mixed_mesh: n must be >= 1");
  }
  const Vec3 ext = domain.extent();
  const double dx = ext.x / n;
  const double dy = ext.y / n;
  std::vector<Vec3> verts;
  verts.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      verts.push_back({domain.lo.x + i * dx, domain.lo.y + j * dy, 0.0});
    }
  }
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<std::int32_t>> elems;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if ((i + j) % 2 == 0) {
        elems.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
      } else {
        elems.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
        elems.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
      }
    }
  }
  return MeshTopology::build(2, std::move(verts), std::move(elems));
}

}  // namespace patchloc
