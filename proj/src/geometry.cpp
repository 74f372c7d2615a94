#include "patchloc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace patchloc {

namespace {

inline double sign_of(double z) { return z >= 0.0 ? 1.0 : -1.0; }

}  // namespace

PseudoAngle pseudo_angle(double x, double y) {
  if (x == 0.0 && y == 0.0) {
    throw Error("pseudo_angle: zero vector");
  }
  const double sx = sign_of(x);
  const double sy = sign_of(y);
  // The denominator sy*x + sx*y never vanishes for (x,y) != (0,0).
  return {sx * x / (sy * x + sx * y) - sx * (sy + 1.0)};
}

int sector_search(std::span<const PseudoAngle> angles, PseudoAngle q, int* comparisons) {
  const int n = static_cast<int>(angles.size());
  int count = 0;
  // upper_bound: first index with angles[idx] > q
  int lo = 0;
  int hi = n;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    ++count;
    if (q.value < angles[mid].value) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (comparisons != nullptr) {
    *comparisons = count;
  }
  // lo-1 is the opening ray; below angles[0] wraps into the last sector.
  return lo == 0 ? n - 1 : lo - 1;
}

namespace {

// Classifies from the minimum signed distance of p to the bounding planes,
// oriented inward. dist_min > tol -> Inside, < -tol -> Outside.
Containment classify(double dist_min, double tol) {
  if (dist_min > tol) return Containment::Inside;
  if (dist_min < -tol) return Containment::Outside;
  return Containment::Boundary;
}

}  // namespace

Containment point_in_triangle(const Vec2& p, const Vec2& a, const Vec2& b,
                              const Vec2& c, double tol) {
  const double area2 = (b - a).cross(c - a);
  if (area2 == 0.0) {
    throw Error("point_in_triangle: degenerate triangle");
  }
  const double orientation = sign_of(area2);
  double dist_min = std::numeric_limits<double>::max();
  const Vec2 verts[3] = {a, b, c};
  for (int i = 0; i < 3; ++i) {
    const Vec2& u = verts[i];
    const Vec2& v = verts[(i + 1) % 3];
    const double len = (v - u).norm();
    const double d = orientation * (v - u).cross(p - u) / len;
    dist_min = std::min(dist_min, d);
  }
  return classify(dist_min, tol);
}

Containment point_in_tetrahedron(const Vec3& p, const Vec3& a, const Vec3& b,
                                 const Vec3& c, const Vec3& d, double tol) {
  const double vol6 = (b - a).cross(c - a).dot(d - a);
  if (vol6 == 0.0) {
    throw Error("point_in_tetrahedron: degenerate tetrahedron");
  }
  const double orientation = sign_of(vol6);
  const Vec3 verts[4] = {a, b, c, d};
  // Face i is opposite vertex i, wound so normals point inward for a
  // positively oriented tetrahedron.
  static const int kFaces[4][3] = {{1, 3, 2}, {0, 2, 3}, {0, 3, 1}, {0, 1, 2}};
  double dist_min = std::numeric_limits<double>::max();
  for (int i = 0; i < 4; ++i) {
    const Vec3& u = verts[kFaces[i][0]];
    const Vec3& v = verts[kFaces[i][1]];
    const Vec3& w = verts[kFaces[i][2]];
    Vec3 n = (v - u).cross(w - u);
    const double len = n.norm();
    const double dist = orientation * n.dot(p - u) / len;
    dist_min = std::min(dist_min, dist);
  }
  return classify(dist_min, tol);
}

Containment point_in_convex_polygon(const Vec2& p, std::span<const Vec2> ring,
                                    double tol) {
  const int n = static_cast<int>(ring.size());
  if (n < 3) {
    throw Error("point_in_convex_polygon: ring too short");
  }
  double dist_min = std::numeric_limits<double>::max();
  for (int i = 0; i < n; ++i) {
    const Vec2& u = ring[i];
    const Vec2& v = ring[(i + 1) % n];
    const Vec2& w = ring[(i + 2) % n];
    const Vec2 edge = v - u;
    const double len = edge.norm();
    if (len == 0.0) {
      throw Error("point_in_convex_polygon: repeated vertex");
    }
    if (edge.cross(w - v) < -1e-12 * len * (w - v).norm()) {
      throw Error("point_in_convex_polygon: ring is not convex CCW");
    }
    dist_min = std::min(dist_min, edge.cross(p - u) / len);
  }
  return classify(dist_min, tol);
}

Containment element_contains(const MeshTopology& mesh, std::int32_t element,
                             const Vec3& p, double tol) {
  const auto& elem = mesh.elements[element];
  if (mesh.dim == 3) {
    return point_in_tetrahedron(p, mesh.vertices[elem[0]], mesh.vertices[elem[1]],
                                mesh.vertices[elem[2]], mesh.vertices[elem[3]], tol);
  }
  if (elem.size() == 3) {
    return point_in_triangle(p.xy(), mesh.vertices[elem[0]].xy(),
                             mesh.vertices[elem[1]].xy(), mesh.vertices[elem[2]].xy(), tol);
  }
  // Stack ring for the common small polygons.
  if (elem.size() <= 8) {
    Vec2 ring[8];
    for (std::size_t i = 0; i < elem.size(); ++i) ring[i] = mesh.vertices[elem[i]].xy();
    return point_in_convex_polygon(p.xy(), {ring, elem.size()}, tol);
  }
  std::vector<Vec2> ring(elem.size());
  for (std::size_t i = 0; i < elem.size(); ++i) ring[i] = mesh.vertices[elem[i]].xy();
  return point_in_convex_polygon(p.xy(), ring, tol);
}

namespace {

inline double component(const Vec2& v, int axis) { return axis == 0 ? v.x : v.y; }
inline double component(const Vec3& v, int axis) { return v[axis]; }

// Liang-Barsky slab clipping shared by the 2D/3D variants.
template <typename V>
std::optional<std::pair<double, double>> clip_segment(const V& v1, const V& v2,
                                                      const V& lo, const V& hi, int dims) {
  double t0 = 0.0;
  double t1 = 1.0;
  for (int axis = 0; axis < dims; ++axis) {
    const double p1 = component(v1, axis);
    const double d = component(v2, axis) - p1;
    const double a = component(lo, axis);
    const double b = component(hi, axis);
    if (d == 0.0) {
      if (p1 < a || p1 > b) return std::nullopt;
      continue;
    }
    double ta = (a - p1) / d;
    double tb = (b - p1) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  return std::make_pair(t0, t1);
}

}  // namespace

std::optional<std::pair<double, double>> segment_box_interval(const Vec2& v1, const Vec2& v2,
                                                              const Vec2& box_lo,
                                                              const Vec2& box_hi) {
  return clip_segment(v1, v2, box_lo, box_hi, 2);
}

std::optional<std::pair<double, double>> segment_box_interval(const Vec3& v1, const Vec3& v2,
                                                              const Vec3& box_lo,
                                                              const Vec3& box_hi) {
  return clip_segment(v1, v2, box_lo, box_hi, 3);
}

std::optional<double> segment_box_intersection(const Vec2& v1, const Vec2& v2,
                                               const Vec2& box_lo, const Vec2& box_hi) {
  auto interval = segment_box_interval(v1, v2, box_lo, box_hi);
  if (!interval) return std::nullopt;
  return interval->first;
}

std::optional<double> segment_box_intersection(const Vec3& v1, const Vec3& v2,
                                               const Vec3& box_lo, const Vec3& box_hi) {
  auto interval = segment_box_interval(v1, v2, box_lo, box_hi);
  if (!interval) return std::nullopt;
  return interval->first;
}

std::optional<std::pair<double, double>> segment_ball_intersection(const Vec3& v1,
                                                                   const Vec3& v2,
                                                                   const Vec3& center,
                                                                   double radius) {
  const Vec3 d = v2 - v1;
  const Vec3 m = v1 - center;
  const double a = d.norm2();
  const double b = m.dot(d);
  const double c = m.norm2() - radius * radius;
  if (a == 0.0) {
    // Degenerate segment: a point, inside or not.
    if (c <= 0.0) return std::make_pair(0.0, 0.0);
    return std::nullopt;
  }
  const double disc = b * b - a * c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  double t1 = (-b - sq) / a;
  double t2 = (-b + sq) / a;
  t1 = std::max(t1, 0.0);
  t2 = std::min(t2, 1.0);
  if (t1 > t2) return std::nullopt;
  return std::make_pair(t1, t2);
}

namespace {

inline bool axis_separates(double p0, double p1, double p2, double r) {
  const double mx = std::max(p0, std::max(p1, p2));
  const double mn = std::min(p0, std::min(p1, p2));
  return mn > r || mx < -r;
}

}  // namespace

bool triangle_box_intersect(const Vec3& a, const Vec3& b, const Vec3& c,
                            const Vec3& box_lo, const Vec3& box_hi) {
  const Vec3 center = (box_lo + box_hi) * 0.5;
  const Vec3 h = (box_hi - box_lo) * 0.5;
  const Vec3 v0 = a - center;
  const Vec3 v1 = b - center;
  const Vec3 v2 = c - center;
  const Vec3 e0 = v1 - v0;
  const Vec3 e1 = v2 - v1;
  const Vec3 e2 = v0 - v2;

  // Box face normals.
  if (axis_separates(v0.x, v1.x, v2.x, h.x)) return false;
  if (axis_separates(v0.y, v1.y, v2.y, h.y)) return false;
  if (axis_separates(v0.z, v1.z, v2.z, h.z)) return false;

  // Triangle normal.
  const Vec3 n = e0.cross(e1);
  const double pn = n.dot(v0);
  const double rn = h.x * std::abs(n.x) + h.y * std::abs(n.y) + h.z * std::abs(n.z);
  if (std::abs(pn) > rn) return false;

  // Nine edge cross-product axes.
  const Vec3 edges[3] = {e0, e1, e2};
  for (const Vec3& e : edges) {
    // axis = x_hat x e
    {
      const double p0 = v0.z * e.y - v0.y * e.z;
      const double p1 = v1.z * e.y - v1.y * e.z;
      const double p2 = v2.z * e.y - v2.y * e.z;
      const double r = h.y * std::abs(e.z) + h.z * std::abs(e.y);
      if (axis_separates(p0, p1, p2, r)) return false;
    }
    // axis = y_hat x e
    {
      const double p0 = v0.x * e.z - v0.z * e.x;
      const double p1 = v1.x * e.z - v1.z * e.x;
      const double p2 = v2.x * e.z - v2.z * e.x;
      const double r = h.x * std::abs(e.z) + h.z * std::abs(e.x);
      if (axis_separates(p0, p1, p2, r)) return false;
    }
    // axis = z_hat x e
    {
      const double p0 = v0.y * e.x - v0.x * e.y;
      const double p1 = v1.y * e.x - v1.x * e.y;
      const double p2 = v2.y * e.x - v2.x * e.y;
      const double r = h.x * std::abs(e.y) + h.y * std::abs(e.x);
      if (axis_separates(p0, p1, p2, r)) return false;
    }
  }
  return true;
}

Vec3 chi_point(const Vec3& e0, const Vec3& e1, const Vec3& c) {
  const Vec3 d = e1 - e0;
  const double len2 = d.norm2();
  if (len2 == 0.0) {
    throw Error("chi_point: degenerate edge");
  }
  return e0 + d * ((c - e0).dot(d) / len2);
}

PlaneBasis plane_basis_for_edge(const MeshTopology& mesh, std::int32_t edge) {
  const auto& e = mesh.edges[edge];
  const Vec3& p0 = mesh.vertices[e[0]];
  const Vec3& p1 = mesh.vertices[e[1]];
  Vec3 n = p1 - p0;
  const double len = n.norm();
  if (len == 0.0) {
    throw Error("plane_basis_for_edge: zero-length edge");
  }
  n = n / len;
  // Deterministic in-plane frame: start from the coordinate axis least
  // aligned with the edge.
  int k = 0;
  if (std::abs(n.y) < std::abs(n[k])) k = 1;
  if (std::abs(n.z) < std::abs(n[k])) k = 2;
  Vec3 axis{0, 0, 0};
  axis[k] = 1.0;
  Vec3 u = axis - n * axis.dot(n);
  u = u / u.norm();
  const Vec3 v = n.cross(u);
  return {p0, u, v, n};
}

std::optional<Vec2> project_to_plane(const Vec3& v, const PlaneBasis& basis) {
  const Vec2 w{v.dot(basis.u), v.dot(basis.v)};
  const double len = w.norm();
  if (len <= 1e-14 * v.norm() || len == 0.0) {
    return std::nullopt;
  }
  return w / len;
}

}  // namespace patchloc
