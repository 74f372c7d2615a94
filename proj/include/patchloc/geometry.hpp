#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "patchloc/mesh.hpp"
#include "patchloc/vec.hpp"

namespace patchloc {

// Monotone surrogate for the clockwise angle from the reference direction
// (0,1). Cheaper than atan2 and ordering-equivalent to it; values lie in
// [-2, 2) with (0,1) mapping to -2.
struct PseudoAngle {
  double value = 0.0;
  auto operator<=>(const PseudoAngle&) const = default;
};

PseudoAngle pseudo_angle(double x, double y);
inline PseudoAngle pseudo_angle(const Vec2& v) { return pseudo_angle(v.x, v.y); }

// Index i with angles[i] <= q < angles[i+1], left-closed and cyclic: a query
// below angles[0] or at/after angles[n-1] falls in the wrap sector n-1.
// `comparisons`, when given, receives the number of key comparisons made.
int sector_search(std::span<const PseudoAngle> angles, PseudoAngle q,
                  int* comparisons = nullptr);

enum class Containment { Inside, Boundary, Outside };

// tol is an absolute distance band around the element boundary.
Containment point_in_triangle(const Vec2& p, const Vec2& a, const Vec2& b,
                              const Vec2& c, double tol);
Containment point_in_tetrahedron(const Vec3& p, const Vec3& a, const Vec3& b,
                                 const Vec3& c, const Vec3& d, double tol);
Containment point_in_convex_polygon(const Vec2& p, std::span<const Vec2> ring,
                                    double tol);

// Dispatches on element kind: triangle / convex polygon / tetrahedron.
Containment element_contains(const MeshTopology& mesh, std::int32_t element,
                             const Vec3& p, double tol);

// First parameter t in [0,1] with v1 + t(v2-v1) inside the closed box;
// segments starting inside report t = 0.
std::optional<double> segment_box_intersection(const Vec2& v1, const Vec2& v2,
                                               const Vec2& box_lo, const Vec2& box_hi);
std::optional<double> segment_box_intersection(const Vec3& v1, const Vec3& v2,
                                               const Vec3& box_lo, const Vec3& box_hi);

// Full clipped parameter interval of the segment inside the closed box.
std::optional<std::pair<double, double>> segment_box_interval(const Vec2& v1, const Vec2& v2,
                                                              const Vec2& box_lo,
                                                              const Vec2& box_hi);
std::optional<std::pair<double, double>> segment_box_interval(const Vec3& v1, const Vec3& v2,
                                                              const Vec3& box_lo,
                                                              const Vec3& box_hi);

// Parameter interval where the segment meets the closed ball, clipped to
// [0,1]; tangent contact collapses to t1 == t2.
std::optional<std::pair<double, double>> segment_ball_intersection(const Vec3& v1,
                                                                   const Vec3& v2,
                                                                   const Vec3& center,
                                                                   double radius);

// Separating-axis test between a closed triangle and a closed box.
bool triangle_box_intersect(const Vec3& a, const Vec3& b, const Vec3& c,
                            const Vec3& box_lo, const Vec3& box_hi);

// Orthogonal projection of c onto the line through e0, e1.
Vec3 chi_point(const Vec3& e0, const Vec3& e1, const Vec3& c);

// Orthonormal frame of the plane through an edge's anchor vertex,
// perpendicular to the edge direction.
struct PlaneBasis {
  Vec3 origin;
  Vec3 u;
  Vec3 v;
  Vec3 normal;  // unit vector along the owning edge
};

PlaneBasis plane_basis_for_edge(const MeshTopology& mesh, std::int32_t edge);

// In-plane coordinates of v with its normal component removed, scaled to a
// unit vector. Empty when v is (numerically) parallel to the edge.
std::optional<Vec2> project_to_plane(const Vec3& v, const PlaneBasis& basis);

}  // namespace patchloc
