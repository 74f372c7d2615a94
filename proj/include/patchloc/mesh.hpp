#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "patchloc/vec.hpp"

namespace patchloc {

inline constexpr std::int32_t kNone = -1;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  ParseError(const std::string& file, long line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what) {}
};

// Conforming unstructured mesh: triangles / convex polygons in 2D,
// tetrahedra in 3D. Immutable after construction; all incidence maps are
// built up front so queries never mutate shared state.
class MeshTopology {
 public:
  int dim = 2;
  std::vector<Vec3> vertices;                    // z = 0 in 2D
  std::vector<std::vector<std::int32_t>> elements;  // CCW rings / +oriented tets

  // Edges are stored (lo, hi) and sorted lexicographically so ids are
  // reproducible across builds. Faces (3D) likewise as sorted triples.
  std::vector<std::array<std::int32_t, 2>> edges;
  std::vector<std::array<std::int32_t, 3>> faces;

  std::vector<std::vector<std::int32_t>> vertex_elements;  // elements around a vertex
  std::vector<std::vector<std::int32_t>> vertex_edges;     // edges around a vertex
  std::vector<std::vector<std::int32_t>> edge_elements;    // elements around an edge
  std::vector<std::array<std::int32_t, 2>> face_elements;  // 3D, second = kNone on boundary

  std::vector<std::uint8_t> vertex_on_boundary;
  std::vector<std::uint8_t> edge_on_boundary;
  std::vector<std::uint8_t> face_on_boundary;

  std::int64_t n_vertices() const { return static_cast<std::int64_t>(vertices.size()); }
  std::int64_t n_elements() const { return static_cast<std::int64_t>(elements.size()); }
  std::int64_t n_edges() const { return static_cast<std::int64_t>(edges.size()); }
  std::int64_t n_faces() const { return static_cast<std::int64_t>(faces.size()); }

  std::int32_t edge_index(std::int32_t a, std::int32_t b) const;
  std::int32_t face_index(std::int32_t a, std::int32_t b, std::int32_t c) const;

  // The two edges of element k incident to vertex v (2D rings and tets both
  // have exactly two other ring/edge neighbours per vertex in the relevant
  // sense; for tets this returns the two edges at v other than `exclude`).
  std::array<std::int32_t, 2> element_edges_at_vertex(std::int32_t k, std::int32_t v,
                                                      std::int32_t exclude = kNone) const;

  Box bounds() const;

  // Validates indices and conformity, orients elements positively and
  // builds every incidence map. Throws Error on non-conforming input.
  static MeshTopology build(int dim, std::vector<Vec3> vertices,
                            std::vector<std::vector<std::int32_t>> elements);

 private:
  std::unordered_map<std::uint64_t, std::int32_t> edge_lookup_;
  std::unordered_map<std::uint64_t, std::int32_t> face_lookup_;
  Box bounds_;
};

// Aggregate quality metrics feeding the grid-spacing bounds.
struct MeshMetrics {
  double mesh_size = 0.0;         // max element circumdiameter
  double min_width = 0.0;         // min element width
  double min_inradius = 0.0;
  double min_angle = 0.0;         // radians; dihedral+face angles in 3D
  double min_edge_length = 0.0;
  double patch_radius = 0.0;      // working radius, strictly below min_width
  double vertex_capture_radius = 0.0;  // patch_radius / (1 + sin(min_angle))
  double quasi_uniformity = 0.0;  // mesh_size / min_inradius, diagnostic only
};

// patch_radius_override > 0 replaces the default 0.99 * min_width
// (0.99 * min(min_width, min_edge_length/2) in 3D).
MeshMetrics compute_metrics(const MeshTopology& mesh, double patch_radius_override = 0.0);

double element_measure(const MeshTopology& mesh, std::int32_t element);
double element_circumdiameter(const MeshTopology& mesh, std::int32_t element);

// n x n squares split into two right triangles (2D) or n^3 cubes split into
// six tetrahedra sharing the main diagonal (3D).
MeshTopology generate_structured_mesh(int dim, const Box& domain, int n);

// Mixed triangle/quad mesh: checkerboard of split and unsplit squares.
MeshTopology generate_mixed_mesh(const Box& domain, int n);

}  // namespace patchloc
