#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "patchloc/mesh.hpp"
#include "patchloc/mesh_io.hpp"
#include "test_support.hpp"

using namespace patchloc;
using patchloc::testing::unit_cube;
using patchloc::testing::unit_square;

namespace {

MeshTopology single_triangle() {
  return MeshTopology::build(2, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
}

MeshTopology two_triangles() {
  return MeshTopology::build(2, {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}},
                             {{0, 1, 2}, {0, 2, 3}});
}

MeshTopology regular_tetrahedron() {
  const double s3 = std::sqrt(3.0);
  return MeshTopology::build(3,
                             {{0, 0, 0},
                              {1, 0, 0},
                              {0.5, s3 / 2.0, 0},
                              {0.5, s3 / 6.0, std::sqrt(2.0 / 3.0)}},
                             {{0, 1, 2, 3}});
}

}  // namespace

TEST_CASE("single triangle topology") {
  const auto m = single_triangle();
  CHECK(m.n_elements() == 1);
  CHECK(m.n_edges() == 3);
  int boundary = 0;
  for (auto b : m.edge_on_boundary) boundary += b;
  CHECK(boundary == 3);
}

TEST_CASE("two triangles share one interior edge") {
  const auto m = two_triangles();
  int interior = 0;
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    if (!m.edge_on_boundary[e]) {
      ++interior;
      CHECK(m.edge_elements[e].size() == 2);
    } else {
      CHECK(m.edge_elements[e].size() == 1);
    }
  }
  CHECK(interior == 1);
  const std::int32_t diag = m.edge_index(0, 2);
  REQUIRE(diag != kNone);
  CHECK(!m.edge_on_boundary[diag]);
}

TEST_CASE("structured mesh counts and measures") {
  const auto m1 = generate_structured_mesh(2, unit_square(), 1);
  CHECK(m1.n_elements() == 2);
  CHECK(m1.n_vertices() == 4);

  const auto m10 = generate_structured_mesh(2, unit_square(), 10);
  CHECK(m10.n_elements() == 200);
  CHECK(m10.n_vertices() == 121);
  double area = 0.0;
  for (std::int32_t k = 0; k < m10.n_elements(); ++k) area += element_measure(m10, k);
  CHECK(area == doctest::Approx(1.0).epsilon(1e-10));
  const auto metrics = compute_metrics(m10);
  CHECK(metrics.mesh_size == doctest::Approx(std::sqrt(2.0) / 10.0).epsilon(1e-12));

  const auto c2 = generate_structured_mesh(3, unit_cube(), 2);
  CHECK(c2.n_elements() == 48);
  double vol = 0.0;
  for (std::int32_t k = 0; k < c2.n_elements(); ++k) vol += element_measure(c2, k);
  CHECK(vol == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(generate_structured_mesh(3, unit_cube(), 1).n_elements() == 6);
  CHECK_THROWS_AS(generate_structured_mesh(2, unit_square(), 0), Error);
}

TEST_CASE("mixed mesh is a conforming triangle/quad checkerboard") {
  const auto m = generate_mixed_mesh(unit_square(), 4);
  int quads = 0;
  int tris = 0;
  for (const auto& elem : m.elements) {
    if (elem.size() == 4) ++quads;
    if (elem.size() == 3) ++tris;
  }
  CHECK(quads == 8);
  CHECK(tris == 16);
  double area = 0.0;
  for (std::int32_t k = 0; k < m.n_elements(); ++k) area += element_measure(m, k);
  CHECK(area == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("metrics on canonical elements") {
  const auto eq = MeshTopology::build(
      2, {{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2.0, 0}}, {{0, 1, 2}});
  const auto meq = compute_metrics(eq);
  CHECK(meq.min_angle == doctest::Approx(std::numbers::pi / 3).epsilon(1e-12));
  CHECK(meq.min_width == doctest::Approx(0.8660254037844386).epsilon(1e-12));
  CHECK(meq.min_edge_length == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(element_circumdiameter(eq, 0) == doctest::Approx(1.1547005383792517).epsilon(1e-12));

  const auto rt = MeshTopology::build(2, {{0, 0, 0}, {0.1, 0, 0}, {0, 0.1, 0}},
                                      {{0, 1, 2}});
  const auto mrt = compute_metrics(rt);
  CHECK(mrt.min_angle == doctest::Approx(std::numbers::pi / 4).epsilon(1e-12));
  CHECK(mrt.min_width == doctest::Approx(0.07071067811865475).epsilon(1e-12));
  CHECK(element_circumdiameter(rt, 0) ==
        doctest::Approx(0.14142135623730953).epsilon(1e-12));

  const auto tet = regular_tetrahedron();
  const auto mt = compute_metrics(tet);
  // Face angles pi/3 < dihedral arccos(1/3), so the face angle governs.
  CHECK(mt.min_angle == doctest::Approx(std::numbers::pi / 3).epsilon(1e-9));
  CHECK(element_circumdiameter(tet, 0) ==
        doctest::Approx(1.224744871391589).epsilon(1e-9));
  CHECK(mt.min_edge_length == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("reference element measures") {
  const auto tri = single_triangle();
  CHECK(element_measure(tri, 0) == doctest::Approx(0.5).epsilon(1e-15));
  const auto tet = MeshTopology::build(
      3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 2, 3}});
  CHECK(element_measure(tet, 0) == doctest::Approx(1.0 / 6).epsilon(1e-15));
}

TEST_CASE("metric ordering and incidence invariants") {
  for (const auto& m : {generate_structured_mesh(2, unit_square(), 5),
                        generate_mixed_mesh(unit_square(), 4)}) {
    const auto metrics = compute_metrics(m);
    CHECK(2.0 * metrics.min_inradius <= metrics.min_width * (1 + 1e-12));
    CHECK(metrics.min_width <= metrics.mesh_size);
    CHECK(metrics.min_edge_length <= metrics.mesh_size);
    CHECK(metrics.min_angle > 0.0);
    CHECK(metrics.min_angle <= std::numbers::pi / 3 + 1e-12);
    CHECK(metrics.patch_radius < metrics.min_width);

    for (std::int32_t v = 0; v < m.n_vertices(); ++v) {
      for (std::int32_t k : m.vertex_elements[v]) {
        const auto& elem = m.elements[k];
        CHECK(std::find(elem.begin(), elem.end(), v) != elem.end());
      }
      for (std::int32_t e : m.vertex_edges[v]) {
        CHECK((m.edges[e][0] == v || m.edges[e][1] == v));
      }
    }
    for (std::int32_t e = 0; e < m.n_edges(); ++e) {
      for (std::int32_t k : m.edge_elements[e]) {
        const auto& elem = m.elements[k];
        CHECK(std::find(elem.begin(), elem.end(), m.edges[e][0]) != elem.end());
        CHECK(std::find(elem.begin(), elem.end(), m.edges[e][1]) != elem.end());
      }
    }
  }

  const auto c = generate_structured_mesh(3, unit_cube(), 2);
  const auto mc = compute_metrics(c);
  CHECK(2.0 * mc.min_inradius <= mc.min_width * (1 + 1e-12));
  CHECK(mc.patch_radius < std::min(mc.min_width, mc.min_edge_length / 2));
  for (std::size_t f = 0; f < c.faces.size(); ++f) {
    const int incident = (c.face_elements[f][0] != kNone) + (c.face_elements[f][1] != kNone);
    CHECK(incident == (c.face_on_boundary[f] ? 1 : 2));
  }
}

TEST_CASE("construction rejects invalid input") {
  CHECK_THROWS_AS(MeshTopology::build(2, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1, 2}}),
                  Error);  // zero area
  CHECK_THROWS_AS(MeshTopology::build(2, {{0, 0, 0}, {1, 0, 0}}, {{0, 1, 5}}), Error);
  CHECK_THROWS_AS(MeshTopology::build(2, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 1}}),
                  Error);
  // Non-conforming: three triangles on one edge.
  CHECK_THROWS_AS(MeshTopology::build(2,
                                      {{0, 0, 0},
                                       {1, 0, 0},
                                       {0.5, 1, 0},
                                       {0.5, -1, 0},
                                       {0.5, 0.5, 0}},
                                      {{0, 1, 2}, {0, 3, 1}, {0, 1, 4}}),
                  Error);
}

TEST_CASE("smallest valid native mesh file") {
  const std::string path = "tiny.mesh";
  {
    std::ofstream out(path);
    out << "2 3 1\n0 0\n1 0\n0 1\n3 0 1 2\n";
  }
  const auto m = load_mesh(path);
  CHECK(m.n_elements() == 1);
  CHECK(m.n_edges() == 3);
  int boundary = 0;
  for (auto b : m.edge_on_boundary) boundary += b;
  CHECK(boundary == 3);
  std::remove(path.c_str());
}

TEST_CASE("native mesh file round-trip") {
  const auto m = generate_structured_mesh(2, unit_square(), 10);
  const std::string path = "native_roundtrip.mesh";
  save_mesh_native(m, path);
  const auto loaded = load_mesh(path);
  CHECK(loaded.dim == 2);
  CHECK(loaded.n_elements() == m.n_elements());
  CHECK(loaded.n_vertices() == m.n_vertices());
  CHECK(loaded.vertices[37].x == m.vertices[37].x);
  CHECK(loaded.elements[123] == m.elements[123]);
  std::remove(path.c_str());
}

TEST_CASE("gmsh 2.2 ascii subset") {
  const std::string path = "sample.msh";
  {
    std::ofstream out(path);
    out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
    out << "$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 1 1 0\n4 0 1 0\n$EndNodes\n";
    out << "$Elements\n3\n";
    out << "1 15 2 0 1 1\n";          // point, skipped
    out << "2 2 2 0 1 1 2 3\n";       // triangle
    out << "3 2 2 0 1 1 3 4\n$EndElements\n";
  }
  const auto m = load_mesh(path);
  CHECK(m.dim == 2);
  CHECK(m.n_elements() == 2);
  CHECK(m.n_vertices() == 4);
  std::remove(path.c_str());
}

TEST_CASE("gmsh quad elements load as polygons") {
  const std::string path = "quad.msh";
  {
    std::ofstream out(path);
    out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
    out << "$Nodes\n6\n1 0 0 0\n2 1 0 0\n3 2 0 0\n4 0 1 0\n5 1 1 0\n6 2 1 0\n$EndNodes\n";
    out << "$Elements\n2\n";
    out << "1 3 2 0 1 1 2 5 4\n";
    out << "2 3 2 0 1 2 3 6 5\n$EndElements\n";
  }
  const auto m = load_mesh(path);
  CHECK(m.dim == 2);
  CHECK(m.n_elements() == 2);
  CHECK(m.elements[0].size() == 4);
  double area = 0.0;
  for (std::int32_t k = 0; k < m.n_elements(); ++k) area += element_measure(m, k);
  CHECK(area == doctest::Approx(2.0).epsilon(1e-12));
  std::remove(path.c_str());
}

TEST_CASE("gmsh mixed volume mesh keeps tetrahedra only") {
  const std::string path = "sample3d.msh";
  {
    std::ofstream out(path);
    out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
    out << "$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 0 1\n$EndNodes\n";
    out << "$Elements\n2\n";
    out << "1 2 2 0 1 1 2 3\n";       // surface triangle
    out << "2 4 2 0 1 1 2 3 4\n$EndElements\n";
  }
  const auto m = load_mesh(path);
  CHECK(m.dim == 3);
  CHECK(m.n_elements() == 1);
  std::remove(path.c_str());
}

TEST_CASE("node/ele pair") {
  {
    std::ofstream node("sample.node");
    node << "4 2 0 0\n1 0 0\n2 1 0\n3 1 1\n4 0 1\n";
    std::ofstream ele("sample.ele");
    ele << "2 3 0\n1 1 2 3\n2 1 3 4\n";
  }
  const auto m = load_mesh("sample.node");
  CHECK(m.dim == 2);
  CHECK(m.n_elements() == 2);
  CHECK(m.n_vertices() == 4);
  std::remove("sample.node");
  std::remove("sample.ele");
}

TEST_CASE("parse errors carry the line number") {
  const std::string path = "broken.mesh";
  {
    std::ofstream out(path);
    out << "2 3 1\n0 0\n1 0\nnot-a-number 1\n3 0 1 2\n";
  }
  try {
    load_mesh(path);
    FAIL("expected a parse error");
  } catch (const ParseError& ex) {
    CHECK(std::string(ex.what()).find(":4:") != std::string::npos);
  }
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_mesh("no_such_file.mesh"), Error);
}
