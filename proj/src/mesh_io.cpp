#include "patchloc/mesh_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace patchloc {

namespace {

struct LineReader {
  std::ifstream in;
  std::string path;
  long line_no = 0;

  explicit LineReader(const std::string& p) : in(p), path(p) {
    if (!in) {
      throw Error("cannot open mesh file: " + p);
    }
  }

  // Next non-empty, non-comment line.
  bool next(std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      const auto pos = out.find_first_not_of(" \t\r\n");
      if (pos == std::string::npos) continue;
      if (out[pos] == '#') continue;
      return true;
    }
    return false;
  }

  std::string require(const std::string& what) {
    std::string s;
    if (!next(s)) {
      throw ParseError(path, line_no, "unexpected end of file, expected " + what);
    }
    return s;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(path, line_no, what);
  }
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

MeshTopology load_native(const std::string& path) {
  LineReader r(path);
  std::istringstream header(r.require("header"));
  int dim = 0;
  std::int64_t nv = 0;
  std::int64_t ne = 0;
  if (!(header >> dim >> nv >> ne) || (dim != 2 && dim != 3) || nv < 1 || ne < 1) {
    r.fail("bad header, expected 'dim n_vertices n_elements'");
  }
  std::vector<Vec3> verts(nv);
  for (std::int64_t i = 0; i < nv; ++i) {
    std::istringstream ls(r.require("vertex coordinates"));
    Vec3 v;
    if (!(ls >> v.x >> v.y) || (dim == 3 && !(ls >> v.z))) {
      r.fail("bad vertex line");
    }
    verts[i] = v;
  }
  std::vector<std::vector<std::int32_t>> elems(ne);
  for (std::int64_t k = 0; k < ne; ++k) {
    std::istringstream ls(r.require("element vertex list"));
    int cnt = 0;
    if (!(ls >> cnt) || cnt < 3) {
      r.fail("bad element line: expected vertex count then indices");
    }
    elems[k].resize(cnt);
    for (int i = 0; i < cnt; ++i) {
      if (!(ls >> elems[k][i])) {
        r.fail("bad element line: missing vertex index");
      }
    }
  }
  return MeshTopology::build(dim, std::move(verts), std::move(elems));
}

MeshTopology load_gmsh22(const std::string& path) {
  LineReader r(path);
  std::map<long, std::int32_t> node_remap;
  std::vector<Vec3> verts;
  struct RawElem {
    int type;
    std::vector<long> nodes;
  };
  std::vector<RawElem> raw;

  std::string line;
  while (r.next(line)) {
    if (line.rfind("$MeshFormat", 0) == 0) {
      std::istringstream ls(r.require("mesh format"));
      double version = 0;
      int file_type = 0;
      int data_size = 0;
      if (!(ls >> version >> file_type >> data_size)) r.fail("bad $MeshFormat line");
      if (version < 2.0 || version >= 3.0) r.fail("unsupported MSH version");
      if (file_type != 0) r.fail("binary MSH files are not supported");
      if (r.require("$EndMeshFormat").rfind("$EndMeshFormat", 0) != 0) {
        r.fail("missing $EndMeshFormat");
      }
    } else if (line.rfind("$Nodes", 0) == 0) {
      std::istringstream ls(r.require("node count"));
      std::int64_t count = 0;
      if (!(ls >> count) || count < 1) r.fail("bad node count");
      verts.reserve(count);
      for (std::int64_t i = 0; i < count; ++i) {
        std::istringstream ns(r.require("node"));
        long id = 0;
        Vec3 v;
        if (!(ns >> id >> v.x >> v.y >> v.z)) r.fail("bad node line");
        node_remap[id] = static_cast<std::int32_t>(verts.size());
        verts.push_back(v);
      }
      if (r.require("$EndNodes").rfind("$EndNodes", 0) != 0) r.fail("missing $EndNodes");
    } else if (line.rfind("$Elements", 0) == 0) {
      std::istringstream ls(r.require("element count"));
      std::int64_t count = 0;
      if (!(ls >> count) || count < 1) r.fail("bad element count");
      static const std::map<int, int> kNodeCount = {{2, 3}, {3, 4}, {4, 4}};
      for (std::int64_t i = 0; i < count; ++i) {
        std::istringstream es(r.require("element"));
        long id = 0;
        int type = 0;
        int ntags = 0;
        if (!(es >> id >> type >> ntags)) r.fail("bad element line");
        long tag;
        for (int t = 0; t < ntags; ++t) {
          if (!(es >> tag)) r.fail("bad element line: missing tag");
        }
        auto it = kNodeCount.find(type);
        if (it == kNodeCount.end()) {
          // Points and lines carry physical groups; skip them silently.
          if (type == 15 || type == 1) continue;
          r.fail("unsupported element type " + std::to_string(type));
        }
        RawElem e;
        e.type = type;
        e.nodes.resize(it->second);
        for (int v = 0; v < it->second; ++v) {
          if (!(es >> e.nodes[v])) r.fail("bad element line: missing node");
        }
        raw.push_back(std::move(e));
      }
      if (r.require("$EndElements").rfind("$EndElements", 0) != 0) {
        r.fail("missing $EndElements");
      }
    }
    // Other sections ($PhysicalNames, ...) are skipped line by line.
  }

  if (raw.empty()) {
    throw Error(path + ": no supported elements found");
  }
  const bool has_tets = std::any_of(raw.begin(), raw.end(),
                                    [](const RawElem& e) { return e.type == 4; });
  const int dim = has_tets ? 3 : 2;
  std::vector<std::vector<std::int32_t>> elems;
  for (const RawElem& e : raw) {
    if (has_tets && e.type != 4) continue;  // surface triangles of a 3D mesh
    std::vector<std::int32_t> elem;
    elem.reserve(e.nodes.size());
    for (long id : e.nodes) {
      auto it = node_remap.find(id);
      if (it == node_remap.end()) {
        throw Error(path + ": element references unknown node " + std::to_string(id));
      }
      elem.push_back(it->second);
    }
    elems.push_back(std::move(elem));
  }
  return MeshTopology::build(dim, std::move(verts), std::move(elems));
}

MeshTopology load_node_ele(const std::string& path) {
  std::string node_path = path;
  std::string ele_path = path;
  if (ends_with(path, ".node")) {
    ele_path = path.substr(0, path.size() - 5) + ".ele";
  } else if (ends_with(path, ".ele")) {
    node_path = path.substr(0, path.size() - 4) + ".node";
  } else {
    node_path = path + ".node";
    ele_path = path + ".ele";
  }

  LineReader nr(node_path);
  std::istringstream header(nr.require("node header"));
  std::int64_t nv = 0;
  int dim = 0;
  int nattr = 0;
  int nmark = 0;
  if (!(header >> nv >> dim >> nattr >> nmark) || nv < 1 || (dim != 2 && dim != 3)) {
    nr.fail("bad .node header");
  }
  std::vector<Vec3> verts(nv);
  long first_id = -1;
  for (std::int64_t i = 0; i < nv; ++i) {
    std::istringstream ls(nr.require("node"));
    long id = 0;
    Vec3 v;
    if (!(ls >> id >> v.x >> v.y) || (dim == 3 && !(ls >> v.z))) {
      nr.fail("bad node line");
    }
    if (first_id < 0) first_id = id;
    const long idx = id - first_id;
    if (idx < 0 || idx >= nv) nr.fail("node id out of range");
    verts[idx] = v;
  }

  LineReader er(ele_path);
  std::istringstream eheader(er.require("element header"));
  std::int64_t ne = 0;
  int nodes_per = 0;
  int eattr = 0;
  if (!(eheader >> ne >> nodes_per >> eattr) || ne < 1) {
    er.fail("bad .ele header");
  }
  if ((dim == 2 && nodes_per != 3) || (dim == 3 && nodes_per != 4)) {
    er.fail("unsupported element node count " + std::to_string(nodes_per));
  }
  std::vector<std::vector<std::int32_t>> elems(ne);
  for (std::int64_t k = 0; k < ne; ++k) {
    std::istringstream ls(er.require("element"));
    long id = 0;
    if (!(ls >> id)) er.fail("bad element line");
    elems[k].resize(nodes_per);
    for (int v = 0; v < nodes_per; ++v) {
      long node = 0;
      if (!(ls >> node)) er.fail("bad element line: missing node");
      const long idx = node - first_id;
      if (idx < 0 || idx >= nv) er.fail("element references unknown node");
      elems[k][v] = static_cast<std::int32_t>(idx);
    }
  }
  return MeshTopology::build(dim, std::move(verts), std::move(elems));
}

}  // namespace

MeshTopology load_mesh(const std::string& path, MeshFormat format) {
  if (format == MeshFormat::Auto) {
    if (ends_with(path, ".msh")) {
      format = MeshFormat::Gmsh22;
    } else if (ends_with(path, ".node") || ends_with(path, ".ele")) {
      format = MeshFormat::NodeEle;
    } else {
      format = MeshFormat::Native;
    }
  }
  switch (format) {
    case MeshFormat::Gmsh22:
      return load_gmsh22(path);
    case MeshFormat::NodeEle:
      return load_node_ele(path);
    default:
      return load_native(path);
  }
}

void save_mesh_native(const MeshTopology& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot write mesh file: " + path);
  }
  out.precision(17);
  out << mesh.dim << ' ' << mesh.n_vertices() << ' ' << mesh.n_elements() << '\n';
  for (const Vec3& v : mesh.vertices) {
    out << v.x << ' ' << v.y;
    if (mesh.dim == 3) out << ' ' << v.z;
    out << '\n';
  }
  for (const auto& elem : mesh.elements) {
    out << elem.size();
    for (std::int32_t v : elem) out << ' ' << v;
    out << '\n';
  }
  if (!out) {
    throw Error("write failed: " + path);
  }
}

}  // namespace patchloc
