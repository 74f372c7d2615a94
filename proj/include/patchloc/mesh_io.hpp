#pragma once

#include <string>

#include "patchloc/mesh.hpp"

namespace patchloc {

enum class MeshFormat { Auto, Gmsh22, NodeEle, Native };

// Auto resolves from the extension: .msh -> Gmsh22, .node/.ele -> NodeEle,
// anything else -> Native.
MeshTopology load_mesh(const std::string& path, MeshFormat format = MeshFormat::Auto);

void save_mesh_native(const MeshTopology& mesh, const std::string& path);

}  // namespace patchloc
