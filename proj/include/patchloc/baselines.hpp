#pragma once

#include <cstdint>
#include <vector>

#include "patchloc/grid.hpp"
#include "patchloc/locator.hpp"
#include "patchloc/mesh.hpp"

namespace patchloc {

// Scans every element with closed containment tests; returns the lowest-id
// containing element. tol < 0 selects 1e-12 * mesh bound diagonal.
LocateOutcome brute_force_locate(const Vec3& p, const MeshTopology& mesh,
                                 double tol = -1.0);

struct WalkStats {
  int crossings = 0;
};

// Facet-crossing walk along the segment p_start -> p_end, starting from a
// known host of p_start. Crossing an outward boundary facet yields Outside.
LocateOutcome neighbour_walk_locate(std::int32_t start_element, const Vec3& p_start,
                                    const Vec3& p_end, const MeshTopology& mesh,
                                    WalkStats* stats = nullptr);

// Classic auxiliary-grid comparator: per-cell candidate element lists built
// from element bounding boxes, queried by point-in-element tests.
struct CandidateListGrid {
  const MeshTopology* mesh = nullptr;
  GridSpec grid;
  std::vector<std::int64_t> offsets;
  std::vector<std::int32_t> candidates;
  double tol = 0.0;
};

// spacing < 0 selects the mesh size (element-scale cells).
CandidateListGrid build_candidate_grid(const MeshTopology& mesh, double spacing = -1.0);

LocateOutcome aux_grid_locate(const Vec3& p, const CandidateListGrid& clg);

}  // namespace patchloc
