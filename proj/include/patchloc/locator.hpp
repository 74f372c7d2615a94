#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "patchloc/index.hpp"

namespace patchloc {

struct LocateOutcome {
  std::int32_t element = kNone;

  bool inside() const { return element != kNone; }
  static LocateOutcome outside() { return {}; }

  bool operator==(const LocateOutcome&) const = default;
};

LocateOutcome locate_2d(const Vec2& p, const LocatorIndex& index);
LocateOutcome locate_3d(const Vec3& p, const LocatorIndex& index);
LocateOutcome locate(const Vec3& p, const LocatorIndex& index);

// Element-wise equal to single-point calls; order preserved. The parallel
// path partitions points across threads and writes by position, so outcomes
// are identical to the serial ones.
std::vector<LocateOutcome> locate_batch(std::span<const Vec3> points,
                                        const LocatorIndex& index,
                                        bool parallel = false);

}  // namespace patchloc
