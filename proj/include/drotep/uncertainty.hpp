#pragma once

#include <cstddef>
#include <vector>

#include "drotep/case.hpp"

namespace drotep {

enum class PointOrigin { kVertex, kDummy, kSample };

/// One realization of the net-demand vector (length d, MW).
struct NetDemandPoint {
  std::vector<double> values;
  PointOrigin origin = PointOrigin::kSample;

  std::size_t dimension() const { return values.size(); }

  /// Compares values only; the origin tag is bookkeeping.
  bool same_values(const NetDemandPoint& other) const {
    return values == other.values;
  }

  friend bool operator==(const NetDemandPoint&, const NetDemandPoint&) = default;
};

/// Default cap for full enumeration (2^10).
inline constexpr std::size_t kDefaultVertexCap = 1024;

/// Number of distinct vertices, saturating at SIZE_MAX.
std::size_t vertex_count(const BoxSupport& support);

/// All distinct vertices of the box. Degenerate dimensions contribute a
/// single value. Order: binary counting over the non-degenerate dimensions,
/// first dimension most significant, lower bound before upper bound.
/// Throws VertexCapExceeded if the count exceeds `cap`.
std::vector<NetDemandPoint> enumerate_vertices(const BoxSupport& support,
                                               std::size_t cap = kDefaultVertexCap);

/// Midpoint of the moment interval, tagged kDummy.
NetDemandPoint dummy_scenario(const LongTermScenario& scenario);

bool is_vertex(const BoxSupport& support, const NetDemandPoint& point);

bool inside_box(const BoxSupport& support, const NetDemandPoint& point,
                double tol = 0.0);

}  // namespace drotep
