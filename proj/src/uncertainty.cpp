#include "drotep/uncertainty.hpp"

#include <limits>

#include "drotep/error.hpp"

namespace drotep {

std::size_t vertex_count(const BoxSupport& support) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < support.dimension(); ++i) {
    if (support.degenerate(i)) continue;
    if (count > std::numeric_limits<std::size_t>::max() / 2) {
      return std::numeric_limits<std::size_t>::max();
    }
    count *= 2;
  }
  return count;
}

std::vector<NetDemandPoint> enumerate_vertices(const BoxSupport& support,
                                               std::size_t cap) {
  const std::size_t total = vertex_count(support);
  if (total > cap) throw VertexCapExceeded(total, cap);

  std::vector<std::size_t> free_dims;
  for (std::size_t i = 0; i < support.dimension(); ++i) {
    if (!support.degenerate(i)) free_dims.push_back(i);
  }
  const std::size_t f = free_dims.size();

  std::vector<NetDemandPoint> out;
  out.reserve(total);
  for (std::size_t code = 0; code < total; ++code) {
    NetDemandPoint p{support.lower, PointOrigin::kVertex};
    for (std::size_t j = 0; j < f; ++j) {
      // First free dimension is the most significant bit.
      if ((code >> (f - 1 - j)) & 1U) p.values[free_dims[j]] = support.upper[free_dims[j]];
    }
    out.push_back(std::move(p));
  }
  return out;
}

NetDemandPoint dummy_scenario(const LongTermScenario& scenario) {
  const MomentInterval& m = scenario.moments;
  NetDemandPoint p;
  p.origin = PointOrigin::kDummy;
  p.values.resize(m.mu_lower.size());
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    p.values[i] = 0.5 * (m.mu_lower[i] + m.mu_upper[i]);
  }
  return p;
}

bool is_vertex(const BoxSupport& support, const NetDemandPoint& point) {
  if (point.dimension() != support.dimension()) return false;
  for (std::size_t i = 0; i < point.dimension(); ++i) {
    if (point.values[i] != support.lower[i] && point.values[i] != support.upper[i]) {
      return false;
    }
  }
  return true;
}

bool inside_box(const BoxSupport& support, const NetDemandPoint& point, double tol) {
  if (point.dimension() != support.dimension()) return false;
  for (std::size_t i = 0; i < point.dimension(); ++i) {
    if (point.values[i] < support.lower[i] - tol) return false;
    if (point.values[i] > support.upper[i] + tol) return false;
  }
  return true;
}

}  // namespace drotep
