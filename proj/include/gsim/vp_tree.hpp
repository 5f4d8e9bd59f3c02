#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <utility>
#include <vector>

#include "gsim/metric_space.hpp"

namespace gsim {

struct VpTreeParams {
  // Candidate vantage points per node; each is scored by the spread of its
  // distances to a random sample of the same size.
  std::size_t sample_size = 5;
  std::size_t leaf_size = 8;
  std::uint64_t seed = 0;
};

// Vantage-point tree. Each inner node splits the remaining objects at the
// median distance from its vantage point into a near and a far half.
class VpTree final : public MetricIndex {
 public:
  struct Node {
    ObjectId vantage = -1;  // -1 marks a leaf
    std::int32_t near = -1, far = -1;
    // Range of d(vantage, o) over the objects of each child.
    double near_lo = 0.0, near_hi = 0.0, far_lo = 0.0, far_hi = 0.0;
    // Leaf objects with their distance to the parent's vantage point
    // (NaN when the leaf is the root).
    std::vector<std::pair<ObjectId, double>> bucket;

    bool leaf() const { return vantage < 0; }
  };

  static VpTree build(MetricSpace& space, const VpTreeParams& params);
  static VpTree read_body(std::istream& in, std::size_t n, std::uint64_t build_evaluations);

  IndexKind kind() const override { return IndexKind::kVpTree; }
  std::size_t size() const override { return n_; }
  std::vector<ObjectId> range(QueryDistance& q, double r) const override;
  std::unique_ptr<NeighborStream> ascending(QueryDistance& q) const override;
  AuditReport audit(MetricSpace& space) const override;
  std::uint64_t build_evaluations() const override { return build_evaluations_; }
  void write_body(std::ostream& out) const override;

  const std::vector<Node>& nodes() const { return nodes_; }
  const VpTreeParams& params() const { return params_; }

 private:
  VpTree() = default;

  std::int32_t build_node(MetricSpace& space, std::vector<std::pair<ObjectId, double>> items,
                          std::mt19937_64& rng);
  void range_visit(std::int32_t node, double parent_dq, QueryDistance& q, double r,
                   std::vector<ObjectId>& out) const;

  VpTreeParams params_;
  std::vector<Node> nodes_;
  std::size_t n_ = 0;
  std::uint64_t build_evaluations_ = 0;
};

}  // namespace gsim
