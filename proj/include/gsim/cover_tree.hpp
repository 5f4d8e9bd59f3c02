#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <utility>
#include <vector>

#include "gsim/metric_space.hpp"

namespace gsim {

struct CoverTreeParams {
  double expansion_rate = 1.2;  // cover radius at level L is expansion_rate^L
  std::size_t leaf_size = 8;
  std::uint64_t seed = 0;
};

// Cover tree built in batch. A node at level L covers its subtree within
// expansion_rate^L of its routing object; its children are routed by objects
// pairwise more than expansion_rate^(L-1) apart. The first child of an inner
// node reuses the parent's routing object.
class CoverTree final : public MetricIndex {
 public:
  struct Node {
    ObjectId routing = -1;
    int level = 0;
    double parent_dist = 0.0;  // d(parent routing, routing); 0 at the root
    double max_dist = 0.0;     // max d(routing, o) over the subtree
    std::vector<std::int32_t> children;
    // Leaf objects with d(routing, o); empty for inner nodes.
    std::vector<std::pair<ObjectId, double>> entries;

    bool leaf() const { return children.empty(); }
  };

  static CoverTree build(MetricSpace& space, const CoverTreeParams& params);
  static CoverTree read_body(std::istream& in, std::size_t n, std::uint64_t build_evaluations);

  IndexKind kind() const override { return IndexKind::kCoverTree; }
  std::size_t size() const override { return n_; }
  std::vector<ObjectId> range(QueryDistance& q, double r) const override;
  std::unique_ptr<NeighborStream> ascending(QueryDistance& q) const override;
  AuditReport audit(MetricSpace& space) const override;
  std::uint64_t build_evaluations() const override { return build_evaluations_; }
  void write_body(std::ostream& out) const override;

  const std::vector<Node>& nodes() const { return nodes_; }
  const CoverTreeParams& params() const { return params_; }
  double radius(int level) const;

 private:
  CoverTree() = default;

  // items: (id, d(routing, id)), including the routing object itself.
  std::int32_t build_node(MetricSpace& space, ObjectId routing, double parent_dist,
                          std::vector<std::pair<ObjectId, double>> items);
  void range_visit(std::int32_t node, QueryDistance& q, double r,
                   std::vector<ObjectId>& out) const;

  CoverTreeParams params_;
  std::vector<Node> nodes_;
  std::size_t n_ = 0;
  std::uint64_t build_evaluations_ = 0;
};

}  // namespace gsim
