#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

namespace gsim {

using ObjectId = std::int32_t;

// Objects 0..n-1 under a pseudo-metric, counting evaluations.
class MetricSpace {
 public:
  using Distance = std::function<double(ObjectId, ObjectId)>;

  MetricSpace(std::size_t n, Distance d) : n_(n), d_(std::move(d)) {}

  std::size_t size() const { return n_; }
  double distance(ObjectId a, ObjectId b) {
    ++evaluations_;
    return d_(a, b);
  }
  std::uint64_t evaluations() const { return evaluations_; }
  void reset_evaluations() { evaluations_ = 0; }

 private:
  std::size_t n_;
  Distance d_;
  std::uint64_t evaluations_ = 0;
};

// Memoized distances from one query object to the database objects. Owned by
// a single query; not thread-safe.
class QueryDistance {
 public:
  using Distance = std::function<double(ObjectId)>;

  QueryDistance(std::size_t n, Distance d)
      : d_(std::move(d)), memo_(n, std::numeric_limits<double>::quiet_NaN()) {}

  double operator()(ObjectId id) {
    double& slot = memo_[id];
    if (slot != slot) {
      slot = d_(id);
      ++evaluations_;
    }
    return slot;
  }
  bool known(ObjectId id) const { return memo_[id] == memo_[id]; }
  std::uint64_t evaluations() const { return evaluations_; }
  std::size_t size() const { return memo_.size(); }

 private:
  Distance d_;
  std::vector<double> memo_;
  std::uint64_t evaluations_ = 0;
};

struct Ranked {  // an object with its distance to the query
  ObjectId id;
  double distance;
};

// Lazily yields objects in non-decreasing distance order (ties by id).
class NeighborStream {
 public:
  virtual ~NeighborStream() = default;
  virtual std::optional<Ranked> next() = 0;
};

enum class IndexKind { kNone, kVpTree, kCoverTree };

const char* to_string(IndexKind kind);
IndexKind parse_index_kind(const std::string& name);

struct AuditReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

class MetricIndex {
 public:
  virtual ~MetricIndex() = default;

  virtual IndexKind kind() const = 0;
  virtual std::size_t size() const = 0;

  // Exactly the objects with d(q, o) <= r + kEpsilon.
  virtual std::vector<ObjectId> range(QueryDistance& q, double r) const = 0;
  virtual std::unique_ptr<NeighborStream> ascending(QueryDistance& q) const = 0;

  // Recomputes every stored distance and checks the structural invariants.
  virtual AuditReport audit(MetricSpace& space) const = 0;

  // Distance evaluations spent during construction.
  virtual std::uint64_t build_evaluations() const = 0;

  virtual void write_body(std::ostream& out) const = 0;
};

// Best-first traversal shared by the tree indices. Queue entries are either
// pending (a subtree or an object whose key is a lower bound) or exact (an
// object with its true distance). At equal keys pending entries are expanded
// first, so exact entries surface in (distance, id) order.
class BestFirstStream : public NeighborStream {
 public:
  explicit BestFirstStream(QueryDistance& q) : q_(q) {}

  std::optional<Ranked> next() override;

 protected:
  // Expands a node entry, pushing children and objects.
  virtual void expand(std::int32_t node, double key, double aux) = 0;

  void push_node(std::int32_t node, double lower_bound, double aux = 0.0) {
    queue_.push({lower_bound, 0, node, aux});
  }
  void push_object(ObjectId id, double lower_bound) {
    if (q_.known(id)) {
      queue_.push({q_(id), 2, id, 0.0});
    } else {
      queue_.push({lower_bound, 1, id, 0.0});
    }
  }
  QueryDistance& query() { return q_; }

 private:
  struct Entry {
    double key;
    int kind;  // 0 node, 1 pending object, 2 exact object
    std::int32_t ref;
    double aux;
    bool operator>(const Entry& o) const {
      if (key != o.key) return key > o.key;
      const bool pending = kind < 2, other_pending = o.kind < 2;
      if (pending != other_pending) return !pending;
      if (kind != o.kind) return kind > o.kind;
      return ref > o.ref;
    }
  };

  QueryDistance& q_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue_;
};

}  // namespace gsim
