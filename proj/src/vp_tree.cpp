#include "gsim/vp_tree.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gsim/cost_model.hpp"
#include "gsim/text.hpp"

namespace gsim {

namespace {

// Picks k distinct positions of [0, n) by partial Fisher-Yates.
std::vector<std::size_t> sample_positions(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> pos(n);
  std::iota(pos.begin(), pos.end(), 0);
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(pos[i], pos[j]);
  }
  pos.resize(k);
  return pos;
}

double lower_bound_in(double dq, double lo, double hi) {
  return std::max({0.0, dq - hi, lo - dq});
}

}  // namespace

VpTree VpTree::build(MetricSpace& space, const VpTreeParams& params) {
  if (params.sample_size == 0) throw std::invalid_argument("vp-tree sample size must be >= 1");
  VpTree tree;
  tree.params_ = params;
  tree.params_.leaf_size = std::max<std::size_t>(params.leaf_size, 1);
  tree.n_ = space.size();
  const auto before = space.evaluations();
  std::mt19937_64 rng(params.seed);
  std::vector<std::pair<ObjectId, double>> items(space.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    items[i] = {static_cast<ObjectId>(i), std::numeric_limits<double>::quiet_NaN()};
  }
  if (!items.empty()) tree.build_node(space, std::move(items), rng);
  tree.build_evaluations_ = space.evaluations() - before;
  return tree;
}

std::int32_t VpTree::build_node(MetricSpace& space, std::vector<std::pair<ObjectId, double>> items,
                                std::mt19937_64& rng) {
  const auto index = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();
  if (items.size() <= params_.leaf_size) {
    std::sort(items.begin(), items.end());
    nodes_[index].bucket = std::move(items);
    return index;
  }

  // Vantage point: the candidate whose sampled distances spread the most.
  const std::size_t m = items.size();
  std::size_t best_pos = 0;
  double best_spread = -1.0;
  for (std::size_t cand : sample_positions(m, params_.sample_size, rng)) {
    auto sample = sample_positions(m, params_.sample_size + 1, rng);
    double sum = 0.0, sq = 0.0;
    std::size_t count = 0;
    for (std::size_t s : sample) {
      if (s == cand) continue;
      const double d = space.distance(items[cand].first, items[s].first);
      sum += d;
      sq += d * d;
      ++count;
    }
    const double mean = count ? sum / count : 0.0;
    const double spread = count ? sq / count - mean * mean : 0.0;
    if (spread > best_spread) {
      best_spread = spread;
      best_pos = cand;
    }
  }
  const ObjectId vp = items[best_pos].first;

  std::vector<std::pair<double, ObjectId>> dist;
  dist.reserve(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    if (i == best_pos) continue;
    dist.emplace_back(space.distance(vp, items[i].first), items[i].first);
  }
  std::sort(dist.begin(), dist.end());
  const std::size_t half = (dist.size() + 1) / 2;
  std::vector<std::pair<ObjectId, double>> near, far;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    (i < half ? near : far).emplace_back(dist[i].second, dist[i].first);
  }

  Node node;
  node.vantage = vp;
  node.near_lo = dist.front().first;
  node.near_hi = dist[half - 1].first;
  if (!far.empty()) {
    node.far_lo = dist[half].first;
    node.far_hi = dist.back().first;
  }
  node.near = build_node(space, std::move(near), rng);
  if (!far.empty()) node.far = build_node(space, std::move(far), rng);
  nodes_[index] = std::move(node);
  return index;
}

void VpTree::range_visit(std::int32_t index, double parent_dq, QueryDistance& q, double r,
                         std::vector<ObjectId>& out) const {
  const auto& node = nodes_[index];
  const double limit = r + kEpsilon;
  if (node.leaf()) {
    for (const auto& [id, dp] : node.bucket) {
      if (!std::isnan(dp) && std::abs(parent_dq - dp) - kEpsilon > limit) continue;
      if (q(id) <= limit) out.push_back(id);
    }
    return;
  }
  const double dq = q(node.vantage);
  if (dq <= limit) out.push_back(node.vantage);
  if (lower_bound_in(dq, node.near_lo, node.near_hi) - kEpsilon <= limit) {
    range_visit(node.near, dq, q, r, out);
  }
  if (node.far >= 0 && lower_bound_in(dq, node.far_lo, node.far_hi) - kEpsilon <= limit) {
    range_visit(node.far, dq, q, r, out);
  }
}

std::vector<ObjectId> VpTree::range(QueryDistance& q, double r) const {
  std::vector<ObjectId> out;
  if (!nodes_.empty()) range_visit(0, 0.0, q, r, out);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

class VpStream final : public BestFirstStream {
 public:
  VpStream(const VpTree& tree, QueryDistance& q) : BestFirstStream(q), tree_(tree) {
    if (!tree.nodes().empty()) push_node(0, 0.0, 0.0);
  }

 protected:
  void expand(std::int32_t index, double key, double parent_dq) override {
    const auto& node = tree_.nodes()[index];
    if (node.leaf()) {
      for (const auto& [id, dp] : node.bucket) {
        const double lb = std::isnan(dp) ? key : std::max(key, std::abs(parent_dq - dp) - kEpsilon);
        push_object(id, lb);
      }
      return;
    }
    const double dq = query()(node.vantage);
    push_object(node.vantage, dq);
    push_node(node.near, std::max(key, lower_bound_in(dq, node.near_lo, node.near_hi) - kEpsilon), dq);
    if (node.far >= 0) {
      push_node(node.far, std::max(key, lower_bound_in(dq, node.far_lo, node.far_hi) - kEpsilon), dq);
    }
  }

 private:
  const VpTree& tree_;
};

}  // namespace

std::unique_ptr<NeighborStream> VpTree::ascending(QueryDistance& q) const {
  return std::make_unique<VpStream>(*this, q);
}

AuditReport VpTree::audit(MetricSpace& space) const {
  AuditReport report;
  auto problem = [&](const std::string& s) { report.problems.push_back(s); };
  std::vector<int> seen(n_, 0);

  // Returns the objects of a subtree.
  std::function<std::vector<ObjectId>(std::int32_t, ObjectId)> visit =
      [&](std::int32_t index, ObjectId parent_vp) -> std::vector<ObjectId> {
    const auto& node = nodes_[index];
    std::vector<ObjectId> objects;
    if (node.leaf()) {
      for (const auto& [id, dp] : node.bucket) {
        objects.push_back(id);
        if (parent_vp >= 0) {
          const double d = space.distance(parent_vp, id);
          if (std::abs(d - dp) > kEpsilon) {
            problem("leaf " + std::to_string(index) + ": stored distance of object " +
                    std::to_string(id) + " is stale");
          }
        } else if (!std::isnan(dp)) {
          problem("root leaf carries a parent distance");
        }
      }
      return objects;
    }
    objects.push_back(node.vantage);
    auto check_child = [&](std::int32_t child, double lo, double hi, bool is_near) {
      auto sub = visit(child, node.vantage);
      for (ObjectId o : sub) {
        const double d = space.distance(node.vantage, o);
        if (d < lo - kEpsilon || d > hi + kEpsilon) {
          problem("node " + std::to_string(index) + ": object " + std::to_string(o) +
                  " outside its child distance range");
        }
        if (is_near && d > node.near_hi + kEpsilon) problem("near object beyond the median");
        if (!is_near && d < node.near_hi - kEpsilon) problem("far object inside the median");
      }
      objects.insert(objects.end(), sub.begin(), sub.end());
    };
    check_child(node.near, node.near_lo, node.near_hi, true);
    if (node.far >= 0) check_child(node.far, node.far_lo, node.far_hi, false);
    return objects;
  };
  if (!nodes_.empty()) {
    for (ObjectId o : visit(0, -1)) {
      if (o < 0 || static_cast<std::size_t>(o) >= n_) {
        problem("object id " + std::to_string(o) + " out of range");
      } else {
        ++seen[o];
      }
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (seen[i] != 1) {
      problem("object " + std::to_string(i) + " stored " + std::to_string(seen[i]) + " times");
    }
  }
  return report;
}

void VpTree::write_body(std::ostream& out) const {
  out << "params sample_size=" << params_.sample_size << " leaf_size=" << params_.leaf_size
      << " seed=" << params_.seed << "\n";
  out << "nodes " << nodes_.size() << "\n";
  for (const auto& node : nodes_) {
    if (node.leaf()) {
      out << "L " << node.bucket.size();
      for (const auto& [id, d] : node.bucket) out << " " << id << " " << format_double(d);
    } else {
      out << "I " << node.vantage << " " << node.near << " " << node.far << " "
          << format_double(node.near_lo) << " " << format_double(node.near_hi) << " "
          << format_double(node.far_lo) << " " << format_double(node.far_hi);
    }
    out << "\n";
  }
}

namespace {

template <typename T>
T expect_number(std::istringstream& in, const char* what) {
  std::string tok;
  if (!(in >> tok)) throw std::runtime_error(std::string("index file: missing ") + what);
  if constexpr (std::is_floating_point_v<T>) {
    auto x = parse_double(tok);
    if (!x) throw std::runtime_error(std::string("index file: bad ") + what);
    return *x;
  } else {
    auto x = parse_int<T>(tok);
    if (!x) throw std::runtime_error(std::string("index file: bad ") + what);
    return *x;
  }
}

std::string next_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("index file: unexpected end");
  return line;
}

std::size_t parse_param(const std::string& line, const std::string& key) {
  auto pos = line.find(key + "=");
  if (pos == std::string::npos) throw std::runtime_error("index file: missing parameter " + key);
  std::istringstream in(line.substr(pos + key.size() + 1));
  std::uint64_t v;
  in >> v;
  return v;
}

}  // namespace

VpTree VpTree::read_body(std::istream& in, std::size_t n, std::uint64_t build_evaluations) {
  VpTree tree;
  tree.n_ = n;
  tree.build_evaluations_ = build_evaluations;
  const auto params = next_line(in);
  tree.params_.sample_size = parse_param(params, "sample_size");
  tree.params_.leaf_size = parse_param(params, "leaf_size");
  tree.params_.seed = parse_param(params, "seed");
  std::istringstream header(next_line(in));
  std::string word;
  header >> word;
  if (word != "nodes") throw std::runtime_error("index file: expected node count");
  const auto count = expect_number<std::size_t>(header, "node count");
  tree.nodes_.resize(count);
  for (auto& node : tree.nodes_) {
    std::istringstream line(next_line(in));
    line >> word;
    if (word == "L") {
      const auto k = expect_number<std::size_t>(line, "bucket size");
      for (std::size_t i = 0; i < k; ++i) {
        const auto id = expect_number<ObjectId>(line, "object id");
        const auto d = expect_number<double>(line, "distance");
        node.bucket.emplace_back(id, d);
      }
    } else if (word == "I") {
      node.vantage = expect_number<ObjectId>(line, "vantage point");
      node.near = expect_number<std::int32_t>(line, "near child");
      node.far = expect_number<std::int32_t>(line, "far child");
      node.near_lo = expect_number<double>(line, "range");
      node.near_hi = expect_number<double>(line, "range");
      node.far_lo = expect_number<double>(line, "range");
      node.far_hi = expect_number<double>(line, "range");
      const auto c = static_cast<std::int32_t>(count);
      if (node.near < 0 || node.near >= c || node.far >= c) {
        throw std::runtime_error("index file: child index out of range");
      }
    } else {
      throw std::runtime_error("index file: bad node record '" + word + "'");
    }
  }
  return tree;
}

}  // namespace gsim
