#include "gsim/cover_tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gsim/cost_model.hpp"
#include "gsim/text.hpp"

namespace gsim {

double CoverTree::radius(int level) const { return std::pow(params_.expansion_rate, level); }

CoverTree CoverTree::build(MetricSpace& space, const CoverTreeParams& params) {
  if (!(params.expansion_rate > 1.0)) {
    throw std::invalid_argument("cover tree expansion rate must be > 1");
  }
  CoverTree tree;
  tree.params_ = params;
  tree.params_.leaf_size = std::max<std::size_t>(params.leaf_size, 1);
  tree.n_ = space.size();
  if (space.size() == 0) return tree;

  const auto before = space.evaluations();
  std::mt19937_64 rng(params.seed);
  const auto root = static_cast<ObjectId>(rng() % space.size());
  std::vector<std::pair<ObjectId, double>> items;
  items.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto id = static_cast<ObjectId>(i);
    items.emplace_back(id, id == root ? 0.0 : space.distance(root, id));
  }
  tree.build_node(space, root, 0.0, std::move(items));
  tree.build_evaluations_ = space.evaluations() - before;
  return tree;
}

std::int32_t CoverTree::build_node(MetricSpace& space, ObjectId routing, double parent_dist,
                                   std::vector<std::pair<ObjectId, double>> items) {
  const auto index = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();
  double max_d = 0.0;
  for (const auto& it : items) max_d = std::max(max_d, it.second);

  const double base = params_.expansion_rate;
  int level = max_d > 0.0 ? static_cast<int>(std::ceil(std::log(max_d) / std::log(base))) : 0;
  // Repair rounding of the logarithm.
  while (std::pow(base, level) < max_d) ++level;
  while (max_d > 0.0 && std::pow(base, level - 1) >= max_d) --level;

  Node node;
  node.routing = routing;
  node.level = level;
  node.parent_dist = parent_dist;
  node.max_dist = max_d;

  if (items.size() <= params_.leaf_size || max_d <= 0.0) {
    std::sort(items.begin(), items.end());
    node.entries = std::move(items);
    nodes_[index] = std::move(node);
    return index;
  }

  const double cr = std::pow(base, level - 1);
  std::vector<std::pair<ObjectId, double>> self;
  std::vector<std::pair<ObjectId, double>> rest;  // (id, d(routing, id))
  for (const auto& it : items) (it.second <= cr ? self : rest).push_back(it);

  struct Group {
    ObjectId center;
    double center_dist;
    std::vector<std::pair<ObjectId, double>> items;
  };
  std::vector<Group> groups;
  while (!rest.empty()) {
    // Farthest remaining object from the routing object, lowest id on ties.
    auto far = std::max_element(rest.begin(), rest.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second < b.second;
      return a.first > b.first;
    });
    Group g{far->first, far->second, {{far->first, 0.0}}};
    std::vector<std::pair<ObjectId, double>> keep;
    for (const auto& it : rest) {
      if (it.first == g.center) continue;
      const double d = space.distance(g.center, it.first);
      if (d <= cr) {
        g.items.emplace_back(it.first, d);
      } else {
        keep.push_back(it);
      }
    }
    rest = std::move(keep);
    groups.push_back(std::move(g));
  }

  nodes_[index] = std::move(node);
  const auto self_child = build_node(space, routing, 0.0, std::move(self));
  nodes_[index].children.push_back(self_child);
  for (auto& g : groups) {
    const auto child = build_node(space, g.center, g.center_dist, std::move(g.items));
    nodes_[index].children.push_back(child);
  }
  return index;
}

void CoverTree::range_visit(std::int32_t index, QueryDistance& q, double r,
                            std::vector<ObjectId>& out) const {
  const auto& node = nodes_[index];
  const double limit = r + kEpsilon;
  const double dq = q(node.routing);
  if (node.leaf()) {
    for (const auto& [id, d] : node.entries) {
      if (std::abs(dq - d) - kEpsilon > limit) continue;
      if (q(id) <= limit) out.push_back(id);
    }
    return;
  }
  for (std::int32_t c : node.children) {
    const auto& child = nodes_[c];
    if (std::abs(dq - child.parent_dist) - child.max_dist - kEpsilon > limit) continue;
    if (q(child.routing) - child.max_dist - kEpsilon > limit) continue;
    range_visit(c, q, r, out);
  }
}

std::vector<ObjectId> CoverTree::range(QueryDistance& q, double r) const {
  std::vector<ObjectId> out;
  if (!nodes_.empty()) range_visit(0, q, r, out);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

class CoverStream final : public BestFirstStream {
 public:
  CoverStream(const CoverTree& tree, QueryDistance& q) : BestFirstStream(q), tree_(tree) {
    if (!tree.nodes().empty()) push_node(0, 0.0);
  }

 protected:
  void expand(std::int32_t index, double key, double) override {
    const auto& node = tree_.nodes()[index];
    const double dq = query()(node.routing);
    if (node.leaf()) {
      for (const auto& [id, d] : node.entries) {
        push_object(id, std::max(key, std::abs(dq - d) - kEpsilon));
      }
      return;
    }
    for (std::int32_t c : node.children) {
      const auto& child = tree_.nodes()[c];
      push_node(c, std::max(key, std::abs(dq - child.parent_dist) - child.max_dist - kEpsilon));
    }
  }

 private:
  const CoverTree& tree_;
};

}  // namespace

std::unique_ptr<NeighborStream> CoverTree::ascending(QueryDistance& q) const {
  return std::make_unique<CoverStream>(*this, q);
}

AuditReport CoverTree::audit(MetricSpace& space) const {
  AuditReport report;
  auto problem = [&](const std::string& s) { report.problems.push_back(s); };
  std::vector<int> seen(n_, 0);

  std::function<std::vector<ObjectId>(std::int32_t)> visit =
      [&](std::int32_t index) -> std::vector<ObjectId> {
    const auto& node = nodes_[index];
    const std::string where = "node " + std::to_string(index);
    std::vector<ObjectId> objects;
    if (node.leaf()) {
      for (const auto& [id, d] : node.entries) {
        objects.push_back(id);
        const double actual = id == node.routing ? 0.0 : space.distance(node.routing, id);
        if (std::abs(actual - d) > kEpsilon) {
          problem(where + ": stored distance of object " + std::to_string(id) + " is stale");
        }
      }
    } else {
      const double cover = radius(node.level);
      const double separation = radius(node.level - 1);
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        const auto& child = nodes_[node.children[i]];
        if (child.level >= node.level) problem(where + ": child level not below parent");
        const double pd = space.distance(node.routing, child.routing);
        if (std::abs(pd - child.parent_dist) > kEpsilon) {
          problem(where + ": stale parent distance of child " + std::to_string(i));
        }
        if (pd > cover + kEpsilon) problem(where + ": child outside the cover radius");
        for (std::size_t j = 0; j < i; ++j) {
          const auto& other = nodes_[node.children[j]];
          if (space.distance(child.routing, other.routing) <= separation - kEpsilon) {
            problem(where + ": children " + std::to_string(j) + " and " + std::to_string(i) +
                    " violate separation");
          }
        }
        auto sub = visit(node.children[i]);
        objects.insert(objects.end(), sub.begin(), sub.end());
      }
      if (nodes_[node.children.front()].routing != node.routing) {
        problem(where + ": first child does not reuse the routing object");
      }
    }
    // Covering of the whole subtree.
    for (ObjectId o : objects) {
      const double d = o == node.routing ? 0.0 : space.distance(node.routing, o);
      if (d > node.max_dist + kEpsilon) {
        problem(where + ": object " + std::to_string(o) + " beyond the stored max distance");
      }
      if (!node.leaf() && d > radius(node.level) + kEpsilon) {
        problem(where + ": object " + std::to_string(o) + " outside the cover radius");
      }
    }
    return objects;
  };

  if (!nodes_.empty()) {
    for (ObjectId o : visit(0)) {
      if (o < 0 || static_cast<std::size_t>(o) >= n_) {
        problem("object id " + std::to_string(o) + " out of range");
      } else {
        ++seen[o];
      }
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (seen[i] != 1) {
      problem("object " + std::to_string(i) + " has " + std::to_string(seen[i]) +
              " leaf occurrences");
    }
  }
  return report;
}

void CoverTree::write_body(std::ostream& out) const {
  out << "params expansion_rate=" << format_double(params_.expansion_rate)
      << " leaf_size=" << params_.leaf_size << " seed=" << params_.seed << "\n";
  out << "nodes " << nodes_.size() << "\n";
  for (const auto& node : nodes_) {
    out << (node.leaf() ? "L " : "I ") << node.routing << " " << node.level << " "
        << format_double(node.parent_dist) << " " << format_double(node.max_dist);
    if (node.leaf()) {
      out << " " << node.entries.size();
      for (const auto& [id, d] : node.entries) out << " " << id << " " << format_double(d);
    } else {
      out << " " << node.children.size();
      for (auto c : node.children) out << " " << c;
    }
    out << "\n";
  }
}

namespace {

std::string next_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("index file: unexpected end");
  return line;
}

std::string param_value(const std::string& line, const std::string& key) {
  for (const auto& tok : tokenize(line)) {
    if (tok.substr(0, key.size() + 1) == key + "=") return std::string(tok.substr(key.size() + 1));
  }
  throw std::runtime_error("index file: missing parameter " + key);
}

template <typename T>
T take(const std::vector<std::string_view>& toks, std::size_t& pos) {
  if (pos >= toks.size()) throw std::runtime_error("index file: truncated node record");
  const auto& tok = toks[pos++];
  std::optional<T> v;
  if constexpr (std::is_floating_point_v<T>) {
    v = parse_double(tok);
  } else {
    v = parse_int<T>(tok);
  }
  if (!v) throw std::runtime_error("index file: bad number '" + std::string(tok) + "'");
  return *v;
}

}  // namespace

CoverTree CoverTree::read_body(std::istream& in, std::size_t n, std::uint64_t build_evaluations) {
  CoverTree tree;
  tree.n_ = n;
  tree.build_evaluations_ = build_evaluations;
  const auto params = next_line(in);
  auto rate = parse_double(param_value(params, "expansion_rate"));
  auto leaf = parse_int<std::size_t>(param_value(params, "leaf_size"));
  auto seed = parse_int<std::uint64_t>(param_value(params, "seed"));
  if (!rate || !leaf || !seed) throw std::runtime_error("index file: bad cover tree parameters");
  tree.params_ = {*rate, *leaf, *seed};

  const auto header_line = next_line(in);
  const auto header = tokenize(header_line);
  if (header.size() != 2 || header[0] != "nodes") {
    throw std::runtime_error("index file: expected node count");
  }
  std::size_t pos = 1;
  const auto count = take<std::size_t>(header, pos);
  tree.nodes_.resize(count);
  for (auto& node : tree.nodes_) {
    const auto line = next_line(in);
    const auto toks = tokenize(line);
    if (toks.empty() || (toks[0] != "I" && toks[0] != "L")) {
      throw std::runtime_error("index file: bad node record");
    }
    pos = 1;
    node.routing = take<ObjectId>(toks, pos);
    node.level = take<int>(toks, pos);
    node.parent_dist = take<double>(toks, pos);
    node.max_dist = take<double>(toks, pos);
    const auto k = take<std::size_t>(toks, pos);
    for (std::size_t i = 0; i < k; ++i) {
      if (toks[0] == "L") {
        const auto id = take<ObjectId>(toks, pos);
        node.entries.emplace_back(id, take<double>(toks, pos));
      } else {
        const auto c = take<std::int32_t>(toks, pos);
        if (c <= 0 || static_cast<std::size_t>(c) >= count) {
          throw std::runtime_error("index file: child index out of range");
        }
        node.children.push_back(c);
      }
    }
    if (toks[0] == "I" && node.children.empty()) {
      throw std::runtime_error("index file: inner node without children");
    }
  }
  return tree;
}

}  // namespace gsim
