#include "gsim/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "gsim/hash.hpp"
#include "gsim/text.hpp"

namespace gsim {

std::uint64_t CostModel::hash() const {
  Fnv1a h;
  h.str(describe());
  return h.value();
}

double vertex_cost(const CostModel& m, const Label* u, const Label* v) {
  if (u && v) return m.vertex_substitution(*u, *v);
  if (u) return m.vertex_deletion(*u);
  if (v) return m.vertex_insertion(*v);
  throw std::invalid_argument("vertex_cost: both operands are epsilon");
}

double edge_cost(const CostModel& m, const Label* uv, const Label* wx) {
  if (uv && wx) return m.edge_substitution(*uv, *wx);
  if (uv) return m.edge_deletion(*uv);
  if (wx) return m.edge_insertion(*wx);
  throw std::invalid_argument("edge_cost: both operands are epsilon");
}

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("attribute dimension mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

UniformCostModel::UniformCostModel(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("uniform cost gamma must be positive and finite");
  }
}

double UniformCostModel::vertex_substitution(const Label& a, const Label& b) const {
  return a == b ? 0.0 : gamma_;
}

double UniformCostModel::edge_substitution(const Label& a, const Label& b) const {
  return a == b ? 0.0 : gamma_;
}

std::string UniformCostModel::describe() const {
  return "uniform gamma=" + format_double(gamma_);
}

EuclideanCostModel::EuclideanCostModel(double delta_v, double delta_e, std::size_t edge_dim,
                                       bool edge_symbols, bool mixed, double gamma)
    : delta_v_(delta_v),
      delta_e_(delta_e),
      edge_dim_(edge_dim),
      edge_symbols_(edge_symbols),
      mixed_(mixed),
      gamma_(gamma) {
  for (double x : {delta_v, delta_e, gamma}) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("cost parameters must be positive and finite");
    }
  }
}

double EuclideanCostModel::relabel(const Label& a, const Label& b) const {
  double c = euclidean_distance(a.attributes, b.attributes);
  if (mixed_ && a.symbol != b.symbol) c += gamma_;
  return c;
}

double EuclideanCostModel::vertex_substitution(const Label& a, const Label& b) const {
  return relabel(a, b);
}

double EuclideanCostModel::edge_substitution(const Label& a, const Label& b) const {
  return relabel(a, b);
}

bool EuclideanCostModel::uniform_edge_costs() const {
  if (edge_dim_ != 0) return false;
  // Without edge attributes, substitution is 0 or (mixed) gamma on symbol
  // mismatch; equality must coincide with exact label equality.
  if (!edge_symbols_) return true;
  return mixed_ && gamma_ == delta_e_;
}

std::string EuclideanCostModel::describe() const {
  std::string s = mixed_ ? "mixed" : "euclidean";
  s += " delta_v=" + format_double(delta_v_) + " delta_e=" + format_double(delta_e_);
  if (mixed_) s += " gamma=" + format_double(gamma_);
  s += " edge_dim=" + std::to_string(edge_dim_) + " edge_symbols=" + (edge_symbols_ ? "1" : "0");
  return s;
}

CostConfig parse_cost_config(const std::string& text) {
  CostConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (tokenize(line).empty()) continue;
    auto eq = line.find('=');
    auto where = "cost config line " + std::to_string(lineno);
    if (eq == std::string::npos) throw std::invalid_argument(where + ": expected key = value");
    auto key_tokens = tokenize(std::string_view(line).substr(0, eq));
    auto value_tokens = tokenize(std::string_view(line).substr(eq + 1));
    if (key_tokens.size() != 1 || value_tokens.size() != 1) {
      throw std::invalid_argument(where + ": expected key = value");
    }
    std::string key(key_tokens[0]), value(value_tokens[0]);
    if (key == "model") {
      if (value == "uniform") cfg.kind = CostModelKind::kUniform;
      else if (value == "euclidean") cfg.kind = CostModelKind::kEuclidean;
      else if (value == "mixed") cfg.kind = CostModelKind::kMixed;
      else throw std::invalid_argument(where + ": unknown model '" + value + "'");
    } else if (key == "delta_v" || key == "delta_e" || key == "gamma") {
      auto x = parse_double(value);
      if (!x || !(*x > 0.0)) throw std::invalid_argument(where + ": " + key + " must be > 0");
      (key == "delta_v" ? cfg.delta_v : key == "delta_e" ? cfg.delta_e : cfg.gamma) = *x;
    } else {
      throw std::invalid_argument(where + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

CostConfig load_cost_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cost config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_cost_config(ss.str());
}

CostModelPtr make_cost_model(const CostConfig& cfg, const GraphDatabase& db) {
  switch (cfg.kind) {
    case CostModelKind::kUniform:
      return std::make_shared<UniformCostModel>(cfg.gamma);
    case CostModelKind::kEuclidean:
    case CostModelKind::kMixed: {
      bool edge_symbols = false;
      for (const auto& g : db.graphs) {
        for (const auto& e : g.edges()) edge_symbols |= e.label.symbol.has_value();
      }
      return std::make_shared<EuclideanCostModel>(cfg.delta_v, cfg.delta_e, db.edge_dim,
                                                  edge_symbols,
                                                  cfg.kind == CostModelKind::kMixed, cfg.gamma);
    }
  }
  throw std::logic_error("unreachable cost model kind");
}

// ---------------------------------------------------------------------------

const char* to_string(MetricRule rule) {
  switch (rule) {
    case MetricRule::kVertexTriangle: return "vertex substitution triangle";
    case MetricRule::kVertexSubVsDelIns: return "vertex substitution <= deletion + insertion";
    case MetricRule::kEdgeTriangle: return "edge substitution triangle";
    case MetricRule::kEdgeSubVsDelIns: return "edge substitution <= deletion + insertion";
    case MetricRule::kSymmetry: return "symmetry";
    case MetricRule::kIdentity: return "identity";
  }
  return "?";
}

namespace {

struct ElementCosts {
  bool edges;
  const CostModel& m;
  double sub(const Label& a, const Label& b) const {
    return edges ? m.edge_substitution(a, b) : m.vertex_substitution(a, b);
  }
  double del(const Label& a) const { return edges ? m.edge_deletion(a) : m.vertex_deletion(a); }
  double ins(const Label& a) const { return edges ? m.edge_insertion(a) : m.vertex_insertion(a); }
};

void check_class(const ElementCosts& c, std::vector<Label> labels, std::size_t samples,
                 std::mt19937_64& rng, MetricityReport& report) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  const std::size_t n = labels.size();
  if (n == 0) return;
  const MetricRule triangle = c.edges ? MetricRule::kEdgeTriangle : MetricRule::kVertexTriangle;
  const MetricRule sub_del =
      c.edges ? MetricRule::kEdgeSubVsDelIns : MetricRule::kVertexSubVsDelIns;
  auto add = [&](MetricRule rule, std::vector<Label> w, double lhs, double rhs) {
    report.violations.push_back({rule, c.edges, std::move(w), lhs, rhs});
  };

  auto check_pair = [&](const Label& a, const Label& b) {
    report.checks += 3;
    const double ab = c.sub(a, b), ba = c.sub(b, a);
    if (std::abs(ab - ba) > kEpsilon) add(MetricRule::kSymmetry, {a, b}, ab, ba);
    const double bound = c.del(a) + c.ins(b);
    if (ab > bound + kEpsilon) add(sub_del, {a, b}, ab, bound);
    if (std::abs(c.del(a) - c.ins(a)) > kEpsilon) {
      add(MetricRule::kSymmetry, {a}, c.del(a), c.ins(a));
    }
  };
  auto check_triple = [&](const Label& a, const Label& b, const Label& w) {
    ++report.checks;
    const double lhs = c.sub(a, w), rhs = c.sub(a, b) + c.sub(b, w);
    if (lhs > rhs + kEpsilon) add(triangle, {a, b, w}, lhs, rhs);
  };

  for (const auto& a : labels) {
    ++report.checks;
    if (double self = c.sub(a, a); std::abs(self) > kEpsilon) {
      add(MetricRule::kIdentity, {a}, self, 0.0);
    }
  }
  const bool exhaustive = n <= 64 && n * n * n <= std::max<std::size_t>(samples, 1);
  if (exhaustive) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        check_pair(labels[i], labels[j]);
        for (std::size_t k = 0; k < n; ++k) check_triple(labels[i], labels[j], labels[k]);
      }
    }
    return;
  }
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto& a = labels[pick(rng)];
    const auto& b = labels[pick(rng)];
    const auto& w = labels[pick(rng)];
    check_pair(a, b);
    check_triple(a, b, w);
  }
}

}  // namespace

MetricityReport validate_metricity(const CostModel& m, const GraphDatabase& db,
                                   std::size_t samples, std::uint64_t seed) {
  MetricityReport report;
  std::mt19937_64 rng(seed);
  std::vector<Label> vertex_labels, edge_labels;
  for (const auto& g : db.graphs) {
    vertex_labels.insert(vertex_labels.end(), g.vertices().begin(), g.vertices().end());
    for (const auto& e : g.edges()) edge_labels.push_back(e.label);
  }
  check_class({false, m}, std::move(vertex_labels), samples, rng, report);
  check_class({true, m}, std::move(edge_labels), samples, rng, report);
  return report;
}

}  // namespace gsim
