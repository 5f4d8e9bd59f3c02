#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "gsim/graph.hpp"

namespace gsim {

// Absolute tolerance for every cost comparison.
inline constexpr double kEpsilon = 1e-9;

// The six edit-cost functions over element labels. Implementations must be
// pure and thread-safe.
class CostModel {
 public:
  virtual ~CostModel() = default;

  virtual double vertex_substitution(const Label& a, const Label& b) const = 0;
  virtual double vertex_deletion(const Label& a) const = 0;
  virtual double vertex_insertion(const Label& b) const = 0;
  virtual double edge_substitution(const Label& a, const Label& b) const = 0;
  virtual double edge_deletion(const Label& a) const = 0;
  virtual double edge_insertion(const Label& b) const = 0;

  // True iff edge substitution costs are in {0, gamma}, zero exactly for
  // equal labels, and edge deletion/insertion cost gamma.
  virtual bool uniform_edge_costs() const { return false; }
  virtual double edge_gamma() const { return 0.0; }

  // Canonical text of the model and its parameters.
  virtual std::string describe() const = 0;
  std::uint64_t hash() const;
};

using CostModelPtr = std::shared_ptr<const CostModel>;

// A null label stands for the empty element (epsilon).
double vertex_cost(const CostModel& m, const Label* u, const Label* v);
double edge_cost(const CostModel& m, const Label* uv, const Label* wx);

// Every non-identical operation costs gamma (1 by default); labels compare
// for exact equality.
class UniformCostModel final : public CostModel {
 public:
  explicit UniformCostModel(double gamma = 1.0);

  double vertex_substitution(const Label& a, const Label& b) const override;
  double vertex_deletion(const Label&) const override { return gamma_; }
  double vertex_insertion(const Label&) const override { return gamma_; }
  double edge_substitution(const Label& a, const Label& b) const override;
  double edge_deletion(const Label&) const override { return gamma_; }
  double edge_insertion(const Label&) const override { return gamma_; }
  bool uniform_edge_costs() const override { return true; }
  double edge_gamma() const override { return gamma_; }
  std::string describe() const override;

 private:
  double gamma_;
};

// Substitution costs the Euclidean distance of the attribute vectors, plus
// `gamma` when categorical symbols differ (mixed mode only). Deletion and
// insertion cost delta_v / delta_e.
class EuclideanCostModel final : public CostModel {
 public:
  // `edge_symbols`: whether any database edge carries a categorical symbol.
  EuclideanCostModel(double delta_v, double delta_e, std::size_t edge_dim = 0,
                     bool edge_symbols = false, bool mixed = false, double gamma = 1.0);

  double vertex_substitution(const Label& a, const Label& b) const override;
  double vertex_deletion(const Label&) const override { return delta_v_; }
  double vertex_insertion(const Label&) const override { return delta_v_; }
  double edge_substitution(const Label& a, const Label& b) const override;
  double edge_deletion(const Label&) const override { return delta_e_; }
  double edge_insertion(const Label&) const override { return delta_e_; }
  bool uniform_edge_costs() const override;
  double edge_gamma() const override { return delta_e_; }
  std::string describe() const override;

 private:
  double relabel(const Label& a, const Label& b) const;

  double delta_v_, delta_e_;
  std::size_t edge_dim_;
  bool edge_symbols_;
  bool mixed_;
  double gamma_;
};

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b);

enum class CostModelKind { kUniform, kEuclidean, kMixed };

struct CostConfig {
  CostModelKind kind = CostModelKind::kUniform;
  double delta_v = 1.0;
  double delta_e = 1.0;
  double gamma = 1.0;
};

// Key-value text: `model = uniform | euclidean | mixed`, `delta_v = ...`,
// `delta_e = ...`, `gamma = ...`; '#' comments.
CostConfig parse_cost_config(const std::string& text);
CostConfig load_cost_config(const std::filesystem::path& path);

CostModelPtr make_cost_model(const CostConfig& cfg, const GraphDatabase& db);

// Transposed view: costs of editing b into a.
class ReversedCostModel final : public CostModel {
 public:
  explicit ReversedCostModel(const CostModel& base) : base_(base) {}

  double vertex_substitution(const Label& a, const Label& b) const override {
    return base_.vertex_substitution(b, a);
  }
  double vertex_deletion(const Label& a) const override { return base_.vertex_insertion(a); }
  double vertex_insertion(const Label& b) const override { return base_.vertex_deletion(b); }
  double edge_substitution(const Label& a, const Label& b) const override {
    return base_.edge_substitution(b, a);
  }
  double edge_deletion(const Label& a) const override { return base_.edge_insertion(a); }
  double edge_insertion(const Label& b) const override { return base_.edge_deletion(b); }
  bool uniform_edge_costs() const override { return base_.uniform_edge_costs(); }
  double edge_gamma() const override { return base_.edge_gamma(); }
  std::string describe() const override { return "reversed(" + base_.describe() + ")"; }

 private:
  const CostModel& base_;
};

// ---------------------------------------------------------------------------
// Metricity validation

enum class MetricRule {
  kVertexTriangle,      // c_v(u,w) <= c_v(u,v) + c_v(v,w)
  kVertexSubVsDelIns,   // c_v(u,v) <= c_v(u,eps) + c_v(eps,v)
  kEdgeTriangle,
  kEdgeSubVsDelIns,
  kSymmetry,
  kIdentity,
};

const char* to_string(MetricRule rule);

struct MetricViolation {
  MetricRule rule;
  bool on_edges = false;
  std::vector<Label> witnesses;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct MetricityReport {
  std::size_t checks = 0;
  std::vector<MetricViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks the triangle rules on labels drawn from the database. When the
// distinct labels of a class are few enough, all triples are enumerated;
// otherwise `samples` random triples/pairs are drawn.
MetricityReport validate_metricity(const CostModel& m, const GraphDatabase& db,
                                   std::size_t samples, std::uint64_t seed = 0x5eed);

}  // namespace gsim
