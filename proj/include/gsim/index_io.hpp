#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <stdexcept>

#include "gsim/cost_model.hpp"
#include "gsim/graph.hpp"
#include "gsim/metric_space.hpp"

namespace gsim {

struct IndexOptions {
  IndexKind kind = IndexKind::kVpTree;
  std::size_t sample_size = 5;
  double expansion_rate = 1.2;
  std::size_t leaf_size = 8;
  std::uint64_t seed = 0;
};

std::unique_ptr<MetricIndex> build_index(MetricSpace& space, const IndexOptions& options);

// Ties a persisted index to the data and costs it was built with.
struct IndexFingerprint {
  std::uint64_t cost_hash = 0;
  std::uint64_t norm_hash = 0;
  std::uint64_t db_hash = 0;

  friend bool operator==(const IndexFingerprint&, const IndexFingerprint&) = default;
};

IndexFingerprint fingerprint(const GraphDatabase& db, const CostModel& m);

class IndexMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void save_index(std::ostream& out, const MetricIndex& index, std::uint64_t seed,
                const IndexFingerprint& fp);
void save_index(const std::filesystem::path& path, const MetricIndex& index, std::uint64_t seed,
                const IndexFingerprint& fp);

// Throws IndexMismatch when the file was built for other data or costs.
std::unique_ptr<MetricIndex> load_index(std::istream& in, const IndexFingerprint& expected,
                                        std::size_t n);
std::unique_ptr<MetricIndex> load_index(const std::filesystem::path& path,
                                        const IndexFingerprint& expected, std::size_t n);

}  // namespace gsim
