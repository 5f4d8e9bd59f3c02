#include "gsim/index_io.hpp"

#include <fstream>
#include <sstream>

#include "gsim/cover_tree.hpp"
#include "gsim/text.hpp"
#include "gsim/vp_tree.hpp"

namespace gsim {

namespace {
constexpr const char* kMagic = "gsim-index 1";
}

std::unique_ptr<MetricIndex> build_index(MetricSpace& space, const IndexOptions& options) {
  switch (options.kind) {
    case IndexKind::kVpTree:
      return std::make_unique<VpTree>(
          VpTree::build(space, {options.sample_size, options.leaf_size, options.seed}));
    case IndexKind::kCoverTree:
      return std::make_unique<CoverTree>(
          CoverTree::build(space, {options.expansion_rate, options.leaf_size, options.seed}));
    case IndexKind::kNone:
      break;
  }
  throw std::invalid_argument("no index to build for kind 'none'");
}

IndexFingerprint fingerprint(const GraphDatabase& db, const CostModel& m) {
  return {m.hash(), db.normalization.hash(), db.content_hash()};
}

void save_index(std::ostream& out, const MetricIndex& index, std::uint64_t seed,
                const IndexFingerprint& fp) {
  out << kMagic << "\n"
      << "type " << to_string(index.kind()) << "\n"
      << "n " << index.size() << "\n"
      << "seed " << seed << "\n"
      << "cost_hash " << fp.cost_hash << "\n"
      << "norm_hash " << fp.norm_hash << "\n"
      << "db_hash " << fp.db_hash << "\n"
      << "build_evaluations " << index.build_evaluations() << "\n";
  index.write_body(out);
}

void save_index(const std::filesystem::path& path, const MetricIndex& index, std::uint64_t seed,
                const IndexFingerprint& fp) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  save_index(out, index, seed, fp);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

std::string field(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("index file: truncated header");
  const auto toks = tokenize(line);
  if (toks.size() != 2 || toks[0] != key) {
    throw std::runtime_error("index file: expected '" + key + "' in header");
  }
  return std::string(toks[1]);
}

std::uint64_t number(std::istream& in, const std::string& key) {
  auto v = parse_int<std::uint64_t>(field(in, key));
  if (!v) throw std::runtime_error("index file: bad value for '" + key + "'");
  return *v;
}

}  // namespace

std::unique_ptr<MetricIndex> load_index(std::istream& in, const IndexFingerprint& expected,
                                        std::size_t n) {
  std::string magic;
  std::getline(in, magic);
  if (magic != kMagic) throw std::runtime_error("not a gsim index file (or unknown version)");
  const IndexKind kind = parse_index_kind(field(in, "type"));
  const auto stored_n = number(in, "n");
  number(in, "seed");
  IndexFingerprint fp;
  fp.cost_hash = number(in, "cost_hash");
  fp.norm_hash = number(in, "norm_hash");
  fp.db_hash = number(in, "db_hash");
  const auto evaluations = number(in, "build_evaluations");

  if (stored_n != n) {
    throw IndexMismatch("index holds " + std::to_string(stored_n) + " objects, database has " +
                        std::to_string(n));
  }
  if (fp.cost_hash != expected.cost_hash) {
    throw IndexMismatch("index was built with a different cost model");
  }
  if (fp.norm_hash != expected.norm_hash) {
    throw IndexMismatch("index was built with a different normalization record");
  }
  if (fp.db_hash != expected.db_hash) {
    throw IndexMismatch("index was built for a different database");
  }

  switch (kind) {
    case IndexKind::kVpTree:
      return std::make_unique<VpTree>(VpTree::read_body(in, n, evaluations));
    case IndexKind::kCoverTree:
      return std::make_unique<CoverTree>(CoverTree::read_body(in, n, evaluations));
    case IndexKind::kNone:
      break;
  }
  throw std::runtime_error("index file: type 'none' has no body");
}

std::unique_ptr<MetricIndex> load_index(const std::filesystem::path& path,
                                        const IndexFingerprint& expected, std::size_t n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return load_index(in, expected, n);
}

}  // namespace gsim
