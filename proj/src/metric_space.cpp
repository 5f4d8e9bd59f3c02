#include "gsim/metric_space.hpp"

#include <stdexcept>

namespace gsim {

const char* to_string(IndexKind kind) {
  switch (kind) {
    case IndexKind::kNone: return "none";
    case IndexKind::kVpTree: return "vp";
    case IndexKind::kCoverTree: return "cover";
  }
  return "?";
}

IndexKind parse_index_kind(const std::string& name) {
  if (name == "none") return IndexKind::kNone;
  if (name == "vp") return IndexKind::kVpTree;
  if (name == "cover") return IndexKind::kCoverTree;
  throw std::invalid_argument("unknown index '" + name + "' (none|vp|cover)");
}

std::optional<Ranked> BestFirstStream::next() {
  while (!queue_.empty()) {
    const Entry e = queue_.top();
    queue_.pop();
    switch (e.kind) {
      case 2:
        return Ranked{e.ref, e.key};
      case 1:
        queue_.push({q_(e.ref), 2, e.ref, 0.0});
        break;
      default:
        expand(e.ref, e.key, e.aux);
        break;
    }
  }
  return std::nullopt;
}

}  // namespace gsim
