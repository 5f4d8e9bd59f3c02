#include "gsim/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "gsim/text.hpp"

namespace gsim {

namespace fs = std::filesystem;

DatasetFormat parse_format(const std::string& name) {
  if (name == "native") return DatasetFormat::kNative;
  if (name == "tud") return DatasetFormat::kTud;
  throw std::invalid_argument("unknown dataset format '" + name + "' (native|tud)");
}

namespace {

std::string at_line(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

std::vector<double> parse_vector(std::string_view text, const std::string& where) {
  std::vector<double> out;
  for (auto part : split(text, ',')) {
    auto x = parse_double(part);
    if (!x) throw ParseError(where, "malformed number '" + std::string(part) + "'");
    out.push_back(*x);
  }
  return out;
}

// Tracks the attribute dimension shared by one element class.
class DimensionCheck {
 public:
  explicit DimensionCheck(const char* what) : what_(what) {}
  void observe(std::size_t dim, const std::string& where) {
    if (!dim_) {
      dim_ = dim;
    } else if (*dim_ != dim) {
      throw ParseError(where, std::string("inconsistent ") + what_ + " attribute dimension " +
                                  std::to_string(dim) + " (expected " +
                                  std::to_string(*dim_) + ")");
    }
  }
  std::optional<std::size_t> value() const { return dim_; }

 private:
  const char* what_;
  std::optional<std::size_t> dim_;
};

struct NativeParse {
  std::vector<Graph> graphs;
  std::optional<std::size_t> vertex_dim, edge_dim;
  NormalizationRecord normalization;
};

Label parse_label(std::span<const std::string_view> tokens, SymbolTable& symbols,
                  const std::string& where) {
  Label label;
  for (auto tok : tokens) {
    if (tok.starts_with("l=")) {
      auto name = tok.substr(2);
      if (name.empty()) throw ParseError(where, "empty symbol");
      label.symbol = symbols.intern(std::string(name));
    } else if (tok.starts_with("a=")) {
      label.attributes = parse_vector(tok.substr(2), where);
    } else {
      throw ParseError(where, "unexpected token '" + std::string(tok) + "'");
    }
  }
  return label;
}

NativeParse parse_native(std::istream& in, const std::string& source, SymbolTable& symbols) {
  NativeParse out;
  DimensionCheck vdim("vertex"), edim("edge");

  struct Pending {
    std::size_t line = 0;
    std::vector<std::optional<Label>> vertices;
    std::vector<Edge> edges;
    std::vector<std::size_t> edge_lines;
  };
  std::optional<Pending> current;

  auto finish = [&]() {
    if (!current) return;
    const auto where = at_line(source, current->line);
    std::vector<Label> vertices;
    vertices.reserve(current->vertices.size());
    for (std::size_t i = 0; i < current->vertices.size(); ++i) {
      if (!current->vertices[i]) {
        throw ParseError(where, "vertex " + std::to_string(i) + " missing (indices must be dense)");
      }
      vertices.push_back(std::move(*current->vertices[i]));
    }
    const auto n = static_cast<VertexIndex>(vertices.size());
    for (std::size_t k = 0; k < current->edges.size(); ++k) {
      const auto& e = current->edges[k];
      if (e.u >= n || e.v >= n) {
        throw ParseError(at_line(source, current->edge_lines[k]),
                         "dangling edge endpoint " + std::to_string(std::max(e.u, e.v)));
      }
    }
    try {
      out.graphs.emplace_back(static_cast<GraphId>(out.graphs.size()), std::move(vertices),
                              std::move(current->edges));
    } catch (const GraphError& err) {
      throw ParseError(where, err.what());
    }
    current.reset();
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    auto tokens = tokenize(view);
    if (tokens.empty()) continue;
    const auto where = at_line(source, lineno);
    const auto kind = tokens[0];
    if (kind == "g") {
      if (tokens.size() != 2 || !parse_int<long long>(tokens[1])) {
        throw ParseError(where, "expected 'g <id>'");
      }
      finish();
      current.emplace();
      current->line = lineno;
    } else if (kind == "v") {
      if (!current) throw ParseError(where, "vertex before any 'g' line");
      if (tokens.size() < 2) throw ParseError(where, "expected 'v <idx>'");
      auto idx = parse_int<VertexIndex>(tokens[1]);
      if (!idx || *idx < 0) throw ParseError(where, "bad vertex index");
      auto label = parse_label(std::span(tokens).subspan(2), symbols, where);
      vdim.observe(label.attributes.size(), where);
      auto& vs = current->vertices;
      if (static_cast<std::size_t>(*idx) >= vs.size()) vs.resize(*idx + 1);
      if (vs[*idx]) throw ParseError(where, "duplicate vertex " + std::to_string(*idx));
      vs[*idx] = std::move(label);
    } else if (kind == "e") {
      if (!current) throw ParseError(where, "edge before any 'g' line");
      if (tokens.size() < 3) throw ParseError(where, "expected 'e <u> <v>'");
      auto u = parse_int<VertexIndex>(tokens[1]);
      auto v = parse_int<VertexIndex>(tokens[2]);
      if (!u || !v || *u < 0 || *v < 0) throw ParseError(where, "bad edge endpoint");
      auto label = parse_label(std::span(tokens).subspan(3), symbols, where);
      edim.observe(label.attributes.size(), where);
      current->edges.push_back({*u, *v, std::move(label)});
      current->edge_lines.push_back(lineno);
    } else if (kind == "norm") {
      if (tokens.size() != 4 || (tokens[1] != "v" && tokens[1] != "e") ||
          !tokens[2].starts_with("min=") || !tokens[3].starts_with("max=")) {
        throw ParseError(where, "expected 'norm v|e min=... max=...'");
      }
      auto lo = parse_vector(tokens[2].substr(4), where);
      auto hi = parse_vector(tokens[3].substr(4), where);
      if (lo.size() != hi.size()) throw ParseError(where, "min/max dimension mismatch");
      auto& rec = out.normalization;
      if (tokens[1] == "v") {
        rec.vertex_min = std::move(lo);
        rec.vertex_max = std::move(hi);
      } else {
        rec.edge_min = std::move(lo);
        rec.edge_max = std::move(hi);
      }
    } else {
      throw ParseError(where, "unknown directive '" + std::string(kind) + "'");
    }
  }
  finish();
  out.vertex_dim = vdim.value();
  out.edge_dim = edim.value();
  return out;
}

// ---------------------------------------------------------------------------
// TUD

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw ParseError(p.string(), "cannot open");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  while (!lines.empty() && tokenize(lines.back()).empty()) lines.pop_back();
  return lines;
}

struct TudFiles {
  fs::path dir;
  std::string name;
  fs::path file(const std::string& suffix) const { return dir / (name + "_" + suffix + ".txt"); }
};

TudFiles resolve_tud(const fs::path& path) {
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      auto fname = entry.path().filename().string();
      if (fname.ends_with("_A.txt")) return {path, fname.substr(0, fname.size() - 6)};
    }
    throw ParseError(path.string(), "no <name>_A.txt in directory");
  }
  TudFiles f{path.parent_path(), path.filename().string()};
  if (!fs::exists(f.file("A"))) throw ParseError(f.file("A").string(), "not found");
  return f;
}

}  // namespace

GraphDatabase load_native(std::istream& in, const std::string& source) {
  GraphDatabase db;
  auto parsed = parse_native(in, source, db.symbols);
  db.graphs = std::move(parsed.graphs);
  db.vertex_dim = parsed.vertex_dim.value_or(0);
  db.edge_dim = parsed.edge_dim.value_or(0);
  db.normalization = std::move(parsed.normalization);
  return db;
}

GraphDatabase load_tud(const fs::path& path, const WarningSink& warn) {
  const auto files = resolve_tud(path);
  auto indicator_lines = read_lines(files.file("graph_indicator"));
  const std::size_t num_nodes = indicator_lines.size();

  std::vector<std::int64_t> graph_of(num_nodes);
  std::int64_t num_graphs = 0;
  for (std::size_t i = 0; i < num_nodes; ++i) {
    auto g = parse_int<std::int64_t>(indicator_lines[i]);
    const auto where = at_line(files.file("graph_indicator").string(), i + 1);
    if (!g || *g < 1) throw ParseError(where, "bad graph id");
    graph_of[i] = *g - 1;
    num_graphs = std::max(num_graphs, *g);
  }

  GraphDatabase db;
  std::vector<Label> node_labels(num_nodes);

  if (auto p = files.file("node_labels"); fs::exists(p)) {
    auto lines = read_lines(p);
    if (lines.size() != num_nodes) throw ParseError(p.string(), "line count differs from node count");
    for (std::size_t i = 0; i < num_nodes; ++i) {
      auto first = split(lines[i], ',')[0];
      auto v = parse_int<long long>(first);
      if (!v) throw ParseError(at_line(p.string(), i + 1), "bad node label");
      node_labels[i].symbol = db.symbols.intern(std::to_string(*v));
    }
  }
  DimensionCheck vdim("vertex"), edim("edge");
  if (auto p = files.file("node_attributes"); fs::exists(p)) {
    auto lines = read_lines(p);
    if (lines.size() != num_nodes) throw ParseError(p.string(), "line count differs from node count");
    for (std::size_t i = 0; i < num_nodes; ++i) {
      const auto where = at_line(p.string(), i + 1);
      node_labels[i].attributes = parse_vector(lines[i], where);
      vdim.observe(node_labels[i].attributes.size(), where);
    }
  }

  const auto a_path = files.file("A");
  auto a_lines = read_lines(a_path);
  std::vector<Label> edge_labels(a_lines.size());
  if (auto p = files.file("edge_labels"); fs::exists(p)) {
    auto lines = read_lines(p);
    if (lines.size() != a_lines.size()) throw ParseError(p.string(), "line count differs from _A.txt");
    for (std::size_t i = 0; i < lines.size(); ++i) {
      auto v = parse_int<long long>(split(lines[i], ',')[0]);
      if (!v) throw ParseError(at_line(p.string(), i + 1), "bad edge label");
      edge_labels[i].symbol = db.symbols.intern(std::to_string(*v));
    }
  }
  if (auto p = files.file("edge_attributes"); fs::exists(p)) {
    auto lines = read_lines(p);
    if (lines.size() != a_lines.size()) throw ParseError(p.string(), "line count differs from _A.txt");
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto where = at_line(p.string(), i + 1);
      edge_labels[i].attributes = parse_vector(lines[i], where);
      edim.observe(edge_labels[i].attributes.size(), where);
    }
  }

  for (const auto& entry : fs::directory_iterator(files.dir)) {
    auto fname = entry.path().filename().string();
    if (!fname.starts_with(files.name + "_")) continue;
    static const char* known[] = {"A", "graph_indicator", "node_labels", "node_attributes",
                                  "edge_labels", "edge_attributes"};
    auto suffix = fname.substr(files.name.size() + 1);
    bool is_known = std::any_of(std::begin(known), std::end(known), [&](const char* k) {
      return suffix == std::string(k) + ".txt";
    });
    if (!is_known) {
      auto msg = "ignoring unsupported file " + fname;
      if (warn) warn(msg); else std::cerr << "warning: " << msg << "\n";
    }
  }

  // Local vertex indices in order of appearance.
  std::vector<std::vector<Label>> vertices(num_graphs);
  std::vector<VertexIndex> local(num_nodes);
  for (std::size_t i = 0; i < num_nodes; ++i) {
    auto& vs = vertices[graph_of[i]];
    local[i] = static_cast<VertexIndex>(vs.size());
    vs.push_back(node_labels[i]);
  }

  // Undirected input lists each edge in both directions.
  std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> arcs;
  for (std::size_t k = 0; k < a_lines.size(); ++k) {
    const auto where = at_line(a_path.string(), k + 1);
    auto parts = split(a_lines[k], ',');
    if (parts.size() != 2) throw ParseError(where, "expected '<i>, <j>'");
    auto i = parse_int<std::int64_t>(parts[0]);
    auto j = parse_int<std::int64_t>(parts[1]);
    if (!i || !j || *i < 1 || *j < 1 || static_cast<std::size_t>(*i) > num_nodes ||
        static_cast<std::size_t>(*j) > num_nodes) {
      throw ParseError(where, "dangling edge endpoint");
    }
    if (!arcs.emplace(std::pair{*i - 1, *j - 1}, k).second) {
      throw ParseError(where, "parallel edge");
    }
  }
  std::vector<std::vector<Edge>> edges(num_graphs);
  for (const auto& [arc, k] : arcs) {
    const auto [i, j] = arc;
    const auto where = at_line(a_path.string(), k + 1);
    if (i == j) throw ParseError(where, "self-loop");
    auto rev = arcs.find({j, i});
    if (rev == arcs.end()) {
      throw ParseError(where, "directed input: arc without reverse arc");
    }
    if (i > j) continue;
    if (!(edge_labels[k] == edge_labels[rev->second])) {
      throw ParseError(where, "arc labels differ between directions");
    }
    if (graph_of[i] != graph_of[j]) throw ParseError(where, "edge joins two graphs");
    edges[graph_of[i]].push_back({local[i], local[j], edge_labels[k]});
  }

  db.graphs.reserve(num_graphs);
  for (std::int64_t g = 0; g < num_graphs; ++g) {
    try {
      db.graphs.emplace_back(static_cast<GraphId>(g), std::move(vertices[g]), std::move(edges[g]));
    } catch (const GraphError& err) {
      throw ParseError(files.file("A").string(), err.what());
    }
  }
  db.vertex_dim = vdim.value().value_or(0);
  db.edge_dim = edim.value().value_or(0);
  return db;
}

GraphDatabase load_database(const fs::path& path, DatasetFormat format, const WarningSink& warn) {
  if (format == DatasetFormat::kTud) return load_tud(path, warn);
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open");
  return load_native(in, path.string());
}

std::vector<Graph> load_queries(const fs::path& path, GraphDatabase& db) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open");
  auto parsed = parse_native(in, path.string(), db.symbols);
  if (parsed.vertex_dim && *parsed.vertex_dim != db.vertex_dim && !db.graphs.empty()) {
    throw ParseError(path.string(), "query vertex attribute dimension " +
                                        std::to_string(*parsed.vertex_dim) +
                                        " differs from database (" +
                                        std::to_string(db.vertex_dim) + ")");
  }
  if (parsed.edge_dim && *parsed.edge_dim != db.edge_dim && !db.graphs.empty()) {
    throw ParseError(path.string(), "query edge attribute dimension differs from database");
  }
  for (auto& g : parsed.graphs) apply_normalization(g, db.normalization);
  return std::move(parsed.graphs);
}

namespace {

void write_label(std::ostream& out, const Label& l, const SymbolTable& symbols) {
  if (l.symbol) out << " l=" << symbols.name(*l.symbol);
  if (!l.attributes.empty()) out << " a=" << join_doubles(l.attributes);
}

}  // namespace

void write_native(std::ostream& out, const GraphDatabase& db) {
  const auto& rec = db.normalization;
  if (!rec.vertex_min.empty()) {
    out << "norm v min=" << join_doubles(rec.vertex_min) << " max=" << join_doubles(rec.vertex_max)
        << "\n";
  }
  if (!rec.edge_min.empty()) {
    out << "norm e min=" << join_doubles(rec.edge_min) << " max=" << join_doubles(rec.edge_max)
        << "\n";
  }
  for (const auto& g : db.graphs) {
    out << "g " << g.id() << "\n";
    for (VertexIndex v = 0; v < g.order(); ++v) {
      out << "v " << v;
      write_label(out, g.vertex(v), db.symbols);
      out << "\n";
    }
    for (const auto& e : g.edges()) {
      out << "e " << e.u << " " << e.v;
      write_label(out, e.label, db.symbols);
      out << "\n";
    }
  }
}

void write_native(const fs::path& path, const GraphDatabase& db) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_native(out, db);
}

}  // namespace gsim
