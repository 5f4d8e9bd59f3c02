#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "gsim/graph.hpp"

namespace gsim {

enum class DatasetFormat { kNative, kTud };

DatasetFormat parse_format(const std::string& name);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what) {}
};

using WarningSink = std::function<void(const std::string&)>;

// Native format, one directive per line:
//   g <id>
//   v <idx> [l=<symbol>] [a=<f1,f2,...>]
//   e <u> <v> [l=<symbol>] [a=<f1,f2,...>]
//   norm v|e min=<f,...> max=<f,...>
// '#' starts a comment. Graph ids are reassigned 0.. in file order.
GraphDatabase load_native(std::istream& in, const std::string& source = "<stream>");

// TUD layout rooted at a directory `<dir>` holding `<name>_A.txt` etc., or
// at the prefix `<dir>/<name>`.
GraphDatabase load_tud(const std::filesystem::path& path, const WarningSink& warn = {});

GraphDatabase load_database(const std::filesystem::path& path, DatasetFormat format,
                            const WarningSink& warn = {});

// Loads graphs (e.g. queries) in native format against an existing database:
// symbols are interned into the database table, dimensions must match and
// attributes are mapped with the database's normalization record.
std::vector<Graph> load_queries(const std::filesystem::path& path, GraphDatabase& db);

void write_native(std::ostream& out, const GraphDatabase& db);
void write_native(const std::filesystem::path& path, const GraphDatabase& db);

}  // namespace gsim
