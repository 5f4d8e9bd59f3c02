#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gsim/query_engine.hpp"

namespace gsim {

// One JSON object per line; no timings, so reruns are byte-identical.
std::string report_json(const QueryReport& rep);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const QueryReport& rep);

}  // namespace gsim
