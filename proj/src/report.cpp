#include "gsim/report.hpp"

#include <ostream>

#include "json.hpp"
#include "gsim/text.hpp"

namespace gsim {

std::string report_json(const QueryReport& rep) {
  nlohmann::ordered_json j;
  j["query"] = rep.query_id;
  j["mode"] = to_string(rep.mode);
  j["index"] = to_string(rep.index);
  if (rep.mode == QueryMode::kRange) {
    j["r"] = rep.r;
  } else {
    j["k"] = rep.k;
  }
  j["lb_candidates"] = rep.lb_candidates;
  j["ub_accepted"] = rep.ub_accepted;
  j["rub_accepted"] = rep.rub_accepted;
  j["verified_count"] = rep.verified_count;
  j["verified_hits"] = rep.verified_hits;
  j["result_size"] = rep.result_size;
  j["branch_evaluations"] = rep.branch_evaluations;
  j["exact_ged_calls"] = rep.exact_ged_calls;
  j["search_nodes"] = rep.search_nodes;
  j["partial"] = rep.partial;
  if (rep.mode == QueryMode::kKnn) {
    j["kth_distance"] = rep.kth_distance ? nlohmann::ordered_json(*rep.kth_distance) : nullptr;
    j["ties"] = rep.ties;
  }
  auto& results = j["results"] = nlohmann::ordered_json::array();
  for (const auto& item : rep.results) {
    nlohmann::ordered_json e;
    e["id"] = item.id;
    e["distance"] = item.distance ? nlohmann::ordered_json(*item.distance) : nullptr;
    e["stage"] = to_string(item.stage);
    results.push_back(std::move(e));
  }
  j["unverified"] = rep.unverified;
  return j.dump();
}

void write_csv_header(std::ostream& out) {
  out << "query,mode,index,threshold,lb_candidates,ub_accepted,rub_accepted,verified_count,"
         "verified_hits,result_size,branch_evaluations,exact_ged_calls,search_nodes,partial,"
         "unverified,kth_distance,ties\n";
}

void write_csv_row(std::ostream& out, const QueryReport& rep) {
  out << rep.query_id << ',' << to_string(rep.mode) << ',' << to_string(rep.index) << ','
      << (rep.mode == QueryMode::kRange ? format_double(rep.r) : std::to_string(rep.k)) << ','
      << rep.lb_candidates << ',' << rep.ub_accepted << ',' << rep.rub_accepted << ','
      << rep.verified_count << ',' << rep.verified_hits << ',' << rep.result_size << ','
      << rep.branch_evaluations << ',' << rep.exact_ged_calls << ',' << rep.search_nodes << ','
      << (rep.partial ? 1 : 0) << ',' << rep.unverified.size() << ','
      << (rep.kth_distance ? format_double(*rep.kth_distance) : "") << ',' << rep.ties << '\n';
}

}  // namespace gsim
