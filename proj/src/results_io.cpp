#include "matchelicit/results_io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "matchelicit/errors.hpp"
#include "matchelicit/strategies.hpp"

namespace matchelicit {

std::string format_fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

void write_results_csv(std::ostream& out, const ComparisonResult& result) {
  out << "trial,round,strategy,cum_queries_per_user,objective,objective_vs_random,"
         "fallback_count,num_observed\n";
  for (const RoundRecord& r : result.records) {
    out << r.trial << ',' << r.round << ',' << strategy_name(r.strategy) << ','
        << format_fixed(r.cum_queries_per_user) << ',' << format_fixed(r.objective) << ','
        << format_fixed(result.diff_vs_random(r)) << ',' << r.fallback_count << ','
        << r.num_observed << "\n";
  }
}

void write_results_csv(const std::string& path, const ComparisonResult& result) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open '" + path + "' for writing");
  }
  write_results_csv(out, result);
}

void write_matching_csv(std::ostream& out, const Matching& matching,
                        const std::vector<std::string>& user_ids,
                        const std::vector<std::string>& item_ids) {
  if (static_cast<int>(user_ids.size()) != matching.num_users() ||
      static_cast<int>(item_ids.size()) != matching.num_items()) {
    throw std::invalid_argument("write_matching_csv: id list sizes do not match the matching");
  }
  out << "user_id,item_id\n";
  for (int r = 0; r < matching.num_users(); ++r) {
    for (int p = 0; p < matching.num_items(); ++p) {
      if (matching.assign(r, p)) {
        out << user_ids[r] << ',' << item_ids[p] << "\n";
      }
    }
  }
}

void print_summary(std::ostream& out, const ComparisonResult& result) {
  out << "strategy  round  queries/user      objective   vs_random     stderr   fallback\n";
  for (const StrategyRoundSummary& row : result.summary) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-8s %6d %13.6f %14.6f %11.6f %10.6f %10.2f\n",
                  strategy_name(row.strategy).c_str(), row.round, row.mean_cum_queries,
                  row.mean_objective, row.mean_diff_vs_random, row.stderr_diff,
                  row.mean_fallback);
    out << line;
  }
}

}  // namespace matchelicit
