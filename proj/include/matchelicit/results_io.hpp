#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "matchelicit/simulator.hpp"
#include "matchelicit/types.hpp"

namespace matchelicit {

// Per-trial results, one row per (trial, round, strategy), with the exact
// header `trial,round,strategy,cum_queries_per_user,objective,
// objective_vs_random,fallback_count,num_observed` and fixed 6-decimal
// numeric formatting.
void write_results_csv(std::ostream& out, const ComparisonResult& result);
void write_results_csv(const std::string& path, const ComparisonResult& result);

// Matched pairs as `user_id,item_id` rows.
void write_matching_csv(std::ostream& out, const Matching& matching,
                        const std::vector<std::string>& user_ids,
                        const std::vector<std::string>& item_ids);

// Human-readable per-round aggregate table (mean difference vs the baseline,
// standard error, fall-back counts).
void print_summary(std::ostream& out, const ComparisonResult& result);

// Fixed 6-decimal rendering used for all CLI numeric output.
std::string format_fixed(double value);

}  // namespace matchelicit
