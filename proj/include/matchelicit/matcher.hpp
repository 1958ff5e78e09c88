#pragma once

#include "matchelicit/grid.hpp"
#include "matchelicit/types.hpp"

namespace matchelicit {

// One matching program: maximize sum(s_rp * y_rp) over binary y subject to
// column sums in [r_min, r_max] and row sums in [p_min, p_max].
struct MatchInstance {
  ScoreGrid scores;
  MatchConstraints constraints;

  void validate() const;  // finite scores, coherent bounds, non-empty grid
};

// Exact feasibility of the degree bounds over an n_users x n_items complete
// grid, decided by max-flow with lower bounds (circulation feasibility).
bool check_feasible(int n_users, int n_items, const MatchConstraints& constraints);

// Optimal integral matching via reduction to min-cost flow: source->user arcs
// bounded [p_min, p_max], item->sink arcs bounded [r_min, r_max], user->item
// arcs of capacity 1 and cost -s_rp. Lower bounds are removed by the
// excess-supply transformation and negative costs by arc reversal, leaving a
// nonnegative-cost network solved by successive shortest augmenting paths
// with potentials. Throws InfeasibleError when the bounds admit no
// assignment, naming the violated counting bound when one is detectable.
Matching solve_matching(const MatchInstance& instance);

// Test oracle: exhaustive search over binary grids satisfying the bounds.
// Requires N*M <= 25.
Matching brute_force_matching(const MatchInstance& instance);

}  // namespace matchelicit
