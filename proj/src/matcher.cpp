#include "matchelicit/matcher.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "matchelicit/errors.hpp"

namespace matchelicit {

namespace {

constexpr double kCostEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Min-cost flow on a network whose arcs all carry nonnegative cost (callers
// apply the lower-bound and negative-cost transformations), solved by
// successive shortest augmenting paths with node potentials. Ties in the
// Dijkstra heap resolve by ascending node index, so identical inputs produce
// identical flows.
class MinCostFlow {
 public:
  explicit MinCostFlow(int num_nodes) : adj_(num_nodes) {}

  int add_edge(int from, int to, int capacity, double cost) {
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({from, to, capacity, 0, cost});
    edges_.push_back({to, from, 0, 0, -cost});
    adj_[from].push_back(id);
    adj_[to].push_back(id + 1);
    return id;
  }

  int flow_on(int edge_id) const { return edges_[edge_id].flow; }

  // Pushes up to flow_limit units from s to t; returns the amount pushed.
  int run(int s, int t, int flow_limit) {
    const int n = static_cast<int>(adj_.size());
    std::vector<double> potential(n, 0.0);
    std::vector<double> dist(n);
    std::vector<int> parent_edge(n);
    int pushed = 0;
    while (pushed < flow_limit) {
      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(parent_edge.begin(), parent_edge.end(), -1);
      dist[s] = 0.0;
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      heap.emplace(0.0, s);
      while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) {
          continue;
        }
        for (const int eid : adj_[v]) {
          const Edge& e = edges_[eid];
          if (e.flow >= e.capacity) {
            continue;
          }
          double reduced = e.cost + potential[v] - potential[e.to];
          if (reduced < 0.0) {
            // Floating-point slack; SSP keeps true reduced costs >= 0.
            if (reduced < -kCostEps) {
              throw NumericalError("min-cost flow: reduced cost below tolerance");
            }
            reduced = 0.0;
          }
          const double nd = d + reduced;
          if (nd < dist[e.to]) {
            dist[e.to] = nd;
            parent_edge[e.to] = eid;
            heap.emplace(nd, e.to);
          }
        }
      }
      if (dist[t] == kInf) {
        break;
      }
      for (int v = 0; v < n; ++v) {
        potential[v] += std::min(dist[v], dist[t]);
      }
      int bottleneck = flow_limit - pushed;
      for (int v = t; v != s; v = edges_[parent_edge[v]].from) {
        const Edge& e = edges_[parent_edge[v]];
        bottleneck = std::min(bottleneck, e.capacity - e.flow);
      }
      for (int v = t; v != s; v = edges_[parent_edge[v]].from) {
        const int eid = parent_edge[v];
        edges_[eid].flow += bottleneck;
        edges_[eid ^ 1].flow -= bottleneck;
      }
      pushed += bottleneck;
    }
    return pushed;
  }

 private:
  struct Edge {
    int from;
    int to;
    int capacity;
    int flow;
    double cost;
  };

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

// Detectable counting violations, reported before running the flow.
std::optional<std::string> counting_violation(int n, int m, const MatchConstraints& c) {
  const long long need_user = static_cast<long long>(n) * c.p_min;
  const long long accept_item = static_cast<long long>(m) * c.r_max;
  if (need_user > accept_item) {
    return "users require at least " + std::to_string(need_user) +
           " assignments but items accept at most " + std::to_string(accept_item);
  }
  const long long need_item = static_cast<long long>(m) * c.r_min;
  const long long accept_user = static_cast<long long>(n) * c.p_max;
  if (need_item > accept_user) {
    return "items require at least " + std::to_string(need_item) +
           " assignments but users accept at most " + std::to_string(accept_user);
  }
  if (c.p_min > m) {
    return "each user requires " + std::to_string(c.p_min) + " items but only " +
           std::to_string(m) + " exist";
  }
  if (c.r_min > n) {
    return "each item requires " + std::to_string(c.r_min) + " users but only " +
           std::to_string(n) + " exist";
  }
  return std::nullopt;
}

struct PairArc {
  int edge_id;    // -1 when the arc degenerated to fixed flow
  bool reversed;  // arc stored item->user due to negative cost
};

// Shared network construction for feasibility and optimization. When
// use_costs is false all arcs carry zero cost and the run degenerates to a
// max-flow feasibility check.
struct Network {
  MinCostFlow flow;
  std::vector<PairArc> pair_arcs;  // row-major user x item
  int total_excess = 0;
  int super_source;
  int super_sink;

  Network(int n, int m, const MatchConstraints& c, const ScoreGrid* scores)
      : flow(n + m + 4),
        pair_arcs(static_cast<std::size_t>(n) * m),
        super_source(n + m + 2),
        super_sink(n + m + 3) {
    const int source = 0;
    const int sink = n + m + 1;
    const auto user_node = [](int r) { return 1 + r; };
    const auto item_node = [n](int p) { return 1 + n + p; };

    std::vector<int> excess(n + m + 4, 0);
    const auto add_bounded = [&](int from, int to, int low, int cap, double cost) -> int {
      excess[to] += low;
      excess[from] -= low;
      const int residual_cap = cap - low;
      if (residual_cap <= 0) {
        return -1;
      }
      if (cost < 0.0) {
        excess[to] += residual_cap;
        excess[from] -= residual_cap;
        return flow.add_edge(to, from, residual_cap, -cost);
      }
      return flow.add_edge(from, to, residual_cap, cost);
    };

    for (int r = 0; r < n; ++r) {
      add_bounded(source, user_node(r), c.p_min, std::min(c.p_max, m), 0.0);
    }
    for (int r = 0; r < n; ++r) {
      for (int p = 0; p < m; ++p) {
        const double cost = scores ? -(*scores)(r, p) : 0.0;
        const bool reversed = cost < 0.0;
        const int id = add_bounded(user_node(r), item_node(p), 0, 1, cost);
        pair_arcs[static_cast<std::size_t>(r) * m + p] = {id, reversed};
      }
    }
    for (int p = 0; p < m; ++p) {
      add_bounded(item_node(p), sink, c.r_min, std::min(c.r_max, n), 0.0);
    }
    add_bounded(sink, source, 0,
                std::min(n * std::min(c.p_max, m), m * std::min(c.r_max, n)), 0.0);

    for (int v = 0; v < n + m + 2; ++v) {
      if (excess[v] > 0) {
        flow.add_edge(super_source, v, excess[v], 0.0);
        total_excess += excess[v];
      } else if (excess[v] < 0) {
        flow.add_edge(v, super_sink, -excess[v], 0.0);
      }
    }
  }

  bool solve() {
    return flow.run(super_source, super_sink, total_excess) == total_excess;
  }

  // Assignment of pair (r, p) after a successful solve.
  bool pair_assigned(int r, int p, int m) const {
    const PairArc& arc = pair_arcs[static_cast<std::size_t>(r) * m + p];
    if (arc.edge_id < 0) {
      return false;  // capacity fixed at the zero lower bound (cannot happen for cap-1 arcs)
    }
    const int f = flow.flow_on(arc.edge_id);
    return arc.reversed ? f == 0 : f > 0;
  }
};

}  // namespace

void MatchInstance::validate() const {
  if (scores.rows() < 1 || scores.cols() < 1) {
    throw std::invalid_argument("MatchInstance: empty score grid");
  }
  constraints.validate();
  for (const double v : scores.data()) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("MatchInstance: scores must be finite");
    }
  }
}

bool check_feasible(int n_users, int n_items, const MatchConstraints& constraints) {
  if (n_users < 1 || n_items < 1) {
    throw std::invalid_argument("check_feasible: dimensions must be positive");
  }
  constraints.validate();
  if (counting_violation(n_users, n_items, constraints)) {
    return false;
  }
  Network net(n_users, n_items, constraints, nullptr);
  return net.solve();
}

Matching solve_matching(const MatchInstance& instance) {
  instance.validate();
  const int n = instance.scores.rows();
  const int m = instance.scores.cols();
  if (const auto violation = counting_violation(n, m, instance.constraints)) {
    throw InfeasibleError("solve_matching: " + *violation);
  }
  Network net(n, m, instance.constraints, &instance.scores);
  if (!net.solve()) {
    throw InfeasibleError("solve_matching: degree bounds admit no assignment");
  }
  Matching result{MaskGrid(n, m, 0)};
  for (int r = 0; r < n; ++r) {
    for (int p = 0; p < m; ++p) {
      result.assign(r, p) = net.pair_assigned(r, p, m) ? 1 : 0;
    }
  }
  result.validate_bounds(instance.constraints);
  return result;
}

Matching brute_force_matching(const MatchInstance& instance) {
  instance.validate();
  const int n = instance.scores.rows();
  const int m = instance.scores.cols();
  if (n * m > 25) {
    throw std::invalid_argument("brute_force_matching: instance too large (N*M > 25)");
  }
  const MatchConstraints& c = instance.constraints;

  // Row candidates: item subsets with an allowed popcount, in ascending mask
  // order so ties resolve to the first optimum found.
  std::vector<unsigned> row_masks;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    const int bits = std::popcount(mask);
    if (bits >= c.p_min && bits <= c.p_max) {
      row_masks.push_back(mask);
    }
  }

  std::vector<double> row_score(row_masks.size());
  std::vector<int> col_sum(m, 0);
  std::vector<unsigned> chosen(n, 0);
  std::vector<unsigned> best_rows;
  double best = -kInf;

  const auto dfs = [&](auto&& self, int row, double acc) -> void {
    if (row == n) {
      for (int p = 0; p < m; ++p) {
        if (col_sum[p] < c.r_min) {
          return;
        }
      }
      if (acc > best) {
        best = acc;
        best_rows.assign(chosen.begin(), chosen.begin() + n);
      }
      return;
    }
    const int remaining = n - row - 1;
    for (const unsigned mask : row_masks) {
      double gain = 0.0;
      bool ok = true;
      for (int p = 0; p < m && ok; ++p) {
        if (mask & (1u << p)) {
          if (col_sum[p] + 1 > c.r_max) {
            ok = false;
          } else {
            gain += instance.scores(row, p);
          }
        }
      }
      if (!ok) {
        continue;
      }
      for (int p = 0; p < m; ++p) {
        col_sum[p] += (mask >> p) & 1u;
      }
      bool reachable = true;
      for (int p = 0; p < m; ++p) {
        if (col_sum[p] + remaining < c.r_min) {
          reachable = false;
          break;
        }
      }
      if (reachable) {
        chosen[row] = mask;
        self(self, row + 1, acc + gain);
      }
      for (int p = 0; p < m; ++p) {
        col_sum[p] -= (mask >> p) & 1u;
      }
    }
  };
  dfs(dfs, 0, 0.0);

  if (best == -kInf) {
    throw InfeasibleError("brute_force_matching: degree bounds admit no assignment");
  }
  Matching result{MaskGrid(n, m, 0)};
  for (int r = 0; r < n; ++r) {
    for (int p = 0; p < m; ++p) {
      result.assign(r, p) = (best_rows[r] >> p) & 1u;
    }
  }
  result.validate_bounds(instance.constraints);
  return result;
}

}  // namespace matchelicit
