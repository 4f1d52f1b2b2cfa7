#pragma once

#include <chrono>
#include <optional>
#include <utility>
#include <vector>

#include "actdet/graph.hpp"

namespace actdet {

enum class Optimality { Exact, Approximate };

/// A connected node subset and its weight. `node_ids` is sorted ascending
/// and never empty; `score` is the sum of the selected weights taken in
/// ascending id order.
struct SubgraphSolution {
    std::vector<int> node_ids;
    double score = 0.0;
    Optimality optimality = Optimality::Exact;
};

/// Prize-collecting Steiner tree form of a node-weighted graph: nonnegative
/// node profits, one uniform edge cost, and the offset that maps a tree's
/// PCST objective back to the subgraph score of its node set.
struct PCSTInstance {
    std::vector<double> profits;
    double edge_cost = 0.0;
    double offset = 0.0;
};

struct SolverOptions {
    /// Unset means unlimited. When the budget expires the incumbent is
    /// returned with optimality downgraded to Approximate.
    std::optional<std::chrono::duration<double>> time_budget;
};

using EdgeList = std::vector<std::pair<int, int>>;

/// Shift weights by the most negative one: profits p(v) = w(v) - w_min,
/// edge cost -w_min, offset w_min (w_min capped at 0 when all positive).
PCSTInstance to_pcst(const SpaceTimeGraph& graph);
PCSTInstance to_pcst(const std::vector<double>& weights);

/// Exact maximum-weight connected subgraph search. Branch-and-bound over
/// node inclusion; the bound is the current weight plus all positive weight
/// still reachable through undecided nodes. Ties in score are broken toward
/// the lexicographically smallest sorted id set. Disconnected inputs are
/// handled per component.
SubgraphSolution solve_exact(const SpaceTimeGraph& graph, const SolverOptions& options = {});
SubgraphSolution solve_exact(const std::vector<double>& weights, const EdgeList& edges,
                             const SolverOptions& options = {});

/// Exact linear-time search on a path graph (maximum-subarray recurrence).
SubgraphSolution solve_path_dp(const std::vector<double>& weights);

/// Exact search on the path-plus-jump graph where nodes up to `jump_reach`
/// apart are linked: f(i) = w_i + max(0, f(i-1), ..., f(i-jump_reach)),
/// answer max_i f(i), selection recovered by backtracking.
SubgraphSolution solve_jump_dp(const std::vector<double>& weights, int jump_reach);

/// Verification oracle: enumerate every nonempty connected node subset and
/// return the maximum with the same tie-break as solve_exact. Refuses graphs
/// above `max_nodes` (and anything beyond 62 nodes outright).
SubgraphSolution brute_force_oracle(const SpaceTimeGraph& graph, int max_nodes = 20);
SubgraphSolution brute_force_oracle(const std::vector<double>& weights, const EdgeList& edges,
                                    int max_nodes = 20);

/// True when `ids` induces a connected subgraph of the given edge set.
bool is_connected_subset(const std::vector<int>& ids, const EdgeList& edges);

}  // namespace actdet
