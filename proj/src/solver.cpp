#include "actdet/solver.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace actdet {

namespace {

// Sum in ascending id order. Every solution score in this module is produced
// by this one routine so equal node sets always yield bit-equal scores.
double canonical_score(const std::vector<double>& weights, const std::vector<int>& sorted_ids) {
    double s = 0.0;
    for (int id : sorted_ids) s += weights[static_cast<std::size_t>(id)];
    return s;
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<std::vector<int>> make_adjacency(std::size_t n, const EdgeList& edges) {
    std::vector<std::vector<int>> adj(n);
    for (const auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= static_cast<int>(n) || v >= static_cast<int>(n))
            throw std::invalid_argument("edge endpoint out of range");
        if (u == v) continue;
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& nb : adj) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return adj;
}

// Guard band for pruning decisions: wide enough to absorb accumulated
// rounding in incremental sums, far below any meaningful score difference.
double score_margin(double reference) { return 1e-9 * (1.0 + std::abs(reference)); }

struct Incumbent {
    std::vector<int> ids;
    double score = -std::numeric_limits<double>::infinity();
    bool valid = false;

    // Higher score wins; exact score ties go to the lexicographically
    // smaller sorted id set.
    void offer(std::vector<int> sorted_ids, double score_in) {
        if (!valid || score_in > score || (score_in == score && lex_less(sorted_ids, ids))) {
            ids = std::move(sorted_ids);
            score = score_in;
            valid = true;
        }
    }
};

// Branch-and-bound over node inclusion. Connected sets are enumerated
// canonically from their smallest node id, so each set is visited at most
// once; a branch is cut when its current weight plus all positive weight
// still reachable through undecided nodes cannot beat the incumbent.
class ExactSearch {
public:
    ExactSearch(const std::vector<double>& weights, const std::vector<std::vector<int>>& adj,
                const SolverOptions& options)
        : w_(weights), adj_(adj), n_(static_cast<int>(weights.size())) {
        state_.assign(static_cast<std::size_t>(n_), kFree);
        seen_.assign(static_cast<std::size_t>(n_), 0);
        if (options.time_budget)
            deadline_ = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            *options.time_budget);
    }

    SubgraphSolution run() {
        seed_incumbent();
        for (int root = 0; root < n_ && !expired_; ++root) {
            state_[static_cast<std::size_t>(root)] = kSelected;
            current_.push_back(root);
            current_weight_ = w_[static_cast<std::size_t>(root)];

            std::vector<int> frontier;
            for (int u : adj_[static_cast<std::size_t>(root)])
                if (state_[static_cast<std::size_t>(u)] == kFree) {
                    state_[static_cast<std::size_t>(u)] = kFrontier;
                    frontier.push_back(u);
                }
            expand(frontier);
            for (int u : frontier) state_[static_cast<std::size_t>(u)] = kFree;

            current_.pop_back();
            // Sets containing this node are fully enumerated; ban it for
            // every later root.
            state_[static_cast<std::size_t>(root)] = kExcluded;
        }
        SubgraphSolution solution;
        solution.node_ids = best_.ids;
        solution.score = best_.score;
        solution.optimality = expired_ ? Optimality::Approximate : Optimality::Exact;
        return solution;
    }

private:
    static constexpr char kFree = 0;
    static constexpr char kSelected = 1;
    static constexpr char kExcluded = 2;
    static constexpr char kFrontier = 3;

    void seed_incumbent() {
        int best_id = 0;
        for (int i = 1; i < n_; ++i)
            if (w_[static_cast<std::size_t>(i)] > w_[static_cast<std::size_t>(best_id)])
                best_id = i;
        best_.offer({best_id}, w_[static_cast<std::size_t>(best_id)]);
    }

    bool out_of_time() {
        if (expired_) return true;
        if (!deadline_) return false;
        if (std::chrono::steady_clock::now() >= *deadline_) expired_ = true;
        return expired_;
    }

    // Upper bound for every extension of the current selection.
    double reachable_bound() {
        ++epoch_;
        double bound = current_weight_;
        bfs_.assign(current_.begin(), current_.end());
        for (int v : current_) seen_[static_cast<std::size_t>(v)] = epoch_;
        while (!bfs_.empty()) {
            const int v = bfs_.back();
            bfs_.pop_back();
            for (int u : adj_[static_cast<std::size_t>(v)]) {
                const auto ui = static_cast<std::size_t>(u);
                if (seen_[ui] == epoch_) continue;
                if (state_[ui] != kFree && state_[ui] != kFrontier) continue;
                seen_[ui] = epoch_;
                if (w_[ui] > 0.0) bound += w_[ui];
                bfs_.push_back(u);
            }
        }
        return bound;
    }

    void offer_current() {
        // Cheap filter on the running sum before paying for the canonical
        // rescore; the margin keeps rounding drift from hiding a winner.
        if (best_.valid && current_weight_ < best_.score - score_margin(best_.score)) return;
        std::vector<int> ids = current_;
        std::sort(ids.begin(), ids.end());
        const double score = canonical_score(w_, ids);
        best_.offer(std::move(ids), score);
    }

    void expand(const std::vector<int>& frontier) {
        offer_current();
        if (out_of_time()) return;
        for (std::size_t i = 0; i < frontier.size() && !expired_; ++i) {
            const int v = frontier[i];
            const auto vi = static_cast<std::size_t>(v);

            state_[vi] = kSelected;
            current_.push_back(v);
            current_weight_ += w_[vi];

            std::vector<int> added;
            for (int u : adj_[vi])
                if (state_[static_cast<std::size_t>(u)] == kFree) {
                    state_[static_cast<std::size_t>(u)] = kFrontier;
                    added.push_back(u);
                }
            std::vector<int> next;
            next.reserve(frontier.size() - i - 1 + added.size());
            for (std::size_t k = i + 1; k < frontier.size(); ++k) next.push_back(frontier[k]);
            next.insert(next.end(), added.begin(), added.end());

            if (!best_.valid ||
                reachable_bound() >= best_.score - score_margin(best_.score))
                expand(next);

            for (int u : added) state_[static_cast<std::size_t>(u)] = kFree;
            current_.pop_back();
            current_weight_ -= w_[vi];
            state_[vi] = kExcluded;
        }
        // Hand the frontier back to the caller in its original state.
        for (std::size_t i = 0; i < frontier.size(); ++i)
            state_[static_cast<std::size_t>(frontier[i])] = kFrontier;
    }

    const std::vector<double>& w_;
    const std::vector<std::vector<int>>& adj_;
    int n_;
    std::vector<char> state_;
    std::vector<int> current_;
    double current_weight_ = 0.0;
    Incumbent best_;

    std::vector<int> bfs_;
    std::vector<std::uint32_t> seen_;
    std::uint32_t epoch_ = 0;

    std::optional<std::chrono::steady_clock::time_point> deadline_;
    bool expired_ = false;
};

}  // namespace

PCSTInstance to_pcst(const std::vector<double>& weights) {
    if (weights.empty()) throw std::invalid_argument("to_pcst: graph has no nodes");
    double w_min = 0.0;
    for (double w : weights) w_min = std::min(w_min, w);
    PCSTInstance instance;
    instance.profits.reserve(weights.size());
    for (double w : weights) instance.profits.push_back(w - w_min);
    instance.edge_cost = -w_min;
    instance.offset = w_min;
    return instance;
}

PCSTInstance to_pcst(const SpaceTimeGraph& graph) { return to_pcst(graph.node_weights()); }

SubgraphSolution solve_exact(const std::vector<double>& weights, const EdgeList& edges,
                             const SolverOptions& options) {
    if (weights.empty()) throw std::invalid_argument("solve_exact: graph has no nodes");
    const auto adj = make_adjacency(weights.size(), edges);
    ExactSearch search(weights, adj, options);
    return search.run();
}

SubgraphSolution solve_exact(const SpaceTimeGraph& graph, const SolverOptions& options) {
    return solve_exact(graph.node_weights(), graph.edges, options);
}

SubgraphSolution solve_path_dp(const std::vector<double>& weights) {
    if (weights.empty()) throw std::invalid_argument("solve_path_dp: empty weight sequence");
    const int n = static_cast<int>(weights.size());

    double best_sum = weights[0];
    int best_start = 0, best_end = 1;
    double run_sum = weights[0];
    int run_start = 0;
    for (int j = 1; j < n; ++j) {
        // Extending on a zero-valued prefix keeps the earliest start, which
        // is what the lexicographic tie-break wants.
        if (run_sum < 0.0) {
            run_sum = weights[static_cast<std::size_t>(j)];
            run_start = j;
        } else {
            run_sum += weights[static_cast<std::size_t>(j)];
        }
        if (run_sum > best_sum || (run_sum == best_sum && run_start < best_start)) {
            best_sum = run_sum;
            best_start = run_start;
            best_end = j + 1;
        }
    }

    SubgraphSolution solution;
    solution.node_ids.resize(static_cast<std::size_t>(best_end - best_start));
    for (int i = best_start; i < best_end; ++i)
        solution.node_ids[static_cast<std::size_t>(i - best_start)] = i;
    solution.score = canonical_score(weights, solution.node_ids);
    solution.optimality = Optimality::Exact;
    return solution;
}

SubgraphSolution solve_jump_dp(const std::vector<double>& weights, int jump_reach) {
    if (weights.empty()) throw std::invalid_argument("solve_jump_dp: empty weight sequence");
    if (jump_reach < 1) throw std::invalid_argument("solve_jump_dp: jump_reach must be >= 1");
    const int n = static_cast<int>(weights.size());

    std::vector<double> f(static_cast<std::size_t>(n));
    std::vector<int> pred(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        double best_prev = 0.0;
        int choice = -1;
        for (int j = std::max(0, i - jump_reach); j < i; ++j) {
            const double fj = f[static_cast<std::size_t>(j)];
            // Prefer the earliest predecessor, and prefer attaching over
            // starting fresh when the continuation is worth exactly zero.
            if (fj > best_prev || (fj == best_prev && choice == -1)) {
                best_prev = fj;
                choice = j;
            }
        }
        f[static_cast<std::size_t>(i)] = weights[static_cast<std::size_t>(i)] + best_prev;
        pred[static_cast<std::size_t>(i)] = choice;
    }

    int best_end = 0;
    for (int i = 1; i < n; ++i)
        if (f[static_cast<std::size_t>(i)] > f[static_cast<std::size_t>(best_end)]) best_end = i;

    SubgraphSolution solution;
    for (int i = best_end; i != -1; i = pred[static_cast<std::size_t>(i)])
        solution.node_ids.push_back(i);
    std::reverse(solution.node_ids.begin(), solution.node_ids.end());
    solution.score = canonical_score(weights, solution.node_ids);
    solution.optimality = Optimality::Exact;
    return solution;
}

SubgraphSolution brute_force_oracle(const std::vector<double>& weights, const EdgeList& edges,
                                    int max_nodes) {
    if (weights.empty()) throw std::invalid_argument("brute_force_oracle: graph has no nodes");
    const int n = static_cast<int>(weights.size());
    if (n > max_nodes)
        throw std::invalid_argument("brute_force_oracle: graph has " + std::to_string(n) +
                                    " nodes, bound is " + std::to_string(max_nodes));
    if (n > 62) throw std::invalid_argument("brute_force_oracle: more than 62 nodes");

    std::vector<std::uint64_t> adj_mask(static_cast<std::size_t>(n), 0);
    for (const auto& [u, v] : edges) {
        if (u == v) continue;
        adj_mask[static_cast<std::size_t>(u)] |= std::uint64_t{1} << v;
        adj_mask[static_cast<std::size_t>(v)] |= std::uint64_t{1} << u;
    }

    auto mask_ids = [n](std::uint64_t mask) {
        std::vector<int> ids;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) ids.push_back(i);
        return ids;
    };

    Incumbent best;
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
        // Flood fill from the lowest member; the set counts only when the
        // fill recovers the whole mask.
        std::uint64_t reached = mask & (~mask + 1);
        std::uint64_t frontier = reached;
        while (frontier != 0) {
            std::uint64_t expanded = 0;
            std::uint64_t bits = frontier;
            while (bits != 0) {
                const int b = std::countr_zero(bits);
                bits &= bits - 1;
                expanded |= adj_mask[static_cast<std::size_t>(b)];
            }
            frontier = expanded & mask & ~reached;
            reached |= frontier;
        }
        if (reached != mask) continue;

        double score = 0.0;
        std::uint64_t bits = mask;
        while (bits != 0) {
            const int b = std::countr_zero(bits);
            bits &= bits - 1;
            score += weights[static_cast<std::size_t>(b)];
        }
        if (!best.valid || score > best.score) {
            best.ids = mask_ids(mask);
            best.score = score;
            best.valid = true;
        } else if (score == best.score) {
            auto ids = mask_ids(mask);
            if (lex_less(ids, best.ids)) best.ids = std::move(ids);
        }
    }

    SubgraphSolution solution;
    solution.node_ids = best.ids;
    solution.score = best.score;
    solution.optimality = Optimality::Exact;
    return solution;
}

SubgraphSolution brute_force_oracle(const SpaceTimeGraph& graph, int max_nodes) {
    return brute_force_oracle(graph.node_weights(), graph.edges, max_nodes);
}

bool is_connected_subset(const std::vector<int>& ids, const EdgeList& edges) {
    if (ids.empty()) return false;
    std::vector<int> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    auto member = [&sorted](int v) {
        return std::binary_search(sorted.begin(), sorted.end(), v);
    };
    std::vector<std::vector<int>> adj;
    int max_id = sorted.back();
    adj.resize(static_cast<std::size_t>(max_id) + 1);
    for (const auto& [u, v] : edges) {
        if (u > max_id || v > max_id) continue;
        if (member(u) && member(v)) {
            adj[static_cast<std::size_t>(u)].push_back(v);
            adj[static_cast<std::size_t>(v)].push_back(u);
        }
    }
    std::vector<char> seen(static_cast<std::size_t>(max_id) + 1, 0);
    std::vector<int> stack{sorted[0]};
    seen[static_cast<std::size_t>(sorted[0])] = 1;
    std::size_t count = 0;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        ++count;
        for (int u : adj[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                stack.push_back(u);
            }
    }
    return count == sorted.size();
}

}  // namespace actdet
