#pragma once

#include <utility>
#include <vector>

#include "actdet/graph.hpp"
#include "actdet/rng.hpp"
#include "actdet/solver.hpp"

namespace actdet::testing {

// Graph with prescribed node weights, built through the public surface:
// an empty feature stream then one reweight per node.
inline SpaceTimeGraph slab_graph(const std::vector<double>& weights,
                                 Linking linking = Linking::Adjacent, int jump_reach = 2,
                                 int slab_frames = 10) {
    GraphConfig config;
    config.structure = NodeStructure::TemporalSlab;
    config.slab_frames = slab_frames;
    config.linking = linking;
    config.jump_reach = jump_reach;
    VideoExtent extent{static_cast<int>(weights.size()) * slab_frames, 32, 32};
    WordModel model;
    model.weights = {0.0};
    SpaceTimeGraph graph = build_graph({}, model, extent, config);
    for (std::size_t i = 0; i < weights.size(); ++i)
        graph = reweight_nodes(graph, {static_cast<int>(i)}, weights[i]);
    return graph;
}

// Cell-major per slab: weights[slab * rows * cols + row * cols + col].
inline SpaceTimeGraph cube_graph(int slabs, int rows, int cols,
                                 const std::vector<double>& weights, int slab_frames = 10) {
    GraphConfig config;
    config.structure = NodeStructure::SpatioTemporalCube;
    config.slab_frames = slab_frames;
    config.grid = {rows, cols};
    VideoExtent extent{slabs * slab_frames, cols * 10, rows * 10};
    WordModel model;
    model.weights = {0.0};
    SpaceTimeGraph graph = build_graph({}, model, extent, config);
    for (std::size_t i = 0; i < weights.size(); ++i)
        graph = reweight_nodes(graph, {static_cast<int>(i)}, weights[i]);
    return graph;
}

inline double uniform_weight(SplitMix64& rng) { return rng.unit() * 10.0 - 5.0; }

struct RandomGraph {
    std::vector<double> weights;
    EdgeList edges;
};

// Random spanning tree plus extra edges, weights uniform in [-5, 5].
inline RandomGraph random_connected(SplitMix64& rng, int n, double extra_edge_prob = 0.3) {
    RandomGraph g;
    g.weights.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g.weights.push_back(uniform_weight(rng));
    for (int v = 1; v < n; ++v) {
        const int u = rng.below_int(v);
        g.edges.emplace_back(u, v);
    }
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.unit() < extra_edge_prob) g.edges.emplace_back(u, v);
    return g;
}

inline RandomGraph random_grid(SplitMix64& rng, int rows, int cols) {
    RandomGraph g;
    for (int i = 0; i < rows * cols; ++i) g.weights.push_back(uniform_weight(rng));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) g.edges.emplace_back(r * cols + c, r * cols + c + 1);
            if (r + 1 < rows) g.edges.emplace_back(r * cols + c, (r + 1) * cols + c);
        }
    return g;
}

// Independent check for path searches: every contiguous range, plain sums,
// ties to the earliest then shortest range.
struct BestRange {
    double score = 0.0;
    int start = 0;
    int end = 0;
};

inline BestRange best_range_bruteforce(const std::vector<double>& w) {
    BestRange best;
    bool have = false;
    const int n = static_cast<int>(w.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            double s = 0.0;
            for (int k = i; k < j; ++k) s += w[static_cast<std::size_t>(k)];
            if (!have || s > best.score) {
                best = {s, i, j};
                have = true;
            }
        }
    }
    return best;
}

}  // namespace actdet::testing
