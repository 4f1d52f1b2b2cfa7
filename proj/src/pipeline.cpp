#include "actdet/pipeline.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace actdet {

std::string method_name(Method method) {
    switch (method) {
        case Method::TSubgraph: return "t-subgraph";
        case Method::TJump: return "t-jump";
        case Method::STSubgraph: return "st-subgraph";
        case Method::TwoStage: return "two-stage";
        case Method::TSliding: return "t-sliding";
        case Method::STCubeSliding: return "st-cube-sliding";
        case Method::STCubeSubvolume: return "st-cube-subvolume";
    }
    return "unknown";
}

std::optional<Method> parse_method(const std::string& name) {
    for (Method m : {Method::TSubgraph, Method::TJump, Method::STSubgraph, Method::TwoStage,
                     Method::TSliding, Method::STCubeSliding, Method::STCubeSubvolume})
        if (method_name(m) == name) return m;
    return std::nullopt;
}

bool method_compatible(Method method, const GraphConfig& config) {
    switch (method) {
        case Method::TSubgraph:
            return config.structure == NodeStructure::TemporalSlab &&
                   config.linking == Linking::Adjacent;
        case Method::TJump:
            return config.structure == NodeStructure::TemporalSlab &&
                   config.linking == Linking::TemporalJump;
        case Method::TSliding:
            return config.structure == NodeStructure::TemporalSlab;
        case Method::STSubgraph:
        case Method::TwoStage:
        case Method::STCubeSliding:
        case Method::STCubeSubvolume:
            return config.structure == NodeStructure::SpatioTemporalCube;
    }
    return false;
}

namespace {

void require_compatible(Method method, const SpaceTimeGraph& graph) {
    if (graph.nodes.empty()) throw std::invalid_argument("detect: graph has no nodes");
    if (!method_compatible(method, graph.config))
        throw std::invalid_argument("method " + method_name(method) +
                                    " is not compatible with this graph structure");
}

Detection from_node_set(const SpaceTimeGraph& graph, Method method, std::vector<int> ids,
                        double score) {
    Detection det;
    det.method = method_name(method);
    std::sort(ids.begin(), ids.end());
    det.node_ids = std::move(ids);
    det.score = score;

    int f0 = graph.extent.num_frames, f1 = 0;
    for (int id : det.node_ids) {
        const auto& n = graph.node(id);
        f0 = std::min(f0, n.frames.start);
        f1 = std::max(f1, n.frames.end);
    }
    det.frames = {f0, f1};

    if (!graph.whole_frame_nodes()) {
        // One bounding rectangle per selected slab.
        std::map<int, PixelRect> per_slab;
        for (int id : det.node_ids) {
            const auto& n = graph.node(id);
            auto [it, fresh] = per_slab.try_emplace(n.slab, n.rect);
            if (!fresh) {
                it->second.x0 = std::min(it->second.x0, n.rect.x0);
                it->second.y0 = std::min(it->second.y0, n.rect.y0);
                it->second.x1 = std::max(it->second.x1, n.rect.x1);
                it->second.y1 = std::max(it->second.y1, n.rect.y1);
            }
        }
        std::vector<DetectionBox> boxes;
        boxes.reserve(per_slab.size());
        for (const auto& [slab, rect] : per_slab) {
            const auto& any_node = graph.node(slab * graph.cells_per_slab());
            boxes.push_back({any_node.frames, rect});
        }
        det.boxes = std::move(boxes);
    }
    return det;
}

Detection from_window(const SpaceTimeGraph& graph, Method method, const WindowCandidate& w) {
    return from_node_set(graph, method, window_node_ids(graph, w), w.score);
}

SlidingResult run_sliding(const SpaceTimeGraph& graph, Method method,
                          const DetectOptions& options) {
    if (method == Method::TSliding) return t_sliding(graph, 1, std::nullopt, options.baseline);
    if (method == Method::STCubeSliding) return st_cube_sliding(graph, options.baseline);
    SlidingResult single;
    single.candidates.push_back(st_cube_subvolume(graph));
    return single;
}

}  // namespace

Detection detect_single(const SpaceTimeGraph& graph, Method method, const DetectOptions& options) {
    require_compatible(method, graph);
    switch (method) {
        case Method::TSubgraph: {
            const auto sol = solve_path_dp(graph.node_weights());
            return from_node_set(graph, method, sol.node_ids, sol.score);
        }
        case Method::TJump: {
            const auto sol = solve_jump_dp(graph.node_weights(), graph.config.jump_reach);
            return from_node_set(graph, method, sol.node_ids, sol.score);
        }
        case Method::STSubgraph: {
            const auto sol = solve_exact(graph, options.solver);
            return from_node_set(graph, method, sol.node_ids, sol.score);
        }
        case Method::TwoStage:
            return detect_two_stage(graph, options.solver);
        case Method::TSliding:
        case Method::STCubeSliding:
        case Method::STCubeSubvolume: {
            const auto result = run_sliding(graph, method, options);
            return from_window(graph, method, result.candidates.front());
        }
    }
    throw std::invalid_argument("detect_single: unknown method");
}

Detection detect_two_stage(const SpaceTimeGraph& graph, const SolverOptions& options) {
    require_compatible(Method::TwoStage, graph);
    const int slabs = graph.num_slabs();
    const int rows = graph.config.grid.rows;
    const int cols = graph.config.grid.cols;
    const int cells = rows * cols;

    // 4-connected grid over the cells of one slab.
    EdgeList grid_edges;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) grid_edges.emplace_back(r * cols + c, r * cols + c + 1);
            if (r + 1 < rows) grid_edges.emplace_back(r * cols + c, (r + 1) * cols + c);
        }

    std::vector<double> slab_scores(static_cast<std::size_t>(slabs));
    std::vector<std::vector<int>> slab_picks(static_cast<std::size_t>(slabs));
    for (int s = 0; s < slabs; ++s) {
        std::vector<double> w(static_cast<std::size_t>(cells));
        for (int k = 0; k < cells; ++k)
            w[static_cast<std::size_t>(k)] =
                graph.nodes[static_cast<std::size_t>(s * cells + k)].weight;
        const auto sol = solve_exact(w, grid_edges, options);
        slab_scores[static_cast<std::size_t>(s)] = sol.score;
        for (int k : sol.node_ids) slab_picks[static_cast<std::size_t>(s)].push_back(s * cells + k);
    }

    const auto temporal = solve_path_dp(slab_scores);

    std::vector<int> ids;
    for (int s : temporal.node_ids)
        ids.insert(ids.end(), slab_picks[static_cast<std::size_t>(s)].begin(),
                   slab_picks[static_cast<std::size_t>(s)].end());
    std::sort(ids.begin(), ids.end());

    // Per-slab selections in neighboring slabs need not touch spatially, so
    // the union can fall apart; a detection is a connected region, so keep
    // the best-scoring component of the union.
    const auto adj = graph.adjacency();
    std::vector<char> in_union(graph.nodes.size(), 0);
    for (int id : ids) in_union[static_cast<std::size_t>(id)] = 1;
    std::vector<char> seen(graph.nodes.size(), 0);
    std::vector<int> best_component;
    double best_score = 0.0;
    for (int id : ids) {
        if (seen[static_cast<std::size_t>(id)]) continue;
        std::vector<int> component;
        std::vector<int> stack{id};
        seen[static_cast<std::size_t>(id)] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            component.push_back(v);
            for (int u : adj[static_cast<std::size_t>(v)])
                if (in_union[static_cast<std::size_t>(u)] &&
                    !seen[static_cast<std::size_t>(u)]) {
                    seen[static_cast<std::size_t>(u)] = 1;
                    stack.push_back(u);
                }
        }
        std::sort(component.begin(), component.end());
        double score = 0.0;
        for (int v : component) score += graph.node(v).weight;
        if (best_component.empty() || score > best_score ||
            (score == best_score &&
             std::lexicographical_compare(component.begin(), component.end(),
                                          best_component.begin(), best_component.end()))) {
            best_component = std::move(component);
            best_score = score;
        }
    }
    return from_node_set(graph, Method::TwoStage, std::move(best_component), best_score);
}

std::vector<Detection> detect_multiple(const SpaceTimeGraph& graph, Method method,
                                       const MultiDetectConfig& config,
                                       const DetectOptions& options) {
    if (config.max_detections < 1)
        throw std::invalid_argument("detect_multiple: max_detections must be >= 1");
    require_compatible(method, graph);

    std::vector<Detection> detections;
    SpaceTimeGraph current = graph;
    for (int k = 0; k < config.max_detections; ++k) {
        Detection det = detect_single(current, method, options);
        if (det.score < config.stop_below || det.score <= 0.0) break;
        det.rank = k;
        SpaceTimeGraph next = reweight_nodes(current, det.node_ids, config.reweight_value);
        detections.push_back(std::move(det));
        current = std::move(next);
    }
    return detections;
}

std::vector<Detection> detect_ranked_windows(const SpaceTimeGraph& graph, Method method,
                                             int max_detections, const DetectOptions& options) {
    if (method != Method::TSliding && method != Method::STCubeSliding &&
        method != Method::STCubeSubvolume)
        throw std::invalid_argument("detect_ranked_windows expects a sliding-window method");
    require_compatible(method, graph);
    const auto result = run_sliding(graph, method, options);
    std::vector<Detection> detections;
    for (const auto& w : result.candidates) {
        if (w.score <= 0.0) continue;
        if (max_detections > 0 && static_cast<int>(detections.size()) >= max_detections) break;
        Detection det = from_window(graph, method, w);
        det.rank = static_cast<int>(detections.size());
        detections.push_back(std::move(det));
    }
    return detections;
}

}  // namespace actdet
