#pragma once

#include <optional>
#include <string>
#include <vector>

#include "actdet/baselines.hpp"
#include "actdet/solver.hpp"

namespace actdet {

enum class Method {
    TSubgraph,
    TJump,
    STSubgraph,
    TwoStage,
    TSliding,
    STCubeSliding,
    STCubeSubvolume,
};

std::string method_name(Method method);
std::optional<Method> parse_method(const std::string& name);

/// Whether the method can run on a graph with the given structure/linking.
bool method_compatible(Method method, const GraphConfig& config);

struct DetectionBox {
    FrameInterval frames;
    PixelRect rect;

    bool operator==(const DetectionBox&) const = default;
};

/// One localized detection. `frames` spans from the first to the last
/// selected frame; `boxes` carries one pixel rectangle per selected slab for
/// spatially localized methods and is absent for whole-frame detections.
struct Detection {
    std::string method;
    std::vector<int> node_ids;
    double score = 0.0;
    FrameInterval frames;
    std::optional<std::vector<DetectionBox>> boxes;
    int rank = 0;
};

struct MultiDetectConfig {
    int max_detections = 10;
    double reweight_value = 0.0;
    double stop_below = 0.0;
};

struct DetectOptions {
    SolverOptions solver;
    BaselineOptions baseline;
};

/// Run one searcher on the graph and wrap its best region as a Detection.
/// Thresholds are not applied here: an all-negative graph still yields a
/// detection with a negative score.
Detection detect_single(const SpaceTimeGraph& graph, Method method,
                        const DetectOptions& options = {});

/// Hierarchical spatio-temporal search: an exact 2D subgraph solve per slab
/// over the 4-connected cell grid, then a 1D temporal solve over the slab
/// scores. The result is the union of the per-slab selections over the
/// temporally selected slabs, rescored on the final node set. Approximate by
/// construction.
Detection detect_two_stage(const SpaceTimeGraph& graph, const SolverOptions& options = {});

/// Iterative multi-instance detection: repeatedly detect, then reset the
/// selected nodes to `reweight_value` and search again. Stops at
/// `max_detections`, when the score drops below `stop_below`, or when it is
/// no longer positive.
std::vector<Detection> detect_multiple(const SpaceTimeGraph& graph, Method method,
                                       const MultiDetectConfig& config = {},
                                       const DetectOptions& options = {});

/// Ranked positive candidates of a sliding baseline as Detection records.
std::vector<Detection> detect_ranked_windows(const SpaceTimeGraph& graph, Method method,
                                             int max_detections,
                                             const DetectOptions& options = {});

}  // namespace actdet
