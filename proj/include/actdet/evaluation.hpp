#pragma once

#include <optional>
#include <string>
#include <vector>

#include "actdet/pipeline.hpp"

namespace actdet {

/// A labeled activity instance: temporal boundaries and, when available,
/// per-frame-range pixel boxes.
struct GroundTruthInstance {
    std::string label = "activity";
    FrameInterval frames;
    std::optional<std::vector<DetectionBox>> boxes;
};

/// Intersection-over-union of two frame intervals. Degenerate (empty)
/// intervals are rejected.
double temporal_overlap(FrameInterval pred, FrameInterval truth);

/// Voxel intersection-over-union computed slab-wise from the rectangles on
/// both sides. Requires spatial boxes on the detection and the truth.
double spatiotemporal_overlap(const Detection& pred, const GroundTruthInstance& truth);

/// Spatio-temporal overlap when both sides carry boxes, temporal otherwise.
double detection_overlap(const Detection& pred, const GroundTruthInstance& truth);

struct OverlapReport {
    std::vector<double> per_instance;  // best overlap per ground-truth instance
    double mean_overlap = 0.0;
};

/// Best overlap per truth instance over all detections, plus the mean.
OverlapReport evaluate_overlap(const std::vector<Detection>& detections,
                               const std::vector<GroundTruthInstance>& truths);

struct ScoredInterval {
    std::string video;
    std::string label;
    double score = 0.0;
    FrameInterval frames;
};

struct TruthInterval {
    std::string video;
    std::string label;
    FrameInterval frames;
};

/// Detection-style mean average precision: per class, detections are taken
/// in score order and greedily matched to at most one unmatched truth in the
/// same video at the given IoU threshold; AP is the area under the
/// interpolated precision-recall curve and mAP averages over the classes
/// present in the ground truth. The threshold must lie in (0, 1].
double mean_average_precision(std::vector<ScoredInterval> detections,
                              const std::vector<TruthInterval>& truths, double iou_threshold);

struct BenchMethodSpec {
    std::string label;
    Method method = Method::TSubgraph;
    int step = 1;
    std::optional<std::vector<int>> durations;  // t-sliding pool; unset = exhaustive
};

struct BenchInstance {
    std::string name;
    SpaceTimeGraph graph;
    std::vector<GroundTruthInstance> truths;
};

struct BenchRow {
    std::string method;
    std::string instance;
    double score = 0.0;
    double overlap = 0.0;
    std::vector<double> times_ms;  // one sample per repetition
    double mean_ms = 0.0;
    double stdev_ms = 0.0;
};

struct MethodSummary {
    std::string method;
    double mean_overlap = 0.0;
    double mean_ms = 0.0;
    double stdev_ms = 0.0;
};

struct EvalReport {
    std::vector<BenchRow> rows;
    std::vector<MethodSummary> summary;
};

/// Run every method on every instance `repetitions` times, timing each run
/// on the monotonic clock. Accuracy columns are deterministic; methods run
/// sequentially so timings stay clean.
EvalReport benchmark(const std::vector<BenchMethodSpec>& methods,
                     const std::vector<BenchInstance>& instances, int repetitions);

/// Growing sliding-window pools {1..cap} for each cap, followed by the
/// subgraph searcher: the accuracy-versus-time frontier protocol.
std::vector<BenchMethodSpec> accuracy_time_ladder(const std::vector<int>& pool_caps);

}  // namespace actdet
