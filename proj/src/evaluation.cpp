#include "actdet/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace actdet {

double temporal_overlap(FrameInterval pred, FrameInterval truth) {
    if (pred.empty() || truth.empty())
        throw std::invalid_argument("temporal_overlap: degenerate interval");
    const int inter = std::min(pred.end, truth.end) - std::max(pred.start, truth.start);
    if (inter <= 0) return 0.0;
    const int uni = std::max(pred.end, truth.end) - std::min(pred.start, truth.start);
    return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

double boxes_volume(const std::vector<DetectionBox>& boxes) {
    double vol = 0.0;
    for (const auto& b : boxes)
        vol += static_cast<double>(b.frames.length()) * static_cast<double>(b.rect.area());
    return vol;
}

// Boxes on each side cover disjoint frame ranges, so pairwise intersection
// counts every voxel once.
double boxes_intersection(const std::vector<DetectionBox>& a, const std::vector<DetectionBox>& b) {
    double inter = 0.0;
    for (const auto& pa : a)
        for (const auto& pb : b) {
            const int frames =
                std::min(pa.frames.end, pb.frames.end) - std::max(pa.frames.start, pb.frames.start);
            if (frames <= 0) continue;
            inter += static_cast<double>(frames) *
                     static_cast<double>(intersect(pa.rect, pb.rect).area());
        }
    return inter;
}

}  // namespace

double spatiotemporal_overlap(const Detection& pred, const GroundTruthInstance& truth) {
    if (!truth.boxes) throw std::invalid_argument("spatiotemporal_overlap: truth has no boxes");
    if (!pred.boxes) throw std::invalid_argument("spatiotemporal_overlap: detection has no boxes");
    const double vol_pred = boxes_volume(*pred.boxes);
    const double vol_truth = boxes_volume(*truth.boxes);
    if (vol_pred <= 0.0 || vol_truth <= 0.0)
        throw std::invalid_argument("spatiotemporal_overlap: degenerate region");
    const double inter = boxes_intersection(*pred.boxes, *truth.boxes);
    return inter / (vol_pred + vol_truth - inter);
}

double detection_overlap(const Detection& pred, const GroundTruthInstance& truth) {
    if (pred.boxes && truth.boxes) return spatiotemporal_overlap(pred, truth);
    return temporal_overlap(pred.frames, truth.frames);
}

OverlapReport evaluate_overlap(const std::vector<Detection>& detections,
                               const std::vector<GroundTruthInstance>& truths) {
    OverlapReport report;
    report.per_instance.reserve(truths.size());
    for (const auto& truth : truths) {
        double best = 0.0;
        for (const auto& det : detections) best = std::max(best, detection_overlap(det, truth));
        report.per_instance.push_back(best);
    }
    if (!report.per_instance.empty()) {
        double sum = 0.0;
        for (double v : report.per_instance) sum += v;
        report.mean_overlap = sum / static_cast<double>(report.per_instance.size());
    }
    return report;
}

double mean_average_precision(std::vector<ScoredInterval> detections,
                              const std::vector<TruthInterval>& truths, double iou_threshold) {
    if (!(iou_threshold > 0.0 && iou_threshold <= 1.0))
        throw std::invalid_argument("mean_average_precision: iou_threshold must be in (0, 1]");
    if (truths.empty())
        throw std::invalid_argument("mean_average_precision: no ground truth instances");

    std::set<std::string> labels;
    for (const auto& t : truths) labels.insert(t.label);

    std::sort(detections.begin(), detections.end(),
              [](const ScoredInterval& a, const ScoredInterval& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return std::tie(a.video, a.frames.start, a.frames.end) <
                         std::tie(b.video, b.frames.start, b.frames.end);
              });

    double ap_sum = 0.0;
    for (const auto& label : labels) {
        struct TruthSlot {
            const TruthInterval* truth;
            bool matched = false;
        };
        std::map<std::string, std::vector<TruthSlot>> by_video;
        int npos = 0;
        for (const auto& t : truths)
            if (t.label == label) {
                by_video[t.video].push_back({&t, false});
                ++npos;
            }

        // Greedy matching in rank order: each detection claims at most one
        // still-unmatched truth in its own video.
        std::vector<char> is_tp;
        for (const auto& det : detections) {
            if (det.label != label) continue;
            TruthSlot* best_slot = nullptr;
            double best_iou = 0.0;
            auto it = by_video.find(det.video);
            if (it != by_video.end()) {
                for (auto& slot : it->second) {
                    if (slot.matched) continue;
                    const double iou = temporal_overlap(det.frames, slot.truth->frames);
                    if (iou > best_iou) {
                        best_iou = iou;
                        best_slot = &slot;
                    }
                }
            }
            if (best_slot != nullptr && best_iou >= iou_threshold) {
                best_slot->matched = true;
                is_tp.push_back(1);
            } else {
                is_tp.push_back(0);
            }
        }

        // Area under the interpolated precision-recall curve.
        const std::size_t n = is_tp.size();
        std::vector<double> precision(n), recall(n);
        int tp = 0;
        for (std::size_t k = 0; k < n; ++k) {
            tp += is_tp[k];
            precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
            recall[k] = static_cast<double>(tp) / static_cast<double>(npos);
        }
        for (std::size_t k = n; k-- > 1;)
            precision[k - 1] = std::max(precision[k - 1], precision[k]);
        double ap = 0.0;
        double prev_recall = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (is_tp[k]) {
                ap += (recall[k] - prev_recall) * precision[k];
                prev_recall = recall[k];
            }
        ap_sum += ap;
    }
    return ap_sum / static_cast<double>(labels.size());
}

namespace {

Detection run_bench_method(const SpaceTimeGraph& graph, const BenchMethodSpec& spec) {
    if (spec.method == Method::TSliding) {
        const auto result = t_sliding(graph, spec.step, spec.durations);
        Detection det;
        // Whole-frame window: report it through the usual single-detection
        // path so scores stay canonical.
        const auto& top = result.candidates.front();
        det.method = spec.label;
        det.score = top.score;
        const int f = graph.config.slab_frames;
        det.frames = {top.slab_start * f,
                      std::min(top.slab_end * f, graph.extent.num_frames)};
        return det;
    }
    Detection det = detect_single(graph, spec.method);
    det.method = spec.label;
    return det;
}

}  // namespace

EvalReport benchmark(const std::vector<BenchMethodSpec>& methods,
                     const std::vector<BenchInstance>& instances, int repetitions) {
    if (repetitions < 1) throw std::invalid_argument("benchmark: repetitions must be >= 1");
    EvalReport report;
    for (const auto& method : methods) {
        double overlap_sum = 0.0;
        std::vector<double> all_times;
        for (const auto& instance : instances) {
            BenchRow row;
            row.method = method.label;
            row.instance = instance.name;
            Detection det;
            for (int rep = 0; rep < repetitions; ++rep) {
                const auto t0 = std::chrono::steady_clock::now();
                det = run_bench_method(instance.graph, method);
                const auto t1 = std::chrono::steady_clock::now();
                row.times_ms.push_back(
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
            }
            row.score = det.score;
            row.overlap = evaluate_overlap({det}, instance.truths).mean_overlap;

            double sum = 0.0;
            for (double t : row.times_ms) sum += t;
            row.mean_ms = sum / static_cast<double>(row.times_ms.size());
            double var = 0.0;
            for (double t : row.times_ms) var += (t - row.mean_ms) * (t - row.mean_ms);
            row.stdev_ms = row.times_ms.size() > 1
                               ? std::sqrt(var / static_cast<double>(row.times_ms.size() - 1))
                               : 0.0;

            overlap_sum += row.overlap;
            all_times.insert(all_times.end(), row.times_ms.begin(), row.times_ms.end());
            report.rows.push_back(std::move(row));
        }
        MethodSummary summary;
        summary.method = method.label;
        summary.mean_overlap =
            instances.empty() ? 0.0 : overlap_sum / static_cast<double>(instances.size());
        double sum = 0.0;
        for (double t : all_times) sum += t;
        summary.mean_ms = all_times.empty() ? 0.0 : sum / static_cast<double>(all_times.size());
        double var = 0.0;
        for (double t : all_times) var += (t - summary.mean_ms) * (t - summary.mean_ms);
        summary.stdev_ms = all_times.size() > 1
                               ? std::sqrt(var / static_cast<double>(all_times.size() - 1))
                               : 0.0;
        report.summary.push_back(std::move(summary));
    }
    return report;
}

std::vector<BenchMethodSpec> accuracy_time_ladder(const std::vector<int>& pool_caps) {
    std::vector<BenchMethodSpec> methods;
    for (int cap : pool_caps) {
        if (cap < 1) throw std::invalid_argument("accuracy_time_ladder: pool cap must be >= 1");
        BenchMethodSpec spec;
        spec.label = "t-sliding-pool-" + std::to_string(cap);
        spec.method = Method::TSliding;
        spec.durations = std::vector<int>{};
        for (int d = 1; d <= cap; ++d) spec.durations->push_back(d);
        methods.push_back(std::move(spec));
    }
    BenchMethodSpec subgraph;
    subgraph.label = "t-subgraph";
    subgraph.method = Method::TSubgraph;
    methods.push_back(std::move(subgraph));
    return methods;
}

}  // namespace actdet
