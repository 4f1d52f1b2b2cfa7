#pragma once

#include <optional>
#include <string>
#include <vector>

#include "actdet/evaluation.hpp"
#include "actdet/synthetic.hpp"

namespace actdet::io {

/// Line-oriented files start with `# key=value` header lines (at least
/// `# manifest=...`), followed by records. JSON documents carry a top-level
/// "manifest" field instead. Readers accept files without headers.

struct FeatureFile {
    std::vector<QuantizedFeature> features;
    std::optional<VideoExtent> extent;
    std::string video;
};

/// CSV with header row `t,x,y,word`, one feature per line.
void write_features(const std::string& path, const std::vector<QuantizedFeature>& features,
                    const VideoExtent& extent, const std::string& video,
                    const std::string& manifest_ref);
FeatureFile read_features(const std::string& path);

/// JSON document {"vocab_size": K, "bias": b, "weights": [...]}.
void write_model(const std::string& path, const WordModel& model,
                 const std::string& manifest_ref);
WordModel read_model(const std::string& path);

struct TruthFile {
    std::vector<GroundTruthInstance> truths;
    std::string video;
};

/// JSON lines: {"label", "frame_start", "frame_end", "boxes": null | [...]}.
void write_truths(const std::string& path, const std::vector<GroundTruthInstance>& truths,
                  const std::string& video, const std::string& manifest_ref);
TruthFile read_truths(const std::string& path);

struct DetectionFile {
    std::vector<Detection> detections;
    std::string video;
};

/// JSON lines: {"method", "rank", "score", "frame_start", "frame_end",
/// "boxes": null | [{"frame_start","frame_end","x0","y0","x1","y1"}],
/// "node_ids": [...]}.
void write_detections(const std::string& path, const std::vector<Detection>& detections,
                      const std::string& video, const std::string& manifest_ref);
DetectionFile read_detections(const std::string& path);

/// Debug export: {"nodes": [{id, slab, row, col, weight, frame_start,
/// frame_end}], "edges": [[u, v], ...]}. row/col are null for whole-frame
/// nodes.
void write_graph(const std::string& path, const SpaceTimeGraph& graph,
                 const std::string& manifest_ref);

/// JSON document mirroring ScenarioSpec field names.
void write_scenario(const std::string& path, const ScenarioSpec& spec);
ScenarioSpec read_scenario(const std::string& path);

/// Benchmark table: CSV `method,instance,score,overlap,time_ms`, one row per
/// repetition.
void write_bench_csv(const std::string& path, const EvalReport& report,
                     const std::string& manifest_ref);

struct Manifest {
    std::string command;
    std::string version;
    std::optional<std::uint64_t> seed;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::string> outputs;
    std::string started_at;
    std::string finished_at;
};

void write_manifest(const std::string& path, const Manifest& manifest);

std::string tool_version();

}  // namespace actdet::io
