#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "actdet/evaluation.hpp"

namespace actdet {

/// One planted activity. `spatial_path` gives the grid cell occupied in each
/// slab the activity spans (absent = whole frame). Rates are features per
/// frame; the fractional part is resolved by one seeded coin per frame.
struct PlantedActivity {
    FrameInterval frames;
    std::optional<std::vector<std::pair<int, int>>> spatial_path;  // (row, col) per slab
    double signal_rate = 1.0;
    std::vector<int> signal_words;

    bool operator==(const PlantedActivity&) const = default;
};

/// A burst of distractor features overlaying an interval, e.g. an occluder
/// passing in front of the activity.
struct OcclusionBurst {
    FrameInterval frames;
    std::vector<int> distractor_words;
    double rate = 0.0;

    bool operator==(const OcclusionBurst&) const = default;
};

struct ScenarioSpec {
    std::string name = "scenario";
    std::string label = "activity";
    VideoExtent extent;
    int vocab_size = 2;
    int slab_frames = 10;
    GridShape grid{1, 1};
    int jump_reach = 2;
    std::vector<PlantedActivity> planted;
    double noise_rate = 0.0;
    std::vector<int> noise_words;
    std::vector<OcclusionBurst> occlusions;
    std::uint64_t seed = 0;

    bool operator==(const ScenarioSpec&) const = default;
};

struct GeneratedScenario {
    std::vector<QuantizedFeature> features;
    std::vector<GroundTruthInstance> truths;
    WordModel model;
};

/// Deterministic scenario synthesis. The emitted model weighs signal words
/// +1 and noise/distractor words -1, so planted regions carry positive node
/// weight and background negative. Signal and noise word sets must not
/// overlap. Ground truth mirrors the planted extents.
GeneratedScenario generate(const ScenarioSpec& spec);

/// generate() plus the requirement that every planted spatial path actually
/// changes cell across slabs.
GeneratedScenario generate_drift(const ScenarioSpec& spec);

/// Graph configuration the scenario was designed for.
GraphConfig scenario_graph_config(const ScenarioSpec& spec, NodeStructure structure,
                                  Linking linking);

/// Named presets: fig5, fig7-occlusion, fig8-drift, thumos-multi.
ScenarioSpec scenario_preset(const std::string& name);
std::vector<std::string> scenario_preset_names();

}  // namespace actdet
