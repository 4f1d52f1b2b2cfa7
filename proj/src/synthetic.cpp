#include "actdet/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "actdet/rng.hpp"

namespace actdet {

namespace {

void check_words(const std::vector<int>& words, int vocab, const char* what) {
    for (int w : words)
        if (w < 0 || w >= vocab)
            throw std::invalid_argument(std::string("scenario: ") + what + " word " +
                                        std::to_string(w) + " outside vocabulary of " +
                                        std::to_string(vocab));
}

void validate_spec(const ScenarioSpec& spec) {
    validate(spec.extent);
    if (spec.vocab_size < 1) throw std::invalid_argument("scenario: vocab_size must be >= 1");
    if (spec.slab_frames < 1) throw std::invalid_argument("scenario: slab_frames must be >= 1");
    if (spec.grid.rows < 1 || spec.grid.cols < 1)
        throw std::invalid_argument("scenario: grid dimensions must be >= 1");
    if (spec.noise_rate < 0.0) throw std::invalid_argument("scenario: noise_rate must be >= 0");
    if (spec.noise_rate > 0.0 && spec.noise_words.empty())
        throw std::invalid_argument("scenario: noise_rate > 0 requires noise_words");
    check_words(spec.noise_words, spec.vocab_size, "noise");

    std::set<int> signal_set;
    std::set<int> negative_set(spec.noise_words.begin(), spec.noise_words.end());

    for (std::size_t i = 0; i < spec.planted.size(); ++i) {
        const auto& p = spec.planted[i];
        if (p.frames.empty() || p.frames.start < 0 || p.frames.end > spec.extent.num_frames)
            throw std::invalid_argument("scenario: planted[" + std::to_string(i) +
                                        "].frames outside the video extent");
        if (p.signal_rate < 0.0)
            throw std::invalid_argument("scenario: planted[" + std::to_string(i) +
                                        "].signal_rate must be >= 0");
        if (p.signal_words.empty())
            throw std::invalid_argument("scenario: planted[" + std::to_string(i) +
                                        "].signal_words is empty");
        check_words(p.signal_words, spec.vocab_size, "signal");
        signal_set.insert(p.signal_words.begin(), p.signal_words.end());
        if (p.spatial_path) {
            const int first_slab = p.frames.start / spec.slab_frames;
            const int last_slab = (p.frames.end - 1) / spec.slab_frames;
            const int span = last_slab - first_slab + 1;
            if (static_cast<int>(p.spatial_path->size()) != span)
                throw std::invalid_argument(
                    "scenario: planted[" + std::to_string(i) + "].spatial_path has " +
                    std::to_string(p.spatial_path->size()) + " cells, activity spans " +
                    std::to_string(span) + " slabs");
            for (const auto& [r, c] : *p.spatial_path)
                if (r < 0 || r >= spec.grid.rows || c < 0 || c >= spec.grid.cols)
                    throw std::invalid_argument("scenario: planted[" + std::to_string(i) +
                                                "].spatial_path cell outside the grid");
            if (spec.extent.width < spec.grid.cols || spec.extent.height < spec.grid.rows)
                throw std::invalid_argument("scenario: grid is finer than the frame");
        }
    }

    for (std::size_t i = 0; i < spec.occlusions.size(); ++i) {
        const auto& o = spec.occlusions[i];
        if (o.frames.empty() || o.frames.start < 0 || o.frames.end > spec.extent.num_frames)
            throw std::invalid_argument("scenario: occlusions[" + std::to_string(i) +
                                        "].frames outside the video extent");
        if (o.rate < 0.0)
            throw std::invalid_argument("scenario: occlusions[" + std::to_string(i) +
                                        "].rate must be >= 0");
        if (o.rate > 0.0 && o.distractor_words.empty())
            throw std::invalid_argument("scenario: occlusions[" + std::to_string(i) +
                                        "].distractor_words is empty");
        check_words(o.distractor_words, spec.vocab_size, "distractor");
        negative_set.insert(o.distractor_words.begin(), o.distractor_words.end());
    }

    for (int w : signal_set)
        if (negative_set.count(w))
            throw std::invalid_argument("scenario: word " + std::to_string(w) +
                                        " appears in both signal and noise/distractor sets");
}

// Integer rates emit exactly `rate` features per frame; a fractional part
// costs one seeded coin flip per frame, keeping the stream reproducible.
int frame_count(double rate, SplitMix64& rng) {
    const double base = std::floor(rate);
    const double frac = rate - base;
    int count = static_cast<int>(base);
    if (frac > 0.0 && rng.unit() < frac) ++count;
    return count;
}

QuantizedFeature place_in_rect(int frame, const PixelRect& rect, int word, SplitMix64& rng) {
    QuantizedFeature f;
    f.t = frame;
    f.x = rect.x0 + rng.below_int(rect.x1 - rect.x0);
    f.y = rect.y0 + rng.below_int(rect.y1 - rect.y0);
    f.word = word;
    return f;
}

int pick_word(const std::vector<int>& words, SplitMix64& rng) {
    return words[static_cast<std::size_t>(rng.below(words.size()))];
}

}  // namespace

GeneratedScenario generate(const ScenarioSpec& spec) {
    validate_spec(spec);
    SplitMix64 rng(spec.seed);
    GeneratedScenario out;
    const PixelRect full{0, 0, spec.extent.width, spec.extent.height};

    for (const auto& p : spec.planted) {
        const int first_slab = p.frames.start / spec.slab_frames;
        for (int t = p.frames.start; t < p.frames.end; ++t) {
            PixelRect rect = full;
            if (p.spatial_path) {
                const auto& [row, col] = (*p.spatial_path)[static_cast<std::size_t>(
                    t / spec.slab_frames - first_slab)];
                rect = cell_rect(row, col, spec.extent, spec.grid);
            }
            const int count = frame_count(p.signal_rate, rng);
            for (int i = 0; i < count; ++i)
                out.features.push_back(place_in_rect(t, rect, pick_word(p.signal_words, rng), rng));
        }
    }

    if (spec.noise_rate > 0.0) {
        for (int t = 0; t < spec.extent.num_frames; ++t) {
            const int count = frame_count(spec.noise_rate, rng);
            for (int i = 0; i < count; ++i)
                out.features.push_back(place_in_rect(t, full, pick_word(spec.noise_words, rng),
                                                     rng));
        }
    }

    for (const auto& o : spec.occlusions) {
        for (int t = o.frames.start; t < o.frames.end; ++t) {
            const int count = frame_count(o.rate, rng);
            for (int i = 0; i < count; ++i)
                out.features.push_back(
                    place_in_rect(t, full, pick_word(o.distractor_words, rng), rng));
        }
    }

    // Signal words score +1, noise and distractor words -1, idle words 0.
    out.model.bias = 0.0;
    out.model.weights.assign(static_cast<std::size_t>(spec.vocab_size), 0.0);
    for (const auto& p : spec.planted)
        for (int w : p.signal_words) out.model.weights[static_cast<std::size_t>(w)] = 1.0;
    for (int w : spec.noise_words) out.model.weights[static_cast<std::size_t>(w)] = -1.0;
    for (const auto& o : spec.occlusions)
        for (int w : o.distractor_words) out.model.weights[static_cast<std::size_t>(w)] = -1.0;

    for (const auto& p : spec.planted) {
        GroundTruthInstance truth;
        truth.label = spec.label;
        truth.frames = p.frames;
        if (p.spatial_path) {
            std::vector<DetectionBox> boxes;
            const int first_slab = p.frames.start / spec.slab_frames;
            for (std::size_t k = 0; k < p.spatial_path->size(); ++k) {
                const int slab = first_slab + static_cast<int>(k);
                FrameInterval frames{std::max(p.frames.start, slab * spec.slab_frames),
                                     std::min(p.frames.end, (slab + 1) * spec.slab_frames)};
                const auto& [row, col] = (*p.spatial_path)[k];
                boxes.push_back({frames, cell_rect(row, col, spec.extent, spec.grid)});
            }
            truth.boxes = std::move(boxes);
        }
        out.truths.push_back(std::move(truth));
    }
    return out;
}

GeneratedScenario generate_drift(const ScenarioSpec& spec) {
    for (std::size_t i = 0; i < spec.planted.size(); ++i) {
        const auto& path = spec.planted[i].spatial_path;
        if (!path) continue;  // whole-frame paths degenerate to a temporal scenario
        const bool drifts =
            std::adjacent_find(path->begin(), path->end(),
                               [](const auto& a, const auto& b) { return a != b; }) != path->end();
        if (!drifts)
            throw std::invalid_argument("scenario: planted[" + std::to_string(i) +
                                        "].spatial_path never changes cell");
    }
    return generate(spec);
}

GraphConfig scenario_graph_config(const ScenarioSpec& spec, NodeStructure structure,
                                  Linking linking) {
    GraphConfig config;
    config.structure = structure;
    config.slab_frames = spec.slab_frames;
    config.grid = spec.grid;
    config.linking = linking;
    config.jump_reach = spec.jump_reach;
    return config;
}

ScenarioSpec scenario_preset(const std::string& name) {
    if (name == "fig5") {
        // Four single-frame slabs weighing [4, 2, -6, 5]: the canonical
        // example where a reach-2 jump beats the contiguous search 11 to 6.
        ScenarioSpec spec;
        spec.name = "fig5";
        spec.extent = {4, 32, 32};
        spec.vocab_size = 2;
        spec.slab_frames = 1;
        spec.grid = {1, 1};
        spec.jump_reach = 2;
        spec.planted = {
            {{0, 1}, std::nullopt, 4.0, {0}},
            {{1, 2}, std::nullopt, 2.0, {0}},
            {{3, 4}, std::nullopt, 5.0, {0}},
        };
        spec.noise_words = {1};
        spec.occlusions = {{{2, 3}, {1}, 6.0}};
        spec.seed = 20;
        return spec;
    }
    if (name == "fig7-occlusion") {
        // One activity spanning slabs 1..6 with its middle three slabs
        // buried under distractors: slab weights
        // [-5, 15, 15, -10, -10, -10, 15, -5].
        ScenarioSpec spec;
        spec.name = "fig7-occlusion";
        spec.extent = {40, 64, 48};
        spec.vocab_size = 2;
        spec.slab_frames = 5;
        spec.grid = {1, 1};
        spec.jump_reach = 2;
        spec.planted = {{{5, 35}, std::nullopt, 3.0, {0}}};
        spec.noise_words = {1};
        spec.occlusions = {
            {{0, 5}, {1}, 1.0},
            {{15, 30}, {1}, 5.0},
            {{35, 40}, {1}, 1.0},
        };
        spec.seed = 21;
        return spec;
    }
    if (name == "fig8-drift") {
        // An actor walking the grid diagonal: cuboid searches must either
        // leave cells behind or absorb the negative background.
        ScenarioSpec spec;
        spec.name = "fig8-drift";
        spec.extent = {30, 90, 90};
        spec.vocab_size = 2;
        spec.slab_frames = 10;
        spec.grid = {3, 3};
        spec.jump_reach = 2;
        PlantedActivity walk;
        walk.frames = {0, 30};
        walk.spatial_path = std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}};
        walk.signal_rate = 4.0;
        walk.signal_words = {0};
        spec.planted = {walk};
        // Dense enough that every background cell stays strictly negative;
        // zero-weight cells would get absorbed into ties and bloat the
        // detection's bounding boxes.
        spec.noise_rate = 4.0;
        spec.noise_words = {1};
        spec.seed = 22;
        return spec;
    }
    if (name == "thumos-multi") {
        // Two disjoint instances of different strength over a uniformly
        // noisy background: slab weights -20 except +10 in slabs 3-5 and
        // +20 in slabs 12-15, so no bridged window can tie either instance.
        ScenarioSpec spec;
        spec.name = "thumos-multi";
        spec.extent = {200, 64, 48};
        spec.vocab_size = 2;
        spec.slab_frames = 10;
        spec.grid = {1, 1};
        spec.jump_reach = 2;
        spec.planted = {
            {{30, 60}, std::nullopt, 3.0, {0}},
            {{120, 160}, std::nullopt, 4.0, {0}},
        };
        spec.noise_rate = 2.0;
        spec.noise_words = {1};
        spec.seed = 23;
        return spec;
    }
    throw std::invalid_argument("unknown scenario preset: " + name);
}

std::vector<std::string> scenario_preset_names() {
    return {"fig5", "fig7-occlusion", "fig8-drift", "thumos-multi"};
}

}  // namespace actdet
