#pragma once

#include <optional>
#include <vector>

#include "actdet/graph.hpp"

namespace actdet {

/// Inclusive cell-rectangle in the spatial grid.
struct CellRect {
    int r0 = 0;
    int c0 = 0;
    int r1 = 0;
    int c1 = 0;

    bool operator==(const CellRect&) const = default;
};

/// A cuboid candidate: a half-open slab range and, for spatio-temporal
/// searches, the cell rectangle it covers. No rectangle means whole-frame.
struct WindowCandidate {
    int slab_start = 0;
    int slab_end = 0;
    std::optional<CellRect> cells;
    double score = 0.0;
};

enum class WindowRanking { RawScore, NormalizedScore };

struct BaselineOptions {
    /// Candidates overlapping a kept one by more than this IoU are dropped.
    double nms_threshold = 0.5;
    /// Cap on returned candidates after suppression; 0 keeps everything.
    int max_results = 10;
    WindowRanking ranking = WindowRanking::RawScore;
};

struct SlidingResult {
    std::vector<WindowCandidate> candidates;  // ranked best first
    std::vector<int> skipped_durations;       // requested durations longer than the sequence
};

/// Temporal sliding window over slab nodes. `durations` is a set of window
/// lengths in slabs; an unset optional means the exhaustive pool of all
/// O(N^2) slab ranges. Scores come from prefix sums; the reported score of
/// each returned candidate is recomputed as a plain left-to-right sum.
SlidingResult t_sliding(const SpaceTimeGraph& graph, int step,
                        const std::optional<std::vector<int>>& durations,
                        const BaselineOptions& options = {});

/// Every spatial sub-rectangle of the cell grid crossed with every slab
/// range, scored through a 3D integral image.
SlidingResult st_cube_sliding(const SpaceTimeGraph& graph, const BaselineOptions& options = {});

/// Globally best axis-aligned cuboid at node granularity. Searches the same
/// candidate space as st_cube_sliding but through a per-rectangle
/// maximum-subarray scan, so the two act as cross-checks on each other.
WindowCandidate st_cube_subvolume(const SpaceTimeGraph& graph);

/// Best whole-frame window (all cells of every slab in the range), the
/// narrowest search scope any method covers.
WindowCandidate best_whole_frame_window(const SpaceTimeGraph& graph);

/// Standard duration ladder of {10, 20, ..., 100, 150} frames converted to
/// slab counts for the given slab size (deduplicated, zero-length dropped).
std::vector<int> thumos_duration_slabs(int slab_frames);

/// Node ids covered by a window candidate on the given graph.
std::vector<int> window_node_ids(const SpaceTimeGraph& graph, const WindowCandidate& window);

}  // namespace actdet
