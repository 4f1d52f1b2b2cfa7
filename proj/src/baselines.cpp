#include "actdet/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace actdet {

namespace {

struct RawCandidate {
    int slab_start = 0;
    int slab_end = 0;
    CellRect cells;       // meaningful only when spatial
    bool spatial = false;
    double search_score = 0.0;  // accelerator score used for ranking
};

FrameInterval slab_frames(const SpaceTimeGraph& graph, int slab_start, int slab_end) {
    const int f = graph.config.slab_frames;
    return {slab_start * f, std::min(slab_end * f, graph.extent.num_frames)};
}

PixelRect cells_pixels(const SpaceTimeGraph& graph, const CellRect& cells) {
    const PixelRect a = cell_rect(cells.r0, cells.c0, graph.extent, graph.config.grid);
    const PixelRect b = cell_rect(cells.r1, cells.c1, graph.extent, graph.config.grid);
    return {a.x0, a.y0, b.x1, b.y1};
}

// Voxel IoU between two cuboid candidates, in frames x pixels.
double candidate_iou(const SpaceTimeGraph& graph, const RawCandidate& a, const RawCandidate& b) {
    const FrameInterval fa = slab_frames(graph, a.slab_start, a.slab_end);
    const FrameInterval fb = slab_frames(graph, b.slab_start, b.slab_end);
    const int f_inter = std::max(0, std::min(fa.end, fb.end) - std::max(fa.start, fb.start));
    const PixelRect ra = a.spatial ? cells_pixels(graph, a.cells)
                                   : PixelRect{0, 0, graph.extent.width, graph.extent.height};
    const PixelRect rb = b.spatial ? cells_pixels(graph, b.cells)
                                   : PixelRect{0, 0, graph.extent.width, graph.extent.height};
    const long long area_inter = intersect(ra, rb).area();
    const double inter = static_cast<double>(f_inter) * static_cast<double>(area_inter);
    const double vol_a = static_cast<double>(fa.length()) * static_cast<double>(ra.area());
    const double vol_b = static_cast<double>(fb.length()) * static_cast<double>(rb.area());
    const double uni = vol_a + vol_b - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

auto order_key(const RawCandidate& c) {
    return std::make_tuple(c.slab_start, c.slab_end, c.cells.r0, c.cells.c0, c.cells.r1,
                           c.cells.c1);
}

// Plain ascending-id sum over the covered nodes; reported scores always come
// from here rather than from the search accelerator.
double canonical_window_score(const SpaceTimeGraph& graph, const RawCandidate& c) {
    double s = 0.0;
    const int cols = graph.config.grid.cols;
    const int cells = graph.cells_per_slab();
    if (!c.spatial) {
        for (int slab = c.slab_start; slab < c.slab_end; ++slab)
            for (int k = 0; k < cells; ++k)
                s += graph.nodes[static_cast<std::size_t>(slab * cells + k)].weight;
        return s;
    }
    for (int slab = c.slab_start; slab < c.slab_end; ++slab)
        for (int r = c.cells.r0; r <= c.cells.r1; ++r)
            for (int cc = c.cells.c0; cc <= c.cells.c1; ++cc)
                s += graph.nodes[static_cast<std::size_t>(slab * cells + r * cols + cc)].weight;
    return s;
}

WindowCandidate finalize(const SpaceTimeGraph& graph, const RawCandidate& c,
                         bool keep_search_score) {
    WindowCandidate out;
    out.slab_start = c.slab_start;
    out.slab_end = c.slab_end;
    if (c.spatial) out.cells = c.cells;
    out.score = keep_search_score ? c.search_score : canonical_window_score(graph, c);
    return out;
}

// Rank, suppress, cap, and rescore. Ties in the ranking score are resolved
// by candidate position so results are deterministic.
std::vector<WindowCandidate> rank_and_suppress(const SpaceTimeGraph& graph,
                                               std::vector<RawCandidate>& raw,
                                               const BaselineOptions& options,
                                               bool keep_search_score) {
    std::sort(raw.begin(), raw.end(), [](const RawCandidate& a, const RawCandidate& b) {
        if (a.search_score != b.search_score) return a.search_score > b.search_score;
        return order_key(a) < order_key(b);
    });
    std::vector<RawCandidate> kept;
    for (const auto& c : raw) {
        if (options.max_results > 0 && static_cast<int>(kept.size()) >= options.max_results)
            break;
        bool suppressed = false;
        for (const auto& k : kept)
            if (candidate_iou(graph, c, k) > options.nms_threshold) {
                suppressed = true;
                break;
            }
        if (!suppressed) kept.push_back(c);
    }
    std::vector<WindowCandidate> out;
    out.reserve(kept.size());
    for (const auto& c : kept) out.push_back(finalize(graph, c, keep_search_score));
    return out;
}

}  // namespace

SlidingResult t_sliding(const SpaceTimeGraph& graph, int step,
                        const std::optional<std::vector<int>>& durations,
                        const BaselineOptions& options) {
    if (graph.config.structure != NodeStructure::TemporalSlab)
        throw std::invalid_argument("t_sliding requires a temporal slab graph");
    if (step < 1) throw std::invalid_argument("t_sliding: step must be >= 1");
    if (graph.nodes.empty()) throw std::invalid_argument("t_sliding: graph has no nodes");

    const int n = static_cast<int>(graph.nodes.size());
    std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<long long> count_prefix(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 0; i < n; ++i) {
        prefix[static_cast<std::size_t>(i) + 1] =
            prefix[static_cast<std::size_t>(i)] + graph.nodes[static_cast<std::size_t>(i)].weight;
        count_prefix[static_cast<std::size_t>(i) + 1] =
            count_prefix[static_cast<std::size_t>(i)] +
            graph.nodes[static_cast<std::size_t>(i)].feature_count;
    }

    const bool normalized = options.ranking == WindowRanking::NormalizedScore;
    auto window_score = [&](int s, int e) {
        const double raw = prefix[static_cast<std::size_t>(e)] - prefix[static_cast<std::size_t>(s)];
        if (!normalized) return raw;
        const long long feats =
            count_prefix[static_cast<std::size_t>(e)] - count_prefix[static_cast<std::size_t>(s)];
        if (feats == 0) return 0.0;
        return raw / static_cast<double>(feats) *
               static_cast<double>(slab_frames(graph, s, e).length());
    };

    SlidingResult result;
    std::vector<RawCandidate> raw;
    if (!durations) {
        raw.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
        for (int s = 0; s < n; ++s)
            for (int e = s + 1; e <= n; ++e)
                raw.push_back({s, e, {}, false, window_score(s, e)});
    } else {
        for (int d : *durations) {
            if (d < 1) throw std::invalid_argument("t_sliding: window duration must be >= 1 slab");
            if (d > n) {
                result.skipped_durations.push_back(d);
                continue;
            }
            for (int s = 0; s + d <= n; s += step) raw.push_back({s, s + d, {}, false,
                                                                  window_score(s, s + d)});
        }
    }

    result.candidates = rank_and_suppress(graph, raw, options, normalized);
    return result;
}

namespace {

// prefix[s][r][c] = sum of node weights over slabs < s, rows < r, cols < c.
struct CubePrefix {
    int slabs = 0, rows = 0, cols = 0;
    std::vector<double> data;

    double& at(int s, int r, int c) {
        return data[(static_cast<std::size_t>(s) * (rows + 1) + r) * (cols + 1) + c];
    }
    double box(int s0, int s1, int r0, int r1, int c0, int c1) {
        // Half-open in all three axes.
        double total = 0.0;
        total += at(s1, r1, c1) - at(s0, r1, c1);
        total -= at(s1, r0, c1) - at(s0, r0, c1);
        total -= at(s1, r1, c0) - at(s0, r1, c0);
        total += at(s1, r0, c0) - at(s0, r0, c0);
        return total;
    }
};

CubePrefix build_cube_prefix(const SpaceTimeGraph& graph) {
    CubePrefix p;
    p.slabs = graph.num_slabs();
    p.rows = graph.config.grid.rows;
    p.cols = graph.config.grid.cols;
    p.data.assign(static_cast<std::size_t>(p.slabs + 1) * (p.rows + 1) * (p.cols + 1), 0.0);
    for (int s = 0; s < p.slabs; ++s)
        for (int r = 0; r < p.rows; ++r)
            for (int c = 0; c < p.cols; ++c) {
                const double w =
                    graph.nodes[static_cast<std::size_t>((s * p.rows + r) * p.cols + c)].weight;
                p.at(s + 1, r + 1, c + 1) = w + p.at(s, r + 1, c + 1) + p.at(s + 1, r, c + 1) +
                                            p.at(s + 1, r + 1, c) - p.at(s, r, c + 1) -
                                            p.at(s, r + 1, c) - p.at(s + 1, r, c) + p.at(s, r, c);
            }
    return p;
}

void require_cube_graph(const SpaceTimeGraph& graph, const char* op) {
    if (graph.config.structure != NodeStructure::SpatioTemporalCube)
        throw std::invalid_argument(std::string(op) + " requires a spatio-temporal cube graph");
    if (graph.nodes.empty()) throw std::invalid_argument(std::string(op) + ": graph has no nodes");
}

}  // namespace

SlidingResult st_cube_sliding(const SpaceTimeGraph& graph, const BaselineOptions& options) {
    require_cube_graph(graph, "st_cube_sliding");
    CubePrefix prefix = build_cube_prefix(graph);

    std::vector<RawCandidate> raw;
    for (int s0 = 0; s0 < prefix.slabs; ++s0)
        for (int s1 = s0 + 1; s1 <= prefix.slabs; ++s1)
            for (int r0 = 0; r0 < prefix.rows; ++r0)
                for (int r1 = r0; r1 < prefix.rows; ++r1)
                    for (int c0 = 0; c0 < prefix.cols; ++c0)
                        for (int c1 = c0; c1 < prefix.cols; ++c1)
                            raw.push_back({s0, s1, CellRect{r0, c0, r1, c1}, true,
                                           prefix.box(s0, s1, r0, r1 + 1, c0, c1 + 1)});

    SlidingResult result;
    result.candidates = rank_and_suppress(graph, raw, options, false);
    return result;
}

WindowCandidate st_cube_subvolume(const SpaceTimeGraph& graph) {
    require_cube_graph(graph, "st_cube_subvolume");
    CubePrefix prefix = build_cube_prefix(graph);

    // For each spatial rectangle, collapse the slab axis and run the
    // maximum-subarray recurrence over it. Same candidate space as the
    // sliding enumeration, reached by a different route.
    bool have = false;
    RawCandidate best;
    for (int r0 = 0; r0 < prefix.rows; ++r0)
        for (int r1 = r0; r1 < prefix.rows; ++r1)
            for (int c0 = 0; c0 < prefix.cols; ++c0)
                for (int c1 = c0; c1 < prefix.cols; ++c1) {
                    double run = 0.0;
                    int run_start = 0;
                    double rect_best = 0.0;
                    int rect_s0 = 0, rect_s1 = 0;
                    bool rect_have = false;
                    for (int s = 0; s < prefix.slabs; ++s) {
                        const double w = prefix.box(s, s + 1, r0, r1 + 1, c0, c1 + 1);
                        if (s == 0 || run < 0.0) {
                            run = w;
                            run_start = s;
                        } else {
                            run += w;
                        }
                        if (!rect_have || run > rect_best ||
                            (run == rect_best && run_start < rect_s0)) {
                            rect_best = run;
                            rect_s0 = run_start;
                            rect_s1 = s + 1;
                            rect_have = true;
                        }
                    }
                    RawCandidate cand{rect_s0, rect_s1, CellRect{r0, c0, r1, c1}, true, rect_best};
                    if (!have || cand.search_score > best.search_score ||
                        (cand.search_score == best.search_score &&
                         order_key(cand) < order_key(best))) {
                        best = cand;
                        have = true;
                    }
                }
    return finalize(graph, best, false);
}

WindowCandidate best_whole_frame_window(const SpaceTimeGraph& graph) {
    if (graph.nodes.empty())
        throw std::invalid_argument("best_whole_frame_window: graph has no nodes");
    const int slabs = graph.num_slabs();
    const int cells = graph.cells_per_slab();
    std::vector<double> collapsed(static_cast<std::size_t>(slabs), 0.0);
    for (int s = 0; s < slabs; ++s)
        for (int k = 0; k < cells; ++k)
            collapsed[static_cast<std::size_t>(s)] +=
                graph.nodes[static_cast<std::size_t>(s * cells + k)].weight;

    double run = 0.0, best = 0.0;
    int run_start = 0, best_s0 = 0, best_s1 = 1;
    bool have = false;
    for (int s = 0; s < slabs; ++s) {
        if (s == 0 || run < 0.0) {
            run = collapsed[static_cast<std::size_t>(s)];
            run_start = s;
        } else {
            run += collapsed[static_cast<std::size_t>(s)];
        }
        if (!have || run > best || (run == best && run_start < best_s0)) {
            best = run;
            best_s0 = run_start;
            best_s1 = s + 1;
            have = true;
        }
    }
    RawCandidate c{best_s0, best_s1, {}, false, best};
    return finalize(graph, c, false);
}

std::vector<int> thumos_duration_slabs(int slab_frames) {
    if (slab_frames < 1) throw std::invalid_argument("thumos_duration_slabs: slab_frames >= 1");
    std::vector<int> out;
    for (int frames : {10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 150}) {
        const int slabs = (frames + slab_frames - 1) / slab_frames;
        if (out.empty() || out.back() != slabs) out.push_back(slabs);
    }
    return out;
}

std::vector<int> window_node_ids(const SpaceTimeGraph& graph, const WindowCandidate& window) {
    std::vector<int> ids;
    const int cells = graph.cells_per_slab();
    const int cols = graph.config.grid.cols;
    for (int s = window.slab_start; s < window.slab_end; ++s) {
        if (!window.cells) {
            for (int k = 0; k < cells; ++k) ids.push_back(s * cells + k);
        } else {
            for (int r = window.cells->r0; r <= window.cells->r1; ++r)
                for (int c = window.cells->c0; c <= window.cells->c1; ++c)
                    ids.push_back(s * cells + r * cols + c);
        }
    }
    return ids;
}

}  // namespace actdet
