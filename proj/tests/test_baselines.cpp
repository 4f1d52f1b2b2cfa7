#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "actdet/baselines.hpp"
#include "helpers.hpp"

using namespace actdet;
using namespace actdet::testing;

namespace {

// Independent scorer for cuboid enumeration on tiny grids.
double cuboid_sum(const std::vector<double>& w, int rows, int cols, int s0, int s1, int r0,
                  int r1, int c0, int c1) {
    double total = 0.0;
    for (int s = s0; s < s1; ++s)
        for (int r = r0; r <= r1; ++r)
            for (int c = c0; c <= c1; ++c)
                total += w[static_cast<std::size_t>((s * rows + r) * cols + c)];
    return total;
}

BaselineOptions keep_all() {
    BaselineOptions options;
    options.max_results = 0;
    options.nms_threshold = 1.0;  // nothing suppressed: IoU can never exceed 1
    return options;
}

}  // namespace

TEST_CASE("t_sliding exhaustive enumerates and ranks all slab ranges") {
    const auto graph = slab_graph({1.0, -2.0, 3.0});
    const auto result = t_sliding(graph, 1, std::nullopt, keep_all());
    CHECK(result.candidates.size() == 6);
    const auto& top = result.candidates.front();
    CHECK(top.slab_start == 2);
    CHECK(top.slab_end == 3);
    CHECK(top.score == 3.0);
    CHECK(!top.cells.has_value());
    for (std::size_t i = 1; i < result.candidates.size(); ++i)
        CHECK(result.candidates[i - 1].score >= result.candidates[i].score);
}

TEST_CASE("t_sliding exhaustive top-1 equals the path search") {
    const auto graph = slab_graph({2.0, -1.0, 2.0});
    const auto result = t_sliding(graph, 1, std::nullopt);
    CHECK(result.candidates.front().score == 3.0);
    CHECK(result.candidates.front().slab_start == 0);
    CHECK(result.candidates.front().slab_end == 3);
    CHECK(result.candidates.front().score == solve_path_dp(graph.node_weights()).score);
}

TEST_CASE("t_sliding fixed durations walk the requested offsets") {
    const auto graph = slab_graph({1.0, -2.0, 3.0});
    const auto result = t_sliding(graph, 1, std::vector<int>{2}, keep_all());
    REQUIRE(result.candidates.size() == 2);
    CHECK(result.candidates[0].slab_start == 1);
    CHECK(result.candidates[0].slab_end == 3);
    CHECK(result.candidates[0].score == 1.0);
    CHECK(result.candidates[1].score == -1.0);
    CHECK(result.skipped_durations.empty());
}

TEST_CASE("t_sliding records durations longer than the sequence") {
    const auto graph = slab_graph({1.0, -2.0, 3.0});
    const auto result = t_sliding(graph, 1, std::vector<int>{2, 5}, keep_all());
    CHECK(result.skipped_durations == std::vector<int>{5});
    CHECK(result.candidates.size() == 2);
    CHECK_THROWS_AS(t_sliding(graph, 0, std::nullopt), std::invalid_argument);
    CHECK_THROWS_AS(t_sliding(graph, 1, std::vector<int>{0}), std::invalid_argument);

    const auto cube = cube_graph(2, 2, 2, std::vector<double>(8, 1.0));
    CHECK_THROWS_AS(t_sliding(cube, 1, std::nullopt), std::invalid_argument);
}

TEST_CASE("t_sliding equivalence property against the path recurrence") {
    SplitMix64 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + rng.below_int(30);
        std::vector<double> w;
        for (int i = 0; i < n; ++i) w.push_back(uniform_weight(rng));
        const auto graph = slab_graph(w);
        const auto top = t_sliding(graph, 1, std::nullopt).candidates.front();
        CHECK(top.score == solve_path_dp(w).score);
    }
}

TEST_CASE("suppression drops candidates overlapping a kept one") {
    const auto graph = slab_graph({5.0, 4.0, -1.0, -1.0, -1.0, 3.0});
    BaselineOptions options;
    options.nms_threshold = 0.5;
    options.max_results = 3;
    const auto result = t_sliding(graph, 1, std::nullopt, options);
    REQUIRE(result.candidates.size() == 3);
    CHECK(result.candidates[0].slab_start == 0);
    CHECK(result.candidates[0].slab_end == 2);
    for (std::size_t i = 1; i < result.candidates.size(); ++i) {
        const auto& a = result.candidates[0];
        const auto& b = result.candidates[i];
        const int inter = std::min(a.slab_end, b.slab_end) - std::max(a.slab_start, b.slab_start);
        const int uni = std::max(a.slab_end, b.slab_end) - std::min(a.slab_start, b.slab_start);
        CHECK(static_cast<double>(std::max(inter, 0)) / uni <= 0.5);
    }

    BaselineOptions strict;
    strict.nms_threshold = 0.0;
    strict.max_results = 2;
    const auto disjoint = t_sliding(graph, 1, std::nullopt, strict);
    REQUIRE(disjoint.candidates.size() == 2);
    // With a zero threshold the kept windows cannot overlap at all.
    const auto& a = disjoint.candidates[0];
    const auto& b = disjoint.candidates[1];
    CHECK((a.slab_end <= b.slab_start || b.slab_end <= a.slab_start));
}

TEST_CASE("normalized ranking divides by features and scales by frames") {
    // Two word-0 features in slab 0, nothing elsewhere; weights [3, -1].
    WordModel model;
    model.weights = {3.0, -1.0};
    GraphConfig config;
    config.structure = NodeStructure::TemporalSlab;
    config.slab_frames = 10;
    const std::vector<QuantizedFeature> features{{0, 0, 0, 0}, {5, 1, 1, 0}};
    const auto graph = build_graph(features, model, {30, 32, 32}, config);

    BaselineOptions options = keep_all();
    options.ranking = WindowRanking::NormalizedScore;
    const auto result = t_sliding(graph, 1, std::vector<int>{1}, options);
    REQUIRE(result.candidates.size() == 3);
    // Window [0,1): histogram [2,0] normalizes to score 3, times 10 frames.
    CHECK(result.candidates.front().slab_start == 0);
    CHECK(result.candidates.front().score == 30.0);
    // Empty windows score 0 instead of dividing by zero.
    CHECK(result.candidates[1].score == 0.0);
}

TEST_CASE("st_cube_sliding on a 1x1 grid reduces to exhaustive t_sliding") {
    const std::vector<double> w{1.0, -2.0, 3.0, 1.0};
    const auto cube = cube_graph(4, 1, 1, w);
    const auto slab = slab_graph(w);
    const auto cube_result = st_cube_sliding(cube, keep_all());
    const auto slab_result = t_sliding(slab, 1, std::nullopt, keep_all());
    REQUIRE(cube_result.candidates.size() == slab_result.candidates.size());
    for (std::size_t i = 0; i < cube_result.candidates.size(); ++i) {
        CHECK(cube_result.candidates[i].score == slab_result.candidates[i].score);
        CHECK(cube_result.candidates[i].slab_start == slab_result.candidates[i].slab_start);
        CHECK(cube_result.candidates[i].slab_end == slab_result.candidates[i].slab_end);
    }
}

TEST_CASE("st_cube_sliding worked example on a 2x1 grid over 2 slabs") {
    // Cell-major per slab: slab 0 rows [1, -5], slab 1 rows [2, 1].
    const auto graph = cube_graph(2, 2, 1, {1.0, -5.0, 2.0, 1.0});
    const auto result = st_cube_sliding(graph, keep_all());
    CHECK(result.candidates.size() == 9);
    const auto& top = result.candidates.front();
    CHECK(top.score == 3.0);
    REQUIRE(top.cells.has_value());
    CHECK(top.cells->r0 == 0);
    CHECK(top.cells->r1 == 0);
    CHECK(top.slab_start == 0);
    CHECK(top.slab_end == 2);
    CHECK(st_cube_subvolume(graph).score == 3.0);
}

TEST_CASE("all-negative cube graphs keep the best single cell") {
    const auto graph = cube_graph(2, 2, 2, {-4.0, -1.0, -3.0, -2.0, -5.0, -6.0, -7.0, -8.0});
    const auto top = st_cube_sliding(graph).candidates.front();
    CHECK(top.score == -1.0);
    CHECK(top.slab_end - top.slab_start == 1);
    REQUIRE(top.cells.has_value());
    CHECK(top.cells->r0 == top.cells->r1);
    CHECK(top.cells->c0 == top.cells->c1);
    CHECK(st_cube_subvolume(graph).score == -1.0);
}

TEST_CASE("st_cube searches match independent enumeration on random grids") {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const int slabs = 1 + rng.below_int(3);
        const int rows = 1 + rng.below_int(3);
        const int cols = 1 + rng.below_int(3);
        std::vector<double> w;
        for (int i = 0; i < slabs * rows * cols; ++i) w.push_back(uniform_weight(rng));
        const auto graph = cube_graph(slabs, rows, cols, w);

        double best = 0.0;
        bool have = false;
        for (int s0 = 0; s0 < slabs; ++s0)
            for (int s1 = s0 + 1; s1 <= slabs; ++s1)
                for (int r0 = 0; r0 < rows; ++r0)
                    for (int r1 = r0; r1 < rows; ++r1)
                        for (int c0 = 0; c0 < cols; ++c0)
                            for (int c1 = c0; c1 < cols; ++c1) {
                                const double s =
                                    cuboid_sum(w, rows, cols, s0, s1, r0, r1, c0, c1);
                                if (!have || s > best) {
                                    best = s;
                                    have = true;
                                }
                            }
        CHECK(st_cube_sliding(graph).candidates.front().score == best);
        CHECK(st_cube_subvolume(graph).score == best);
    }
}

TEST_CASE("uniform positive weights select the whole volume") {
    const auto graph = cube_graph(3, 2, 2, std::vector<double>(12, 0.5));
    const auto best = st_cube_subvolume(graph);
    CHECK(best.score == 6.0);
    CHECK(best.slab_start == 0);
    CHECK(best.slab_end == 3);
    REQUIRE(best.cells.has_value());
    CHECK((best.cells->r1 == 1 && best.cells->c1 == 1));
    CHECK(window_node_ids(graph, best).size() == 12);
}

TEST_CASE("single-node graph returns that node") {
    const auto graph = cube_graph(1, 1, 1, {-2.5});
    const auto best = st_cube_subvolume(graph);
    CHECK(best.score == -2.5);
    CHECK(window_node_ids(graph, best) == std::vector<int>{0});
}

TEST_CASE("search-scope dominance on random spatio-temporal instances") {
    SplitMix64 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        const int slabs = 2 + rng.below_int(3);
        std::vector<double> w;
        for (int i = 0; i < slabs * 9; ++i) w.push_back(uniform_weight(rng));
        const auto graph = cube_graph(slabs, 3, 3, w);

        const double exact = solve_exact(graph).score;
        const double cuboid = st_cube_subvolume(graph).score;
        const double whole = best_whole_frame_window(graph).score;
        CHECK(exact >= cuboid);
        CHECK(cuboid >= whole);
    }
}

TEST_CASE("whole-frame window search equals the path search on collapsed weights") {
    SplitMix64 rng(44);
    for (int trial = 0; trial < 50; ++trial) {
        const int slabs = 1 + rng.below_int(6);
        std::vector<double> w;
        for (int i = 0; i < slabs * 4; ++i) w.push_back(uniform_weight(rng));
        const auto graph = cube_graph(slabs, 2, 2, w);
        std::vector<double> collapsed(static_cast<std::size_t>(slabs), 0.0);
        for (int s = 0; s < slabs; ++s)
            for (int k = 0; k < 4; ++k)
                collapsed[static_cast<std::size_t>(s)] += w[static_cast<std::size_t>(s * 4 + k)];
        CHECK(best_whole_frame_window(graph).score ==
              doctest::Approx(solve_path_dp(collapsed).score).epsilon(1e-12));
    }
}

TEST_CASE("duration ladder in slabs") {
    CHECK(thumos_duration_slabs(10) == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15});
    CHECK(thumos_duration_slabs(5) ==
          std::vector<int>{2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 30});
    CHECK(thumos_duration_slabs(100) == std::vector<int>{1, 2});
}
