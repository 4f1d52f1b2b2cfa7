#pragma once

#include <string>
#include <utility>
#include <vector>

#include "actdet/scoring.hpp"

namespace actdet {

enum class NodeStructure { TemporalSlab, SpatioTemporalCube };
enum class Linking { Adjacent, TemporalJump };

struct GridShape {
    int rows = 3;
    int cols = 3;

    int cells() const { return rows * cols; }
    bool operator==(const GridShape&) const = default;
};

struct GraphConfig {
    NodeStructure structure = NodeStructure::TemporalSlab;
    int slab_frames = 10;
    GridShape grid;    // SpatioTemporalCube only
    Linking linking = Linking::Adjacent;
    int jump_reach = 2;  // TemporalJump only; 1 reproduces Adjacent

    bool operator==(const GraphConfig&) const = default;
};

/// One space-time cell. Node ids are dense: slab index for temporal slabs,
/// slab * (rows*cols) + row * cols + col for the cube structure.
struct SpaceTimeNode {
    int id = 0;
    int slab = 0;
    int row = 0;
    int col = 0;
    double weight = 0.0;
    int feature_count = 0;
    FrameInterval frames;
    PixelRect rect;
};

/// Weighted undirected space-time graph. Immutable once built; edges are
/// stored once as (u, v) with u < v, sorted, without duplicates.
struct SpaceTimeGraph {
    std::vector<SpaceTimeNode> nodes;
    std::vector<std::pair<int, int>> edges;
    GraphConfig config;
    VideoExtent extent;

    int num_slabs() const;
    int cells_per_slab() const {
        return config.structure == NodeStructure::SpatioTemporalCube ? config.grid.cells() : 1;
    }
    bool whole_frame_nodes() const { return config.structure == NodeStructure::TemporalSlab; }
    const SpaceTimeNode& node(int id) const;
    int node_id(int slab, int row, int col) const;

    std::vector<double> node_weights() const;
    std::vector<std::vector<int>> adjacency() const;
    double total_weight() const;
};

void validate(const GraphConfig& config);

/// Deterministic feature-to-node assignment: slab = t / F, spatial cell by
/// even pixel split with the last row/column absorbing the remainder.
int assign_feature(const QuantizedFeature& feature, const VideoExtent& extent,
                   const GraphConfig& config);

/// Pixel rectangle covered by a grid cell.
PixelRect cell_rect(int row, int col, const VideoExtent& extent, const GridShape& grid);

/// Partition the video into weighted nodes and link them. Every feature is
/// claimed by exactly one node; node weights sum the claimed features' word
/// weights, so total node weight equals the bias-free stream score.
SpaceTimeGraph build_graph(const std::vector<QuantizedFeature>& features, const WordModel& model,
                           const VideoExtent& extent, const GraphConfig& config);

/// Copy of the graph with the listed nodes set to `new_weight`. The input
/// graph is left untouched. Unknown node ids are rejected.
SpaceTimeGraph reweight_nodes(const SpaceTimeGraph& graph, const std::vector<int>& node_ids,
                              double new_weight);

}  // namespace actdet
