#include "actdet/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace actdet {

int SpaceTimeGraph::num_slabs() const {
    return (extent.num_frames + config.slab_frames - 1) / config.slab_frames;
}

const SpaceTimeNode& SpaceTimeGraph::node(int id) const {
    if (id < 0 || id >= static_cast<int>(nodes.size()))
        throw std::invalid_argument("unknown node id " + std::to_string(id));
    return nodes[static_cast<std::size_t>(id)];
}

int SpaceTimeGraph::node_id(int slab, int row, int col) const {
    return slab * cells_per_slab() + row * config.grid.cols + col;
}

std::vector<double> SpaceTimeGraph::node_weights() const {
    std::vector<double> w(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = nodes[i].weight;
    return w;
}

std::vector<std::vector<int>> SpaceTimeGraph::adjacency() const {
    std::vector<std::vector<int>> adj(nodes.size());
    for (const auto& [u, v] : edges) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    return adj;
}

double SpaceTimeGraph::total_weight() const {
    double total = 0.0;
    for (const auto& n : nodes) total += n.weight;
    return total;
}

void validate(const GraphConfig& config) {
    if (config.slab_frames < 1)
        throw std::invalid_argument("graph config: slab_frames must be >= 1");
    if (config.structure == NodeStructure::SpatioTemporalCube &&
        (config.grid.rows < 1 || config.grid.cols < 1))
        throw std::invalid_argument("graph config: spatial grid dimensions must be >= 1");
    if (config.linking == Linking::TemporalJump) {
        if (config.jump_reach < 1)
            throw std::invalid_argument("graph config: jump_reach must be >= 1");
        if (config.structure == NodeStructure::SpatioTemporalCube)
            throw std::invalid_argument(
                "graph config: temporal jump linking is defined for temporal slab nodes only");
    }
}

namespace {

int grid_index(int coord, int span, int cells) {
    // Even split; the last cell absorbs the remainder pixels.
    const int cell_span = span / cells;
    return std::min(coord / cell_span, cells - 1);
}

}  // namespace

PixelRect cell_rect(int row, int col, const VideoExtent& extent, const GridShape& grid) {
    const int cell_w = extent.width / grid.cols;
    const int cell_h = extent.height / grid.rows;
    PixelRect r;
    r.x0 = col * cell_w;
    r.x1 = (col == grid.cols - 1) ? extent.width : (col + 1) * cell_w;
    r.y0 = row * cell_h;
    r.y1 = (row == grid.rows - 1) ? extent.height : (row + 1) * cell_h;
    return r;
}

int assign_feature(const QuantizedFeature& feature, const VideoExtent& extent,
                   const GraphConfig& config) {
    const int slab = feature.t / config.slab_frames;
    if (config.structure == NodeStructure::TemporalSlab) return slab;
    const int col = grid_index(feature.x, extent.width, config.grid.cols);
    const int row = grid_index(feature.y, extent.height, config.grid.rows);
    return slab * config.grid.cells() + row * config.grid.cols + col;
}

SpaceTimeGraph build_graph(const std::vector<QuantizedFeature>& features, const WordModel& model,
                           const VideoExtent& extent, const GraphConfig& config) {
    validate(extent);
    validate(config);
    const bool spatial = config.structure == NodeStructure::SpatioTemporalCube;
    if (spatial && (extent.width < config.grid.cols || extent.height < config.grid.rows))
        throw std::invalid_argument("graph config: spatial grid is finer than the frame");

    SpaceTimeGraph graph;
    graph.config = config;
    graph.extent = extent;

    const int num_slabs = (extent.num_frames + config.slab_frames - 1) / config.slab_frames;
    const int rows = spatial ? config.grid.rows : 1;
    const int cols = spatial ? config.grid.cols : 1;
    const int cells = rows * cols;

    graph.nodes.reserve(static_cast<std::size_t>(num_slabs) * cells);
    for (int slab = 0; slab < num_slabs; ++slab) {
        // A trailing partial slab becomes a shorter node, never a dropped one.
        FrameInterval frames{slab * config.slab_frames,
                             std::min((slab + 1) * config.slab_frames, extent.num_frames)};
        for (int row = 0; row < rows; ++row) {
            for (int col = 0; col < cols; ++col) {
                SpaceTimeNode node;
                node.id = static_cast<int>(graph.nodes.size());
                node.slab = slab;
                node.row = row;
                node.col = col;
                node.frames = frames;
                node.rect = spatial ? cell_rect(row, col, extent, config.grid)
                                    : PixelRect{0, 0, extent.width, extent.height};
                graph.nodes.push_back(node);
            }
        }
    }

    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto& f = features[i];
        if (f.t < 0 || f.t >= extent.num_frames || f.x < 0 || f.x >= extent.width || f.y < 0 ||
            f.y >= extent.height)
            throw std::invalid_argument(
                "feature " + std::to_string(i) + " at (t=" + std::to_string(f.t) +
                ", x=" + std::to_string(f.x) + ", y=" + std::to_string(f.y) +
                ") lies outside the video extent");
        if (f.word < 0 || f.word >= model.vocab_size())
            throw std::out_of_range("feature " + std::to_string(i) + " has word index " +
                                    std::to_string(f.word) + ", model vocabulary is " +
                                    std::to_string(model.vocab_size()));
        auto& node = graph.nodes[static_cast<std::size_t>(assign_feature(f, extent, config))];
        node.weight += model.weights[static_cast<std::size_t>(f.word)];
        node.feature_count += 1;
    }

    auto add_edge = [&graph](int u, int v) { graph.edges.emplace_back(u, v); };
    if (!spatial) {
        const int reach = config.linking == Linking::TemporalJump ? config.jump_reach : 1;
        for (int u = 0; u < num_slabs; ++u)
            for (int v = u + 1; v < num_slabs && v - u <= reach; ++v) add_edge(u, v);
    } else {
        // 6-connectivity: one step along exactly one of row, col, slab.
        auto id_of = [cols, cells](int slab, int row, int col) {
            return slab * cells + row * cols + col;
        };
        for (int slab = 0; slab < num_slabs; ++slab) {
            for (int row = 0; row < rows; ++row) {
                for (int col = 0; col < cols; ++col) {
                    const int u = id_of(slab, row, col);
                    if (col + 1 < cols) add_edge(u, id_of(slab, row, col + 1));
                    if (row + 1 < rows) add_edge(u, id_of(slab, row + 1, col));
                    if (slab + 1 < num_slabs) add_edge(u, id_of(slab + 1, row, col));
                }
            }
        }
    }
    std::sort(graph.edges.begin(), graph.edges.end());
    return graph;
}

SpaceTimeGraph reweight_nodes(const SpaceTimeGraph& graph, const std::vector<int>& node_ids,
                              double new_weight) {
    SpaceTimeGraph out = graph;
    for (int id : node_ids) {
        if (id < 0 || id >= static_cast<int>(out.nodes.size()))
            throw std::invalid_argument("reweight_nodes: unknown node id " + std::to_string(id));
        out.nodes[static_cast<std::size_t>(id)].weight = new_weight;
    }
    return out;
}

}  // namespace actdet
