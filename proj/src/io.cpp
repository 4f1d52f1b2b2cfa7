#include "actdet/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace actdet::io {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path + " for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// `# key=value` header lines ahead of the records.
struct HeaderInfo {
    std::string video;
    std::optional<VideoExtent> extent;
};

bool parse_header_line(const std::string& line, HeaderInfo& info) {
    if (line.empty() || line[0] != '#') return false;
    std::istringstream ss(line.substr(1));
    std::string token;
    while (ss >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "video") info.video = value;
        else if (key == "num_frames" || key == "width" || key == "height") {
            if (!info.extent) info.extent = VideoExtent{};
            const int v = std::stoi(value);
            if (key == "num_frames") info.extent->num_frames = v;
            else if (key == "width") info.extent->width = v;
            else info.extent->height = v;
        }
    }
    return true;
}

json parse_json(const std::string& text, const std::string& path) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(path + ": invalid JSON: " + e.what());
    }
}

json require_field(const json& doc, const char* field, const std::string& path) {
    if (!doc.contains(field))
        throw std::invalid_argument(path + ": missing field '" + field + "'");
    return doc.at(field);
}

json boxes_to_json(const std::optional<std::vector<DetectionBox>>& boxes) {
    if (!boxes) return nullptr;
    json arr = json::array();
    for (const auto& b : *boxes)
        arr.push_back({{"frame_start", b.frames.start},
                       {"frame_end", b.frames.end},
                       {"x0", b.rect.x0},
                       {"y0", b.rect.y0},
                       {"x1", b.rect.x1},
                       {"y1", b.rect.y1}});
    return arr;
}

std::optional<std::vector<DetectionBox>> boxes_from_json(const json& j, const std::string& path) {
    if (j.is_null()) return std::nullopt;
    std::vector<DetectionBox> boxes;
    for (const auto& b : j) {
        DetectionBox box;
        box.frames = {require_field(b, "frame_start", path).get<int>(),
                      require_field(b, "frame_end", path).get<int>()};
        box.rect = {require_field(b, "x0", path).get<int>(),
                    require_field(b, "y0", path).get<int>(),
                    require_field(b, "x1", path).get<int>(),
                    require_field(b, "y1", path).get<int>()};
        boxes.push_back(box);
    }
    return boxes;
}

}  // namespace

void write_features(const std::string& path, const std::vector<QuantizedFeature>& features,
                    const VideoExtent& extent, const std::string& video,
                    const std::string& manifest_ref) {
    auto out = open_output(path);
    out << "# manifest=" << manifest_ref << "\n";
    out << "# video=" << video << "\n";
    out << "# num_frames=" << extent.num_frames << " width=" << extent.width
        << " height=" << extent.height << "\n";
    out << "t,x,y,word\n";
    for (const auto& f : features)
        out << f.t << ',' << f.x << ',' << f.y << ',' << f.word << "\n";
    if (!out) throw std::invalid_argument("failed while writing " + path);
}

FeatureFile read_features(const std::string& path) {
    auto in = open_input(path);
    FeatureFile result;
    HeaderInfo header;
    std::string line;
    bool saw_columns = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (parse_header_line(line, header)) continue;
        if (line.empty()) continue;
        if (!saw_columns) {
            if (line != "t,x,y,word")
                throw std::invalid_argument(path + ": expected header 't,x,y,word', got '" +
                                            line + "'");
            saw_columns = true;
            continue;
        }
        QuantizedFeature f;
        int fields[4];
        std::size_t pos = 0;
        for (int k = 0; k < 4; ++k) {
            std::size_t next = line.find(',', pos);
            if (k < 3 && next == std::string::npos)
                throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                            ": expected 4 comma-separated integers");
            const std::string cell = line.substr(pos, next - pos);
            try {
                fields[k] = std::stoi(cell);
            } catch (const std::exception&) {
                throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                            ": bad integer '" + cell + "'");
            }
            pos = next == std::string::npos ? line.size() : next + 1;
        }
        f.t = fields[0];
        f.x = fields[1];
        f.y = fields[2];
        f.word = fields[3];
        result.features.push_back(f);
    }
    result.video = header.video;
    result.extent = header.extent;
    return result;
}

void write_model(const std::string& path, const WordModel& model,
                 const std::string& manifest_ref) {
    json doc;
    doc["manifest"] = manifest_ref;
    doc["vocab_size"] = model.vocab_size();
    doc["bias"] = model.bias;
    doc["weights"] = model.weights;
    auto out = open_output(path);
    out << doc.dump(2) << "\n";
}

WordModel read_model(const std::string& path) {
    auto in = open_input(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const json doc = parse_json(buffer.str(), path);
    WordModel model;
    const int vocab = require_field(doc, "vocab_size", path).get<int>();
    model.bias = require_field(doc, "bias", path).get<double>();
    model.weights = require_field(doc, "weights", path).get<std::vector<double>>();
    if (static_cast<int>(model.weights.size()) != vocab)
        throw std::invalid_argument(path + ": field 'weights' has " +
                                    std::to_string(model.weights.size()) +
                                    " entries, 'vocab_size' says " + std::to_string(vocab));
    return model;
}

void write_truths(const std::string& path, const std::vector<GroundTruthInstance>& truths,
                  const std::string& video, const std::string& manifest_ref) {
    auto out = open_output(path);
    out << "# manifest=" << manifest_ref << "\n";
    out << "# video=" << video << "\n";
    for (const auto& t : truths) {
        json rec;
        rec["label"] = t.label;
        rec["frame_start"] = t.frames.start;
        rec["frame_end"] = t.frames.end;
        rec["boxes"] = boxes_to_json(t.boxes);
        out << rec.dump() << "\n";
    }
}

TruthFile read_truths(const std::string& path) {
    auto in = open_input(path);
    TruthFile result;
    HeaderInfo header;
    std::string line;
    while (std::getline(in, line)) {
        if (parse_header_line(line, header)) continue;
        if (line.empty()) continue;
        const json rec = parse_json(line, path);
        GroundTruthInstance t;
        t.label = require_field(rec, "label", path).get<std::string>();
        t.frames = {require_field(rec, "frame_start", path).get<int>(),
                    require_field(rec, "frame_end", path).get<int>()};
        t.boxes = boxes_from_json(require_field(rec, "boxes", path), path);
        result.truths.push_back(std::move(t));
    }
    result.video = header.video;
    return result;
}

void write_detections(const std::string& path, const std::vector<Detection>& detections,
                      const std::string& video, const std::string& manifest_ref) {
    auto out = open_output(path);
    out << "# manifest=" << manifest_ref << "\n";
    out << "# video=" << video << "\n";
    for (const auto& d : detections) {
        json rec;
        rec["method"] = d.method;
        rec["rank"] = d.rank;
        rec["score"] = d.score;
        rec["frame_start"] = d.frames.start;
        rec["frame_end"] = d.frames.end;
        rec["boxes"] = boxes_to_json(d.boxes);
        rec["node_ids"] = d.node_ids;
        out << rec.dump() << "\n";
    }
}

DetectionFile read_detections(const std::string& path) {
    auto in = open_input(path);
    DetectionFile result;
    HeaderInfo header;
    std::string line;
    while (std::getline(in, line)) {
        if (parse_header_line(line, header)) continue;
        if (line.empty()) continue;
        const json rec = parse_json(line, path);
        Detection d;
        d.method = require_field(rec, "method", path).get<std::string>();
        d.rank = require_field(rec, "rank", path).get<int>();
        d.score = require_field(rec, "score", path).get<double>();
        d.frames = {require_field(rec, "frame_start", path).get<int>(),
                    require_field(rec, "frame_end", path).get<int>()};
        d.boxes = boxes_from_json(require_field(rec, "boxes", path), path);
        d.node_ids = require_field(rec, "node_ids", path).get<std::vector<int>>();
        result.detections.push_back(std::move(d));
    }
    result.video = header.video;
    return result;
}

void write_graph(const std::string& path, const SpaceTimeGraph& graph,
                 const std::string& manifest_ref) {
    json doc;
    doc["manifest"] = manifest_ref;
    json nodes = json::array();
    const bool whole = graph.whole_frame_nodes();
    for (const auto& n : graph.nodes) {
        json rec;
        rec["id"] = n.id;
        rec["slab"] = n.slab;
        rec["row"] = whole ? json(nullptr) : json(n.row);
        rec["col"] = whole ? json(nullptr) : json(n.col);
        rec["weight"] = n.weight;
        rec["frame_start"] = n.frames.start;
        rec["frame_end"] = n.frames.end;
        nodes.push_back(std::move(rec));
    }
    doc["nodes"] = std::move(nodes);
    json edges = json::array();
    for (const auto& [u, v] : graph.edges) edges.push_back({u, v});
    doc["edges"] = std::move(edges);
    auto out = open_output(path);
    out << doc.dump(2) << "\n";
}

namespace {

json scenario_to_json(const ScenarioSpec& spec) {
    json doc;
    doc["name"] = spec.name;
    doc["label"] = spec.label;
    doc["extent"] = {{"num_frames", spec.extent.num_frames},
                     {"width", spec.extent.width},
                     {"height", spec.extent.height}};
    doc["vocab_size"] = spec.vocab_size;
    doc["slab_frames"] = spec.slab_frames;
    doc["grid"] = {{"rows", spec.grid.rows}, {"cols", spec.grid.cols}};
    doc["jump_reach"] = spec.jump_reach;
    json planted = json::array();
    for (const auto& p : spec.planted) {
        json rec;
        rec["frame_start"] = p.frames.start;
        rec["frame_end"] = p.frames.end;
        if (p.spatial_path) {
            json path = json::array();
            for (const auto& [r, c] : *p.spatial_path) path.push_back({r, c});
            rec["spatial_path"] = std::move(path);
        } else {
            rec["spatial_path"] = nullptr;
        }
        rec["signal_rate"] = p.signal_rate;
        rec["signal_words"] = p.signal_words;
        planted.push_back(std::move(rec));
    }
    doc["planted"] = std::move(planted);
    doc["noise_rate"] = spec.noise_rate;
    doc["noise_words"] = spec.noise_words;
    json occlusions = json::array();
    for (const auto& o : spec.occlusions) {
        json rec;
        rec["frame_start"] = o.frames.start;
        rec["frame_end"] = o.frames.end;
        rec["rate"] = o.rate;
        rec["distractor_words"] = o.distractor_words;
        occlusions.push_back(std::move(rec));
    }
    doc["occlusions"] = std::move(occlusions);
    doc["seed"] = spec.seed;
    return doc;
}

}  // namespace

void write_scenario(const std::string& path, const ScenarioSpec& spec) {
    auto out = open_output(path);
    out << scenario_to_json(spec).dump(2) << "\n";
}

ScenarioSpec read_scenario(const std::string& path) {
    auto in = open_input(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const json doc = parse_json(buffer.str(), path);

    ScenarioSpec spec;
    spec.name = require_field(doc, "name", path).get<std::string>();
    spec.label = doc.value("label", std::string("activity"));
    const json extent = require_field(doc, "extent", path);
    spec.extent = {require_field(extent, "num_frames", path).get<int>(),
                   require_field(extent, "width", path).get<int>(),
                   require_field(extent, "height", path).get<int>()};
    spec.vocab_size = require_field(doc, "vocab_size", path).get<int>();
    spec.slab_frames = doc.value("slab_frames", 10);
    if (doc.contains("grid") && !doc.at("grid").is_null()) {
        spec.grid = {require_field(doc.at("grid"), "rows", path).get<int>(),
                     require_field(doc.at("grid"), "cols", path).get<int>()};
    }
    spec.jump_reach = doc.value("jump_reach", 2);
    for (const auto& rec : require_field(doc, "planted", path)) {
        PlantedActivity p;
        p.frames = {require_field(rec, "frame_start", path).get<int>(),
                    require_field(rec, "frame_end", path).get<int>()};
        const json path_json = require_field(rec, "spatial_path", path);
        if (!path_json.is_null()) {
            std::vector<std::pair<int, int>> cells;
            for (const auto& cell : path_json) {
                if (!cell.is_array() || cell.size() != 2)
                    throw std::invalid_argument(path +
                                                ": field 'spatial_path' wants [row, col] pairs");
                cells.emplace_back(cell[0].get<int>(), cell[1].get<int>());
            }
            p.spatial_path = std::move(cells);
        }
        p.signal_rate = require_field(rec, "signal_rate", path).get<double>();
        p.signal_words = require_field(rec, "signal_words", path).get<std::vector<int>>();
        spec.planted.push_back(std::move(p));
    }
    spec.noise_rate = require_field(doc, "noise_rate", path).get<double>();
    spec.noise_words = require_field(doc, "noise_words", path).get<std::vector<int>>();
    for (const auto& rec : require_field(doc, "occlusions", path)) {
        OcclusionBurst o;
        o.frames = {require_field(rec, "frame_start", path).get<int>(),
                    require_field(rec, "frame_end", path).get<int>()};
        o.rate = require_field(rec, "rate", path).get<double>();
        o.distractor_words = require_field(rec, "distractor_words", path).get<std::vector<int>>();
        spec.occlusions.push_back(std::move(o));
    }
    spec.seed = require_field(doc, "seed", path).get<std::uint64_t>();
    return spec;
}

void write_bench_csv(const std::string& path, const EvalReport& report,
                     const std::string& manifest_ref) {
    auto out = open_output(path);
    out << "# manifest=" << manifest_ref << "\n";
    out << "method,instance,score,overlap,time_ms\n";
    for (const auto& row : report.rows)
        for (double t : row.times_ms)
            out << row.method << ',' << row.instance << ',' << format_double(row.score) << ','
                << format_double(row.overlap) << ',' << format_double(t) << "\n";
}

void write_manifest(const std::string& path, const Manifest& manifest) {
    json doc;
    doc["command"] = manifest.command;
    doc["version"] = manifest.version;
    if (manifest.seed) doc["seed"] = *manifest.seed;
    json inputs = json::object();
    for (const auto& [k, v] : manifest.inputs) inputs[k] = v;
    doc["inputs"] = std::move(inputs);
    json config = json::object();
    for (const auto& [k, v] : manifest.config) config[k] = v;
    doc["config"] = std::move(config);
    doc["outputs"] = manifest.outputs;
    doc["started_at"] = manifest.started_at;
    doc["finished_at"] = manifest.finished_at;
    auto out = open_output(path);
    out << doc.dump(2) << "\n";
}

std::string tool_version() { return "0.1.0"; }

}  // namespace actdet::io
