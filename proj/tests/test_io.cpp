#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "actdet/io.hpp"
#include "helpers.hpp"

using namespace actdet;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("actdet-io-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int n = 0;
        return n;
    }
};

}  // namespace

TEST_CASE("feature files round-trip with their header") {
    TempDir dir;
    const std::vector<QuantizedFeature> features{{0, 1, 2, 0}, {5, 10, 12, 1}, {39, 31, 31, 1}};
    const VideoExtent extent{40, 32, 32};
    io::write_features(dir.file("f.csv"), features, extent, "clip-a", "manifest.json");

    const auto read = io::read_features(dir.file("f.csv"));
    CHECK(read.features == features);
    CHECK(read.video == "clip-a");
    REQUIRE(read.extent.has_value());
    CHECK(*read.extent == extent);

    // The manifest reference is the first line of the file.
    std::ifstream in(dir.file("f.csv"));
    std::string first;
    std::getline(in, first);
    CHECK(first == "# manifest=manifest.json");
}

TEST_CASE("feature files without headers still parse") {
    TempDir dir;
    {
        std::ofstream out(dir.file("bare.csv"));
        out << "t,x,y,word\n1,2,3,0\n";
    }
    const auto read = io::read_features(dir.file("bare.csv"));
    CHECK(read.features == std::vector<QuantizedFeature>{{1, 2, 3, 0}});
    CHECK(!read.extent.has_value());
}

TEST_CASE("malformed feature files name the problem") {
    TempDir dir;
    {
        std::ofstream out(dir.file("bad.csv"));
        out << "t,x,word\n";
    }
    CHECK_THROWS_WITH_AS(io::read_features(dir.file("bad.csv")),
                         doctest::Contains("t,x,y,word"), std::invalid_argument);
    {
        std::ofstream out(dir.file("bad2.csv"));
        out << "t,x,y,word\n1,2,zzz,0\n";
    }
    CHECK_THROWS_AS(io::read_features(dir.file("bad2.csv")), std::invalid_argument);
    CHECK_THROWS_AS(io::read_features(dir.file("absent.csv")), std::invalid_argument);
}

TEST_CASE("model files round-trip and validate vocab_size") {
    TempDir dir;
    WordModel model;
    model.weights = {1.5, -0.25, 0.0};
    model.bias = 2.5;
    io::write_model(dir.file("m.json"), model, "manifest.json");
    const auto read = io::read_model(dir.file("m.json"));
    CHECK(read.weights == model.weights);
    CHECK(read.bias == model.bias);

    {
        std::ofstream out(dir.file("bad.json"));
        out << R"({"vocab_size": 2, "bias": 0.0, "weights": [1.0]})";
    }
    CHECK_THROWS_WITH_AS(io::read_model(dir.file("bad.json")), doctest::Contains("vocab_size"),
                         std::invalid_argument);
    {
        std::ofstream out(dir.file("missing.json"));
        out << R"({"vocab_size": 2, "weights": [1.0, 2.0]})";
    }
    CHECK_THROWS_WITH_AS(io::read_model(dir.file("missing.json")), doctest::Contains("bias"),
                         std::invalid_argument);
}

TEST_CASE("truth files round-trip boxes and whole-frame instances") {
    TempDir dir;
    std::vector<GroundTruthInstance> truths(2);
    truths[0].label = "wave";
    truths[0].frames = {5, 35};
    truths[1].label = "wave";
    truths[1].frames = {0, 30};
    truths[1].boxes = std::vector<DetectionBox>{{{0, 10}, {0, 0, 30, 30}},
                                                {{10, 20}, {30, 30, 60, 60}}};
    io::write_truths(dir.file("t.jsonl"), truths, "clip-b", "manifest.json");
    const auto read = io::read_truths(dir.file("t.jsonl"));
    CHECK(read.video == "clip-b");
    REQUIRE(read.truths.size() == 2);
    CHECK(read.truths[0].label == "wave");
    CHECK(read.truths[0].frames == FrameInterval{5, 35});
    CHECK(!read.truths[0].boxes.has_value());
    REQUIRE(read.truths[1].boxes.has_value());
    CHECK(*read.truths[1].boxes == *truths[1].boxes);
}

TEST_CASE("detection files round-trip") {
    TempDir dir;
    Detection det;
    det.method = "st-subgraph";
    det.node_ids = {3, 4, 7};
    det.score = -1.25;
    det.frames = {10, 30};
    det.boxes = std::vector<DetectionBox>{{{10, 20}, {0, 0, 30, 30}}};
    det.rank = 2;
    io::write_detections(dir.file("d.jsonl"), {det}, "clip-c", "manifest.json");
    const auto read = io::read_detections(dir.file("d.jsonl"));
    CHECK(read.video == "clip-c");
    REQUIRE(read.detections.size() == 1);
    const auto& r = read.detections[0];
    CHECK(r.method == det.method);
    CHECK(r.node_ids == det.node_ids);
    CHECK(r.score == det.score);
    CHECK(r.frames == det.frames);
    CHECK(*r.boxes == *det.boxes);
    CHECK(r.rank == det.rank);
}

TEST_CASE("scenario specs round-trip exactly") {
    TempDir dir;
    ScenarioSpec spec = scenario_preset("fig8-drift");
    io::write_scenario(dir.file("s.json"), spec);
    CHECK(io::read_scenario(dir.file("s.json")) == spec);

    spec = scenario_preset("thumos-multi");
    io::write_scenario(dir.file("s2.json"), spec);
    CHECK(io::read_scenario(dir.file("s2.json")) == spec);
}

TEST_CASE("shipped preset files match the built-in presets") {
    for (const auto& name : scenario_preset_names()) {
        const std::string path = std::string(ACTDET_SCENARIO_DIR) + "/" + name + ".json";
        CHECK(io::read_scenario(path) == scenario_preset(name));
    }
}

TEST_CASE("graph export carries nodes with weights and edges") {
    TempDir dir;
    const auto graph = actdet::testing::slab_graph({4.0, 2.0, -6.0, 5.0});
    io::write_graph(dir.file("g.json"), graph, "manifest.json");

    std::ifstream in(dir.file("g.json"));
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("\"nodes\"") != std::string::npos);
    CHECK(text.find("\"edges\"") != std::string::npos);
    CHECK(text.find("\"weight\"") != std::string::npos);
    // Whole-frame nodes export null cells.
    CHECK(text.find("\"row\": null") != std::string::npos);
}

TEST_CASE("bench CSV emits one row per repetition") {
    TempDir dir;
    EvalReport report;
    BenchRow row;
    row.method = "t-subgraph";
    row.instance = "tiny";
    row.score = 3.0;
    row.overlap = 1.0;
    row.times_ms = {0.5, 0.75, 0.25};
    report.rows.push_back(row);
    io::write_bench_csv(dir.file("b.csv"), report, "manifest.json");

    std::ifstream in(dir.file("b.csv"));
    std::string line;
    int rows = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.rfind('#', 0) == 0) continue;
        if (line == "method,instance,score,overlap,time_ms") {
            saw_header = true;
            continue;
        }
        if (!line.empty()) ++rows;
    }
    CHECK(saw_header);
    CHECK(rows == 3);
}

TEST_CASE("manifest files record the run") {
    TempDir dir;
    io::Manifest manifest;
    manifest.command = "generate";
    manifest.version = io::tool_version();
    manifest.seed = 7;
    manifest.inputs.emplace_back("preset", "fig5");
    manifest.config.emplace_back("scenario", "fig5");
    manifest.outputs = {"features.csv"};
    manifest.started_at = "2020-01-01T00:00:00Z";
    manifest.finished_at = "2020-01-01T00:00:01Z";
    io::write_manifest(dir.file("manifest.json"), manifest);

    std::ifstream in(dir.file("manifest.json"));
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("\"command\": \"generate\"") != std::string::npos);
    CHECK(text.find("\"seed\": 7") != std::string::npos);
    CHECK(text.find("features.csv") != std::string::npos);
}
