#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "actdet/evaluation.hpp"
#include "actdet/io.hpp"
#include "actdet/pipeline.hpp"
#include "actdet/synthetic.hpp"

namespace fs = std::filesystem;
using namespace actdet;

namespace {

std::string now_iso() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%FT%TZ", &tm_utc);
    return buf;
}

std::string default_out_dir() {
    if (const char* env = std::getenv("ACTDET_OUT"); env != nullptr && *env != '\0') return env;
    return ".";
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw std::invalid_argument("cannot create output directory " + dir);
}

ScenarioSpec load_scenario(const std::string& spec_path, const std::string& preset) {
    if (!spec_path.empty() && !preset.empty())
        throw std::invalid_argument("--spec and --preset conflict; give one of them");
    if (!spec_path.empty()) return io::read_scenario(spec_path);
    if (!preset.empty()) return scenario_preset(preset);
    throw std::invalid_argument("generate needs --spec or --preset");
}

ScenarioSpec load_scenario_by_name_or_path(const std::string& ref) {
    for (const auto& name : scenario_preset_names())
        if (name == ref) return scenario_preset(name);
    return io::read_scenario(ref);
}

struct GenerateArgs {
    std::string spec_path;
    std::string preset;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

int run_generate(const GenerateArgs& args) {
    const std::string started = now_iso();
    ScenarioSpec spec = load_scenario(args.spec_path, args.preset);
    if (args.seed) spec.seed = *args.seed;

    const std::string dir = args.out_dir.empty() ? default_out_dir() : args.out_dir;
    ensure_dir(dir);
    const auto generated = generate(spec);

    const std::string manifest_ref = "manifest.json";
    const std::string features_path = (fs::path(dir) / "features.csv").string();
    const std::string model_path = (fs::path(dir) / "model.json").string();
    const std::string truth_path = (fs::path(dir) / "truth.jsonl").string();

    io::write_features(features_path, generated.features, spec.extent, spec.name, manifest_ref);
    io::write_model(model_path, generated.model, manifest_ref);
    io::write_truths(truth_path, generated.truths, spec.name, manifest_ref);

    io::Manifest manifest;
    manifest.command = "generate";
    manifest.version = io::tool_version();
    manifest.seed = spec.seed;
    if (!args.spec_path.empty()) manifest.inputs.emplace_back("spec", args.spec_path);
    if (!args.preset.empty()) manifest.inputs.emplace_back("preset", args.preset);
    manifest.config.emplace_back("scenario", spec.name);
    manifest.config.emplace_back("num_frames", std::to_string(spec.extent.num_frames));
    manifest.config.emplace_back("width", std::to_string(spec.extent.width));
    manifest.config.emplace_back("height", std::to_string(spec.extent.height));
    manifest.config.emplace_back("slab_frames", std::to_string(spec.slab_frames));
    manifest.outputs = {"features.csv", "model.json", "truth.jsonl"};
    manifest.started_at = started;
    manifest.finished_at = now_iso();
    io::write_manifest((fs::path(dir) / manifest_ref).string(), manifest);

    std::cout << "wrote " << features_path << ", " << model_path << ", " << truth_path << "\n";
    return 0;
}

struct DetectArgs {
    std::string features_path;
    std::string model_path;
    std::string method_name;
    std::string out_path;
    int slab_frames = 10;
    std::string grid;
    int jump_reach = -1;
    int max_detections = 10;
    double reweight = 0.0;
    double stop_below = 0.0;
    int num_frames = 0;
    int width = 0;
    int height = 0;
    bool normalize = false;
    std::string dump_graph;
};

GridShape parse_grid(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) throw std::invalid_argument("--grid wants ROWSxCOLS, e.g. 3x3");
    try {
        return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
    } catch (const std::exception&) {
        throw std::invalid_argument("--grid wants ROWSxCOLS, e.g. 3x3");
    }
}

int run_detect(const DetectArgs& args) {
    const std::string started = now_iso();
    const auto method = parse_method(args.method_name);
    if (!method) throw std::invalid_argument("unknown method " + args.method_name);

    const bool spatial = *method == Method::STSubgraph || *method == Method::TwoStage ||
                         *method == Method::STCubeSliding || *method == Method::STCubeSubvolume;
    if (spatial && args.grid.empty())
        throw std::invalid_argument("method " + args.method_name + " requires --grid");
    if (!spatial && !args.grid.empty())
        throw std::invalid_argument("--grid conflicts with method " + args.method_name);
    if (*method != Method::TJump && args.jump_reach >= 0)
        throw std::invalid_argument("--jump-reach conflicts with method " + args.method_name);
    if (args.normalize && *method != Method::TSliding)
        throw std::invalid_argument("--normalize applies to method t-sliding only");

    const auto feature_file = io::read_features(args.features_path);
    const WordModel model = io::read_model(args.model_path);

    VideoExtent extent;
    if (feature_file.extent) extent = *feature_file.extent;
    if (args.num_frames > 0) extent.num_frames = args.num_frames;
    if (args.width > 0) extent.width = args.width;
    if (args.height > 0) extent.height = args.height;
    if (extent.num_frames < 1 || extent.width < 1 || extent.height < 1) {
        // No header and no flags: tightest extent covering the features.
        for (const auto& f : feature_file.features) {
            extent.num_frames = std::max(extent.num_frames, f.t + 1);
            extent.width = std::max(extent.width, f.x + 1);
            extent.height = std::max(extent.height, f.y + 1);
        }
        if (extent.num_frames < 1)
            throw std::invalid_argument(
                "cannot infer the video extent; pass --num-frames/--width/--height");
    }

    GraphConfig config;
    config.structure = spatial ? NodeStructure::SpatioTemporalCube : NodeStructure::TemporalSlab;
    config.slab_frames = args.slab_frames;
    if (spatial) config.grid = parse_grid(args.grid);
    config.linking = *method == Method::TJump ? Linking::TemporalJump : Linking::Adjacent;
    if (*method == Method::TJump) config.jump_reach = args.jump_reach >= 0 ? args.jump_reach : 2;

    const auto graph = build_graph(feature_file.features, model, extent, config);
    if (!args.dump_graph.empty()) io::write_graph(args.dump_graph, graph, "manifest.json");

    DetectOptions options;
    options.baseline.ranking =
        args.normalize ? WindowRanking::NormalizedScore : WindowRanking::RawScore;
    options.baseline.max_results = args.max_detections;

    MultiDetectConfig multi;
    multi.max_detections = args.max_detections;
    multi.reweight_value = args.reweight;
    multi.stop_below = args.stop_below;

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Detection> detections;
    if (*method == Method::TSliding || *method == Method::STCubeSliding ||
        *method == Method::STCubeSubvolume)
        detections = detect_ranked_windows(graph, *method, args.max_detections, options);
    else
        detections = detect_multiple(graph, *method, multi, options);
    const auto t1 = std::chrono::steady_clock::now();

    std::string out_path = args.out_path;
    if (out_path.empty()) out_path = (fs::path(default_out_dir()) / "detections.jsonl").string();
    const std::string manifest_path = out_path + ".manifest.json";
    const std::string manifest_ref = fs::path(manifest_path).filename().string();
    io::write_detections(out_path, detections, feature_file.video, manifest_ref);

    io::Manifest manifest;
    manifest.command = "detect";
    manifest.version = io::tool_version();
    manifest.inputs.emplace_back("features", args.features_path);
    manifest.inputs.emplace_back("model", args.model_path);
    manifest.config.emplace_back("method", args.method_name);
    manifest.config.emplace_back("slab_frames", std::to_string(config.slab_frames));
    if (spatial)
        manifest.config.emplace_back(
            "grid", std::to_string(config.grid.rows) + "x" + std::to_string(config.grid.cols));
    if (*method == Method::TJump)
        manifest.config.emplace_back("jump_reach", std::to_string(config.jump_reach));
    manifest.config.emplace_back("max_detections", std::to_string(args.max_detections));
    manifest.config.emplace_back("reweight", std::to_string(args.reweight));
    manifest.config.emplace_back("stop_below", std::to_string(args.stop_below));
    manifest.config.emplace_back(
        "detect_ms", std::to_string(std::chrono::duration<double, std::milli>(t1 - t0).count()));
    manifest.outputs = {fs::path(out_path).filename().string()};
    manifest.started_at = started;
    manifest.finished_at = now_iso();
    io::write_manifest(manifest_path, manifest);

    std::cout << "wrote " << out_path << " (" << detections.size() << " detections)\n";
    return 0;
}

struct EvaluateArgs {
    std::string detections_path;
    std::string truth_path;
    std::string metric = "overlap";
    double iou = 0.5;
    std::string out_path;
};

int run_evaluate(const EvaluateArgs& args) {
    const std::string started = now_iso();
    const auto detection_file = io::read_detections(args.detections_path);
    const auto truth_file = io::read_truths(args.truth_path);
    if (!detection_file.video.empty() && !truth_file.video.empty() &&
        detection_file.video != truth_file.video)
        throw std::invalid_argument("video identifier mismatch: detections are for '" +
                                    detection_file.video + "', truth is for '" + truth_file.video +
                                    "'");

    nlohmann::json report;
    report["metric"] = args.metric;
    if (args.metric == "overlap") {
        const auto overlap = evaluate_overlap(detection_file.detections, truth_file.truths);
        report["mean_overlap"] = overlap.mean_overlap;
        report["per_instance"] = overlap.per_instance;
        std::cout << "mean_overlap " << overlap.mean_overlap << "\n";
    } else if (args.metric == "map") {
        std::string label;
        for (const auto& t : truth_file.truths) {
            if (label.empty()) label = t.label;
            else if (label != t.label)
                throw std::invalid_argument(
                    "map metric expects a single-class truth file; evaluate one class at a time");
        }
        if (label.empty()) throw std::invalid_argument("truth file has no instances");
        const std::string video = truth_file.video.empty() ? "default" : truth_file.video;
        std::vector<ScoredInterval> scored;
        for (const auto& d : detection_file.detections)
            scored.push_back({video, label, d.score, d.frames});
        std::vector<TruthInterval> truths;
        for (const auto& t : truth_file.truths) truths.push_back({video, label, t.frames});
        const double ap = mean_average_precision(scored, truths, args.iou);
        report["average_precision"] = ap;
        report["iou_threshold"] = args.iou;
        std::cout << "average_precision " << ap << "\n";
    } else {
        throw std::invalid_argument("--metric must be overlap or map");
    }

    std::string out_path = args.out_path;
    if (out_path.empty()) out_path = (fs::path(default_out_dir()) / "report.json").string();
    const std::string manifest_path = out_path + ".manifest.json";
    report["manifest"] = fs::path(manifest_path).filename().string();
    {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot open " + out_path + " for writing");
        out << report.dump(2) << "\n";
    }

    io::Manifest manifest;
    manifest.command = "evaluate";
    manifest.version = io::tool_version();
    manifest.inputs.emplace_back("detections", args.detections_path);
    manifest.inputs.emplace_back("truth", args.truth_path);
    manifest.config.emplace_back("metric", args.metric);
    manifest.config.emplace_back("iou", std::to_string(args.iou));
    manifest.outputs = {fs::path(out_path).filename().string()};
    manifest.started_at = started;
    manifest.finished_at = now_iso();
    io::write_manifest(manifest_path, manifest);
    return 0;
}

struct BenchArgs {
    std::vector<std::string> scenarios;
    std::string methods = "t-subgraph,t-sliding";
    int reps = 3;
    std::string out_dir;
    bool fig9 = false;
    std::string fig9_caps = "1,5,10,20,40";
};

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto end = comma == std::string::npos ? text.size() : comma;
        if (end > pos) out.push_back(text.substr(pos, end - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

int run_bench(const BenchArgs& args) {
    const std::string started = now_iso();
    if (args.scenarios.empty()) throw std::invalid_argument("bench needs at least one --scenario");
    if (args.reps < 1) throw std::invalid_argument("--reps must be >= 1");

    std::vector<BenchMethodSpec> methods;
    if (args.fig9) {
        std::vector<int> caps;
        for (const auto& c : split_csv(args.fig9_caps)) caps.push_back(std::stoi(c));
        methods = accuracy_time_ladder(caps);
    } else {
        for (const auto& name : split_csv(args.methods)) {
            const auto m = parse_method(name);
            if (!m) throw std::invalid_argument("unknown method " + name);
            methods.push_back({name, *m, 1, std::nullopt});
        }
    }

    // Group methods by the graph flavor they need so each scenario is built
    // once per flavor: 0 = slab/adjacent, 1 = slab/jump, 2 = cube/adjacent.
    auto flavor_of = [](Method m) {
        switch (m) {
            case Method::TJump: return 1;
            case Method::STSubgraph:
            case Method::TwoStage:
            case Method::STCubeSliding:
            case Method::STCubeSubvolume: return 2;
            default: return 0;
        }
    };

    EvalReport merged;
    for (int group = 0; group < 3; ++group) {
        std::vector<BenchMethodSpec> batch;
        for (const auto& m : methods)
            if (flavor_of(m.method) == group) batch.push_back(m);
        if (batch.empty()) continue;

        const NodeStructure structure =
            group == 2 ? NodeStructure::SpatioTemporalCube : NodeStructure::TemporalSlab;
        const Linking linking = group == 1 ? Linking::TemporalJump : Linking::Adjacent;

        std::vector<BenchInstance> instances;
        for (const auto& ref : args.scenarios) {
            const ScenarioSpec spec = load_scenario_by_name_or_path(ref);
            const auto generated = generate(spec);
            const auto config = scenario_graph_config(spec, structure, linking);
            instances.push_back(
                {spec.name, build_graph(generated.features, generated.model, spec.extent, config),
                 generated.truths});
        }
        const EvalReport part = benchmark(batch, instances, args.reps);
        merged.rows.insert(merged.rows.end(), part.rows.begin(), part.rows.end());
        merged.summary.insert(merged.summary.end(), part.summary.begin(), part.summary.end());
    }

    const std::string dir = args.out_dir.empty() ? default_out_dir() : args.out_dir;
    ensure_dir(dir);
    const std::string manifest_ref = "manifest.json";
    io::write_bench_csv((fs::path(dir) / "bench.csv").string(), merged, manifest_ref);

    nlohmann::json summary = nlohmann::json::array();
    for (const auto& s : merged.summary)
        summary.push_back({{"method", s.method},
                           {"mean_overlap", s.mean_overlap},
                           {"mean_ms", s.mean_ms},
                           {"stdev_ms", s.stdev_ms}});
    {
        std::ofstream out(fs::path(dir) / "summary.json");
        if (!out) throw std::invalid_argument("cannot write summary.json");
        out << nlohmann::json{{"manifest", manifest_ref}, {"methods", summary}}.dump(2) << "\n";
    }

    io::Manifest manifest;
    manifest.command = "bench";
    manifest.version = io::tool_version();
    for (const auto& s : args.scenarios) manifest.inputs.emplace_back("scenario", s);
    manifest.config.emplace_back("methods", args.methods);
    manifest.config.emplace_back("reps", std::to_string(args.reps));
    manifest.config.emplace_back("fig9", args.fig9 ? "true" : "false");
    manifest.outputs = {"bench.csv", "summary.json"};
    manifest.started_at = started;
    manifest.finished_at = now_iso();
    io::write_manifest((fs::path(dir) / manifest_ref).string(), manifest);

    std::cout << "wrote " << (fs::path(dir) / "bench.csv").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Activity detection in quantized feature streams by max-subgraph search"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate_cmd = app.add_subcommand("generate", "Synthesize a scenario to disk");
    generate_cmd->add_option("--spec", gen.spec_path, "Scenario spec JSON file");
    generate_cmd->add_option("--preset", gen.preset, "Named preset scenario");
    generate_cmd->add_option("--out", gen.out_dir, "Output directory");
    std::uint64_t seed_value = 0;
    auto* seed_opt = generate_cmd->add_option("--seed", seed_value, "Override the spec seed");

    DetectArgs det;
    auto* detect_cmd = app.add_subcommand("detect", "Detect activities in a feature stream");
    detect_cmd->add_option("--features", det.features_path, "Feature CSV file")->required();
    detect_cmd->add_option("--model", det.model_path, "Word-weight model JSON")->required();
    detect_cmd
        ->add_option("--method", det.method_name,
                     "t-subgraph | t-jump | st-subgraph | two-stage | t-sliding | "
                     "st-cube-sliding | st-cube-subvolume")
        ->required();
    detect_cmd->add_option("--out", det.out_path, "Detections output file");
    detect_cmd->add_option("--slab-frames", det.slab_frames, "Frames per temporal slab");
    detect_cmd->add_option("--grid", det.grid, "Spatial grid ROWSxCOLS (spatial methods)");
    detect_cmd->add_option("--jump-reach", det.jump_reach, "Temporal jump reach (t-jump)");
    detect_cmd->add_option("--max-detections", det.max_detections, "Detection cap");
    detect_cmd->add_option("--reweight", det.reweight, "Weight for already-detected nodes");
    detect_cmd->add_option("--stop-below", det.stop_below, "Stop when the score drops below");
    detect_cmd->add_option("--num-frames", det.num_frames, "Video length override");
    detect_cmd->add_option("--width", det.width, "Frame width override");
    detect_cmd->add_option("--height", det.height, "Frame height override");
    detect_cmd->add_flag("--normalize", det.normalize, "Rank t-sliding by normalized score");
    detect_cmd->add_option("--dump-graph", det.dump_graph, "Write the graph as JSON");

    EvaluateArgs eval;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score detections against ground truth");
    evaluate_cmd->add_option("--detections", eval.detections_path, "Detections file")->required();
    evaluate_cmd->add_option("--truth", eval.truth_path, "Ground truth file")->required();
    evaluate_cmd->add_option("--metric", eval.metric, "overlap | map");
    evaluate_cmd->add_option("--iou", eval.iou, "IoU threshold for map");
    evaluate_cmd->add_option("--out", eval.out_path, "Report output file");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time methods across scenarios");
    bench_cmd->add_option("--scenario", bench.scenarios, "Preset name or scenario file")
        ->take_all();
    bench_cmd->add_option("--methods", bench.methods, "Comma-separated method list");
    bench_cmd->add_option("--reps", bench.reps, "Repetitions per method/scenario");
    bench_cmd->add_option("--out", bench.out_dir, "Output directory");
    bench_cmd->add_flag("--fig9", bench.fig9, "Run the accuracy-vs-time ladder");
    bench_cmd->add_option("--fig9-caps", bench.fig9_caps, "Ladder pool caps (slabs)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (generate_cmd->parsed()) {
            if (seed_opt->count() > 0) gen.seed = seed_value;
            return run_generate(gen);
        }
        if (detect_cmd->parsed()) return run_detect(det);
        if (evaluate_cmd->parsed()) return run_evaluate(eval);
        if (bench_cmd->parsed()) return run_bench(bench);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
