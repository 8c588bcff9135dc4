// featuresort CLI: synth | track | postprocess | eval.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <semaphore>
#include <string>
#include <vector>

#include <featuresort/config.hpp>
#include <featuresort/io.hpp>
#include <featuresort/log.hpp>
#include <featuresort/metrics.hpp>
#include <featuresort/postprocess.hpp>
#include <featuresort/synth.hpp>
#include <featuresort/tracker.hpp>
#include <featuresort/types.hpp>

namespace fs = std::filesystem;
using namespace featuresort;

namespace {

class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

RunConfig build_config(const std::string& config_path,
                       const std::vector<std::string>& overrides) {
    RunConfig cfg;
    if (!config_path.empty()) load_config_file(cfg, config_path);
    for (const auto& pair : overrides) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--set expects section.key=value, got '" + pair + "'");
        }
        apply_config_entry(cfg, pair.substr(0, eq), pair.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

// Maps each input file to its output path: a single input and non-directory
// --out writes that exact file, otherwise outputs land in the --out directory
// under <stem><suffix>.csv.
std::vector<std::string> plan_outputs(const std::vector<std::string>& inputs,
                                      const std::string& out,
                                      const std::string& suffix) {
    std::vector<std::string> outputs;
    const bool out_is_dir = fs::is_directory(out) || inputs.size() > 1;
    if (out_is_dir) {
        fs::create_directories(out);
        for (const auto& in : inputs) {
            std::string stem = fs::path(in).stem().string();
            outputs.push_back((fs::path(out) / (stem + suffix + ".csv")).string());
        }
    } else {
        if (const auto parent = fs::path(out).parent_path(); !parent.empty()) {
            fs::create_directories(parent);
        }
        outputs.push_back(out);
    }
    return outputs;
}

// Fans `work(i)` over the inputs with at most `jobs` in flight. Worker
// exceptions surface on the calling thread.
void run_jobs(std::size_t n, int jobs, const std::function<void(std::size_t)>& work) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
        return;
    }
    std::counting_semaphore<256> slots(std::min(jobs, 256));
    std::vector<std::future<void>> futures;
    futures.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        slots.acquire();
        futures.push_back(std::async(std::launch::async, [&, i] {
            try {
                work(i);
            } catch (...) {
                slots.release();
                throw;
            }
            slots.release();
        }));
    }
    for (auto& f : futures) f.get();
}

int cmd_synth(const std::string& scenario, const std::string& out_dir,
              const RunConfig& cfg) {
    Scenario scene;
    if (fs::exists(scenario) && !fs::is_directory(scenario)) {
        scene = load_scenario_file(scenario);
        scene.noise.seed = cfg.synth_seed;
        if (cfg.synth_frames > 0) scene.frames = cfg.synth_frames;
    } else {
        scene = make_preset(scenario, cfg.synth_seed, cfg.synth_frames);
    }

    const SynthOutput output = generate(scene);
    fs::create_directories(out_dir);
    const std::string stem = fs::path(scene.name).stem().string();
    const std::string dets_path = (fs::path(out_dir) / (stem + ".dets.csv")).string();
    const std::string truth_path = (fs::path(out_dir) / (stem + ".truth.csv")).string();
    write_detections(dets_path, output.detections, scene.embedding_dim);
    write_trajectories(truth_path, output.truth, false, scene.embedding_dim);
    std::cout << "synth " << scene.name << ": " << output.detections.size()
              << " detections, " << output.truth.size() << " identities, " << scene.frames
              << " frames\n  " << dets_path << "\n  " << truth_path << "\n";
    return 0;
}

int cmd_track(const std::vector<std::string>& inputs, const std::string& out, int jobs,
              const RunConfig& cfg) {
    const auto outputs = plan_outputs(inputs, out, ".tracks");
    std::vector<std::string> summaries(inputs.size());
    run_jobs(inputs.size(), jobs, [&](std::size_t i) {
        const std::vector<Detection> dets = read_detections(inputs[i]);
        const std::vector<Trajectory> trajs = run_tracker(dets, cfg.tracker);
        write_trajectories(outputs[i], trajs, true, cfg.tracker.embedding_dim);
        long long rows = 0;
        int last_frame = 0;
        for (const auto& t : trajs) {
            rows += static_cast<long long>(t.points.size());
            last_frame = std::max(last_frame, t.last_frame());
        }
        std::ostringstream os;
        os << "track " << inputs[i] << ": " << trajs.size() << " tracks, " << rows
           << " rows, last frame " << last_frame << " -> " << outputs[i];
        summaries[i] = os.str();
    });
    for (const auto& s : summaries) std::cout << s << "\n";
    return 0;
}

int cmd_postprocess(const std::vector<std::string>& inputs, const std::string& out,
                    int jobs, const RunConfig& cfg) {
    const auto outputs = plan_outputs(inputs, out, ".post");
    std::vector<std::string> summaries(inputs.size());
    run_jobs(inputs.size(), jobs, [&](std::size_t i) {
        std::vector<Trajectory> trajs = read_trajectories(inputs[i], true);
        std::vector<MergeRecord> merges;
        const std::vector<Trajectory> refined =
            postprocess(std::move(trajs), cfg.gsp, cfg.link, &merges);
        write_trajectories(outputs[i], refined, true, cfg.tracker.embedding_dim);
        std::ostringstream os;
        os << "postprocess " << inputs[i] << ": " << merges.size() << " merges, "
           << refined.size() << " tracks -> " << outputs[i];
        summaries[i] = os.str();
    });
    for (const auto& s : summaries) std::cout << s << "\n";
    return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path,
             const std::string& out) {
    const std::vector<Trajectory> pred = read_trajectories(pred_path, false);
    const std::vector<Trajectory> truth = read_trajectories(truth_path, false);
    const EvalReport report = evaluate(pred, truth);
    std::cout << format_report(report);
    if (!out.empty()) {
        if (const auto parent = fs::path(out).parent_path(); !parent.empty()) {
            fs::create_directories(parent);
        }
        std::ofstream file(out);
        if (!file) throw DataError("cannot open report file for writing: " + out);
        file << report_key_values(report);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FeatureSORT: file-driven multi-object tracking pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "Config file (flat section.key = value)")
        ->expected(1);
    app.add_option("--set", overrides, "Override one config entry: section.key=value");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic scenario");
    std::string scenario;
    std::string synth_out = ".";
    std::uint64_t seed_flag = 0;
    bool seed_given = false;
    synth->add_option("scenario", scenario, "Preset name or scenario file")->required();
    synth->add_option("--out", synth_out, "Output directory");
    synth->add_option("--seed", seed_flag, "Noise seed (overrides synth.seed)")
        ->each([&](const std::string&) { seed_given = true; });

    auto* track = app.add_subcommand("track", "Run the online tracker over detections");
    std::vector<std::string> track_inputs;
    std::string track_out;
    int track_jobs = 1;
    track->add_option("detections", track_inputs, "Detection file(s)")->required();
    track->add_option("--out", track_out, "Output file (or directory for several inputs)")
        ->required();
    track->add_option("--jobs", track_jobs, "Parallel sequences");

    auto* post = app.add_subcommand("postprocess", "Link and smooth finished trajectories");
    std::vector<std::string> post_inputs;
    std::string post_out;
    int post_jobs = 1;
    post->add_option("trajectories", post_inputs, "Trajectory file(s) from 'track'")->required();
    post->add_option("--out", post_out, "Output file (or directory for several inputs)")
        ->required();
    post->add_option("--jobs", post_jobs, "Parallel sequences");

    auto* eval = app.add_subcommand("eval", "Score predictions against ground truth");
    std::string pred_path, truth_path, report_out;
    eval->add_option("predictions", pred_path, "Predicted trajectory file")->required();
    eval->add_option("truth", truth_path, "Ground-truth trajectory file")->required();
    eval->add_option("--out", report_out, "Write a key=value report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        RunConfig cfg = build_config(config_path, overrides);
        if (seed_given) cfg.synth_seed = seed_flag;

        if (synth->parsed()) return cmd_synth(scenario, synth_out, cfg);
        if (track->parsed()) return cmd_track(track_inputs, track_out, track_jobs, cfg);
        if (post->parsed()) return cmd_postprocess(post_inputs, post_out, post_jobs, cfg);
        if (eval->parsed()) return cmd_eval(pred_path, truth_path, report_out);
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
