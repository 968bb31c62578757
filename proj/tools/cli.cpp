#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cbiou/error.hpp"
#include "cbiou/io.hpp"
#include "cbiou/metrics.hpp"
#include "cbiou/refiner.hpp"
#include "cbiou/scene.hpp"
#include "cbiou/tracker.hpp"
#include "cbiou/tuning.hpp"

namespace cbiou::cli {

namespace {

/// Raised for bad flag values discovered after CLI11 has parsed the line.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TrackerFlags {
    double b1 = 0.3;
    double b2 = 0.4;
    int max_age = 30;
    int min_hits = 1;
    int motion_cap = 3;
    double match_floor = 0.0;
    std::string similarity = "biou";
    bool no_cascade = false;
    bool no_motion = false;
};

void add_tracker_options(CLI::App* sub, TrackerFlags& f, bool with_buffers) {
    if (with_buffers) {
        sub->add_option("--b1", f.b1, "Small buffer scale (first matching round)")->capture_default_str();
        sub->add_option("--b2", f.b2, "Large buffer scale (second matching round)")->capture_default_str();
    }
    sub->add_option("--max-age", f.max_age, "Unmatched frames before a track ends")->capture_default_str();
    sub->add_option("--min-hits", f.min_hits, "Matches before a track is reported")->capture_default_str();
    sub->add_option("--motion-cap", f.motion_cap, "Displacements averaged for motion (2-5)")
        ->capture_default_str();
    sub->add_option("--match-floor", f.match_floor, "Similarity at or below which pairs never match")
        ->capture_default_str();
    sub->add_option("--similarity", f.similarity, "iou, giou, diou or biou")->capture_default_str();
    sub->add_flag("--no-cascade", f.no_cascade, "Single matching round with b1");
    sub->add_flag("--no-motion", f.no_motion, "Predict tracks as stationary");
}

TrackerConfig to_config(const TrackerFlags& f) {
    TrackerConfig c;
    try {
        c.b1 = BufferScale(f.b1);
        c.b2 = BufferScale(f.b2);
        c.max_age = f.max_age;
        c.min_hits = f.min_hits;
        c.motion_cap = f.motion_cap;
        c.match_floor = f.match_floor;
        c.cascade = !f.no_cascade;
        c.motion = !f.no_motion;
        static const std::map<std::string, Similarity> kinds = {{"iou", Similarity::IoU},
                                                                 {"giou", Similarity::GIoU},
                                                                 {"diou", Similarity::DIoU},
                                                                 {"biou", Similarity::BIoU}};
        auto it = kinds.find(f.similarity);
        if (it == kinds.end()) throw UsageError("unknown similarity '" + f.similarity + "'");
        c.similarity = it->second;
        c.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    return c;
}

Objective to_objective(const std::string& name) {
    if (name == "hota") return Objective::HOTA;
    if (name == "idf1") return Objective::IDF1;
    if (name == "mota") return Objective::MOTA;
    throw UsageError("unknown objective '" + name + "'");
}

/// Applies `key=value` lines from `path` to options of `sub` that were not
/// given on the command line. Keys are long option names; '_' and '-' are
/// interchangeable.
void apply_config_file(CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw.substr(0, raw.find('#'));
        s.erase(0, s.find_first_not_of(" \t\r"));
        s.erase(s.find_last_not_of(" \t\r") + 1);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw UsageError(fmt::format("{}:{}: expected key=value", path, line));
        }
        std::string key = s.substr(0, eq);
        std::string value = s.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        std::replace(key.begin(), key.end(), '_', '-');

        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config") {
            throw UsageError(fmt::format("{}:{}: unknown setting '{}'", path, line, key));
        }
        if (opt->count() > 0) continue;  // command line wins
        try {
            opt->add_result(value);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError(fmt::format("{}:{}: {}", path, line, e.what()));
        }
    }
}

int cmd_track(const std::string& detections, const std::string& output, const TrackerFlags& flags,
              std::ostream& out) {
    const TrackerConfig config = to_config(flags);
    const auto dets = parse_detections(std::filesystem::path(detections));
    const auto tracklets = run_sequence(dets, config);
    write_results(std::filesystem::path(output), tracklets);
    out << fmt::format("{} tracks, {} boxes -> {}\n", tracklets.size(),
                       std::accumulate(tracklets.begin(), tracklets.end(), std::size_t{0},
                                       [](std::size_t n, const Tracklet& t) { return n + t.size(); }),
                       output);
    return kExitOk;
}

int cmd_refine(const std::string& results, const std::string& embeddings, const std::string& output,
               double tau, std::ostream& out) {
    if (!(tau > 0.0)) throw UsageError("--tau must be positive");
    auto tracklets = parse_results(std::filesystem::path(results));
    attach_features(tracklets, parse_embeddings(std::filesystem::path(embeddings)));
    const auto merged = refine(tracklets, tau);
    write_results(std::filesystem::path(output), merged);
    out << fmt::format("{} tracklets -> {} identities -> {}\n", tracklets.size(), merged.size(), output);
    return kExitOk;
}

int cmd_eval(const std::string& results, const std::string& gt, const std::string& format,
             const std::string& report_path, std::ostream& out) {
    if (format != "text" && format != "kv") throw UsageError("--format must be text or kv");
    const auto tracklets = parse_results(std::filesystem::path(results));
    const auto truth = parse_ground_truth(std::filesystem::path(gt));
    const MetricReport report = evaluate(truth, to_annotations(tracklets));
    out << (format == "text" ? format_text(report) : format_key_value(report));
    if (!report_path.empty()) {
        std::ofstream f(report_path, std::ios::binary);
        if (!f) throw Error("cannot write " + report_path);
        f << format_key_value(report);
    }
    return kExitOk;
}

std::vector<Sequence> load_sequences(const std::vector<std::string>& scenes,
                                     const std::vector<std::string>& dets,
                                     const std::vector<std::string>& gts) {
    if (dets.size() != gts.size()) throw UsageError("--det and --gt must be given in pairs");
    std::vector<Sequence> seqs;
    for (const auto& path : scenes) {
        Scene s = generate_scene(parse_scene(std::filesystem::path(path)));
        seqs.push_back({path, std::move(s.detections), std::move(s.ground_truth)});
    }
    for (std::size_t i = 0; i < dets.size(); ++i) {
        seqs.push_back({dets[i], parse_detections(std::filesystem::path(dets[i])),
                        parse_ground_truth(std::filesystem::path(gts[i]))});
    }
    if (seqs.empty()) throw UsageError("no input sequences (use --scene or --det/--gt)");
    return seqs;
}

int cmd_synth(const std::string& scene_path, const std::string& det_out, const std::string& gt_out,
              std::ostream& out) {
    const Scene scene = generate_scene(parse_scene(std::filesystem::path(scene_path)));
    write_detections(std::filesystem::path(det_out), scene.detections);
    write_ground_truth(std::filesystem::path(gt_out), scene.ground_truth);
    out << fmt::format("{} frames -> {}, {}\n", scene.ground_truth.size(), det_out, gt_out);
    return kExitOk;
}

int cmd_nms(const std::vector<std::string>& files, double threshold, std::ostream& out) {
    if (files.size() < 3) throw UsageError("nms needs at least two inputs and one output");
    if (!(threshold > 0.0 && threshold <= 1.0)) throw UsageError("--iou must lie in (0, 1]");
    std::vector<DetectionsByFrame> sets;
    for (std::size_t i = 0; i + 1 < files.size(); ++i) {
        sets.push_back(parse_detections(std::filesystem::path(files[i])));
    }
    const DetectionsByFrame merged = nms_merge(sets, threshold);
    write_detections(std::filesystem::path(files.back()), merged);
    std::size_t n = 0;
    for (const auto& [_, d] : merged) n += d.size();
    out << fmt::format("{} detections kept -> {}\n", n, files.back());
    return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cascaded buffered-IoU multi-object tracking toolkit", "cbiou"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::string config_path;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value file supplying flags not given on the command line")
            ->check(CLI::ExistingFile);
    };

    // track
    TrackerFlags track_flags;
    std::string track_in, track_out;
    auto* track = app.add_subcommand("track", "Track detections into a result file");
    add_tracker_options(track, track_flags, true);
    add_config(track);
    track->add_option("detections", track_in, "MOTChallenge detection file")->required();
    track->add_option("output", track_out, "Result file to write")->required();

    // refine
    double tau = kDefaultMergeThreshold;
    std::string refine_in, refine_emb, refine_out;
    auto* refine_cmd = app.add_subcommand("refine", "Merge tracklets by appearance");
    refine_cmd->add_option("--tau", tau, "Merge threshold on average cosine distance")->capture_default_str();
    add_config(refine_cmd);
    refine_cmd->add_option("results", refine_in, "Result file from `track`")->required();
    refine_cmd->add_option("embeddings", refine_emb, "Embeddings keyed by (frame, track id)")->required();
    refine_cmd->add_option("output", refine_out, "Merged result file to write")->required();

    // eval
    std::string eval_res, eval_gt, eval_format = "text", eval_report;
    auto* eval = app.add_subcommand("eval", "Score a result file against ground truth");
    eval->add_option("--format", eval_format, "text or kv")->capture_default_str();
    eval->add_option("--report", eval_report, "Also write the key=value report here");
    add_config(eval);
    eval->add_option("results", eval_res, "Result file")->required();
    eval->add_option("gt", eval_gt, "Ground-truth file")->required();

    // tune
    TrackerFlags tune_flags;
    std::string objective = "hota";
    std::vector<std::string> tune_scenes, tune_dets, tune_gts;
    auto* tune_cmd = app.add_subcommand("tune", "Grid-search the buffer pair (b1, b2)");
    add_tracker_options(tune_cmd, tune_flags, false);
    tune_cmd->add_option("--objective", objective, "hota, idf1 or mota")->capture_default_str();
    tune_cmd->add_option("--scene", tune_scenes, "Synthetic scene file (repeatable)");
    tune_cmd->add_option("--det", tune_dets, "Detection file (repeatable, paired with --gt)");
    tune_cmd->add_option("--gt", tune_gts, "Ground-truth file (repeatable)");
    add_config(tune_cmd);

    // ablate
    TrackerFlags ablate_flags;
    std::vector<std::string> ablate_scenes, ablate_dets, ablate_gts;
    auto* ablate_cmd = app.add_subcommand("ablate", "Compare similarity, cascade and motion variants");
    add_tracker_options(ablate_cmd, ablate_flags, true);
    ablate_cmd->add_option("--scene", ablate_scenes, "Synthetic scene file");
    ablate_cmd->add_option("--det", ablate_dets, "Detection file");
    ablate_cmd->add_option("--gt", ablate_gts, "Ground-truth file");
    add_config(ablate_cmd);

    // synth
    std::string synth_scene, synth_det, synth_gt;
    auto* synth = app.add_subcommand("synth", "Render a scene file to detections and ground truth");
    synth->add_option("scene", synth_scene, "Scene description")->required();
    synth->add_option("--det", synth_det, "Detection file to write")->required();
    synth->add_option("--gt", synth_gt, "Ground-truth file to write")->required();

    // nms
    double nms_iou = kDefaultNmsThreshold;
    std::vector<std::string> nms_files;
    auto* nms_cmd = app.add_subcommand("nms", "Merge detection files with non-maximum suppression");
    nms_cmd->add_option("--iou", nms_iou, "Suppression IoU threshold")->capture_default_str();
    add_config(nms_cmd);
    nms_cmd->add_option("files", nms_files, "Input files followed by the output file")->required();

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.emplace_back("cbiou");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        for (CLI::App* sub : app.get_subcommands()) {
            if (!config_path.empty()) apply_config_file(sub, config_path);
        }
        if (track->parsed()) return cmd_track(track_in, track_out, track_flags, out);
        if (refine_cmd->parsed()) return cmd_refine(refine_in, refine_emb, refine_out, tau, out);
        if (eval->parsed()) return cmd_eval(eval_res, eval_gt, eval_format, eval_report, out);
        if (tune_cmd->parsed()) {
            const TrackerConfig base = [&] {
                TrackerFlags f = tune_flags;
                f.b1 = 0.1;
                f.b2 = 0.2;
                return to_config(f);
            }();
            GridSearchSpec grid;
            grid.objective = to_objective(objective);
            const auto seqs = load_sequences(tune_scenes, tune_dets, tune_gts);
            const TuneResult result = cbiou::tune(seqs, grid, base);
            out << format_tune_table(result, grid.objective);
            return kExitOk;
        }
        if (ablate_cmd->parsed()) {
            const TrackerConfig base = to_config(ablate_flags);
            const auto seqs = load_sequences(ablate_scenes, ablate_dets, ablate_gts);
            if (seqs.size() != 1) throw UsageError("ablate takes exactly one sequence");
            out << format_ablation_table(cbiou::ablate(seqs.front(), base));
            return kExitOk;
        }
        if (synth->parsed()) return cmd_synth(synth_scene, synth_det, synth_gt, out);
        if (nms_cmd->parsed()) return cmd_nms(nms_files, nms_iou, out);
    } catch (const UsageError& e) {
        err << "cbiou: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "cbiou: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "cbiou: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace cbiou::cli
