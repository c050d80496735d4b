// kinemotion: command-line driver for the skeleton kinematics pipeline.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kinemotion/config.hpp"
#include "kinemotion/errors.hpp"
#include "kinemotion/experiment.hpp"
#include "kinemotion/kinematic_features.hpp"
#include "kinemotion/model_io.hpp"
#include "kinemotion/parallel.hpp"
#include "kinemotion/random_forest.hpp"
#include "kinemotion/rfecv.hpp"
#include "kinemotion/rng.hpp"
#include "kinemotion/skeleton_io.hpp"
#include "kinemotion/synth_data.hpp"
#include "kinemotion/text.hpp"
#include "kinemotion/track_cleaning.hpp"
#include "kinemotion/volume_gen.hpp"

namespace fs = std::filesystem;
using namespace kinemotion;

namespace {

struct GlobalOptions {
    std::string config;
    std::vector<std::string> overrides;
    std::string workspace;
    std::int64_t seed = -1;
    int jobs = -1;
};

RunConfig load_config(const GlobalOptions& g, const std::string& extra_config = {}) {
    KeyValueConfig kv;
    for (const auto& path : {g.config, extra_config}) {
        if (path.empty()) continue;
        const auto file = KeyValueConfig::parse(read_file(path));
        for (const auto& [k, v] : file.values()) kv.set(k, v);
    }
    for (const auto& o : g.overrides) kv.set(o);

    RunConfig base;
    if (const char* env = std::getenv("KINEMOTION_WORKSPACE"); env && *env) base.workspace = env;
    RunConfig cfg = run_config_from(kv, base);
    if (!g.workspace.empty()) cfg.workspace = g.workspace;
    if (g.seed >= 0) cfg.seed = static_cast<std::uint64_t>(g.seed);
    if (g.jobs >= 0) cfg.jobs = static_cast<unsigned>(g.jobs);
    cfg.finalize();
    return cfg;
}

std::vector<fs::path> list_files(const fs::path& dir, const std::string& ext) {
    if (!fs::is_directory(dir)) throw Error("directory not found: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// "{subject}_{task}" split at the last underscore.
std::pair<std::string, std::string> split_stem(const fs::path& p) {
    const auto stem = p.stem().string();
    const auto us = stem.rfind('_');
    if (us == std::string::npos || us == 0 || us + 1 == stem.size()) {
        throw FormatError("file name must look like <subject>_<task>: " + p.filename().string());
    }
    return {stem.substr(0, us), stem.substr(us + 1)};
}

std::map<std::string, Label> read_labels(const fs::path& path) {
    std::map<std::string, Label> out;
    if (!fs::exists(path)) return out;
    const auto text = read_file(path);
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        line = trim(line);
        if (line.empty() || (line_no == 1 && line.rfind("subject_id", 0) == 0)) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 2) throw ParseError(line_no, "labels.csv rows are subject_id,label");
        const auto label = parse_label(trim(cells[1]));
        if (!label) throw ParseError(line_no, "bad label '" + std::string(cells[1]) + "'");
        out[std::string(trim(cells[0]))] = *label;
    }
    return out;
}

void require_task(const std::string& task) {
    if (!is_known_task(task)) throw ConfigError("unknown task id '" + task + "'");
}

std::vector<SkeletonSequence> load_sequences(const RunConfig& cfg) {
    const auto files = list_files(cfg.clean(), ".kmseq");
    if (files.empty()) throw EmptyInputError("no cleaned sequences in " + cfg.clean().string());
    std::vector<SkeletonSequence> seqs(files.size());
    parallel_for(files.size(), cfg.jobs, [&](std::size_t i) { seqs[i] = read_sequence(read_file(files[i])); });
    return seqs;
}

int cmd_synth(const RunConfig& cfg) {
    for (const auto& t : cfg.cohort.tasks) require_task(t);
    const auto cohort = generate_cohort(cfg.cohort);
    fs::create_directories(cfg.raw());
    parallel_for(cohort.logs.size(), cfg.jobs, [&](std::size_t i) {
        const auto& l = cohort.logs[i];
        write_file_atomic(cfg.raw() / (l.subject_id + "_" + l.task_id + ".log"), format_tracking_log(l.log));
    });
    write_file_atomic(cfg.raw() / "labels.csv", cohort.labels_csv());
    write_file_atomic(cfg.raw() / "ground_truth.csv", cohort.ground_truth_csv());
    std::cout << "synth: " << cohort.logs.size() << " logs written to " << cfg.raw().string() << '\n';
    return 0;
}

int cmd_clean(const RunConfig& cfg) {
    const auto files = list_files(cfg.raw(), ".log");
    if (files.empty()) throw EmptyInputError("no .log files in " + cfg.raw().string());
    const auto labels = read_labels(cfg.raw() / "labels.csv");
    fs::create_directories(cfg.clean());

    struct Outcome {
        std::string subject, task;
        std::size_t entries = 0, bad_lines = 0, kept = 0, frames = 0;
        std::string error;
    };
    std::vector<Outcome> outcomes(files.size());
    parallel_for(files.size(), cfg.jobs, [&](std::size_t i) {
        auto& o = outcomes[i];
        std::tie(o.subject, o.task) = split_stem(files[i]);
        require_task(o.task);
        try {
            auto parsed = parse_tracking_log_lenient(read_file(files[i]), o.subject);
            o.entries = parsed.log.entries.size();
            o.bad_lines = parsed.errors.size();
            auto track = select_participant(parsed.log, cfg.cleaning);
            track.task_id = o.task;
            o.kept = track.samples.size();
            auto seq = resample_uniform(track, cfg.cleaning);
            if (auto it = labels.find(o.subject); it != labels.end()) seq.label = it->second;
            o.frames = seq.frames.size();
            write_file_atomic(cfg.clean() / (o.subject + "_" + o.task + ".kmseq"), write_sequence(seq));
        } catch (const InvariantError&) {
            throw;
        } catch (const Error& e) {
            o.error = e.what();
        }
    });

    std::string report = "subject_id,task_id,raw_entries,bad_lines,kept_samples,frames,status\n";
    std::size_t failed = 0;
    for (const auto& o : outcomes) {
        report += o.subject + ',' + o.task + ',' + std::to_string(o.entries) + ',' + std::to_string(o.bad_lines) + ',' +
                  std::to_string(o.kept) + ',' + std::to_string(o.frames) + ',' + (o.error.empty() ? "ok" : "skipped") +
                  '\n';
        if (!o.error.empty()) {
            ++failed;
            std::cerr << "clean: skipped " << o.subject << '_' << o.task << ": " << o.error << '\n';
        }
    }
    write_file_atomic(cfg.clean() / "cleaning_report.csv", report);
    std::cout << "clean: " << files.size() - failed << " of " << files.size() << " logs cleaned\n";
    return 0;
}

int cmd_features(const RunConfig& cfg) {
    const auto seqs = load_sequences(cfg);
    std::vector<FeatureRow> rows(seqs.size());
    parallel_for(seqs.size(), cfg.jobs, [&](std::size_t i) {
        rows[i] = {seqs[i].subject_id, seqs[i].task_id, seqs[i].label, extract_features(seqs[i])};
    });
    std::sort(rows.begin(), rows.end(), [](const FeatureRow& a, const FeatureRow& b) {
        if (a.subject_id != b.subject_id) return a.subject_id < b.subject_id;
        return task_order(a.task_id) < task_order(b.task_id);
    });
    fs::create_directories(cfg.features());
    write_file_atomic(cfg.features() / "features.csv", write_feature_table(rows));
    std::cout << "features: " << rows.size() << " rows\n";
    return 0;
}

FoldPlan plan_for_sequences(const std::vector<SkeletonSequence>& seqs, const RunConfig& cfg) {
    std::vector<FeatureRow> stub;
    for (const auto& s : seqs) stub.push_back({s.subject_id, s.task_id, s.label, {}});
    return plan_for_rows(stub, cfg.experiment);
}

int cmd_render(const RunConfig& cfg, bool augment) {
    const auto seqs = load_sequences(cfg);
    const auto plan = plan_for_sequences(seqs, cfg);
    fs::create_directories(cfg.volumes());
    RenderConfig render = cfg.render;
    if (!augment) render.jitter_count = 0;

    std::vector<std::vector<ManifestRow>> rows(seqs.size());
    parallel_for(seqs.size(), cfg.jobs, [&](std::size_t i) {
        for_each_augmented_window(seqs[i], render, cfg.seed, [&](HeatmapVolume&& vol) {
            const auto name = volume_filename(vol);
            write_file_atomic(cfg.volumes() / name, encode_volume_npy(vol));
            const bool usable = vol.label.has_value() && vol.valid_frames > 0 &&
                                plan.find(vol.subject_id) != FoldPlan::npos;
            rows[i].push_back({name, vol.subject_id, vol.task_id, vol.window_index, vol.aug_tag, vol.label, usable});
        });
    });
    std::vector<ManifestRow> all;
    for (auto& r : rows) all.insert(all.end(), r.begin(), r.end());
    write_file_atomic(cfg.volumes() / "manifest.csv", write_manifest(all));
    write_file_atomic(cfg.volumes() / "folds.csv", plan.to_csv());
    std::cout << "render: " << all.size() << " volumes\n";
    return 0;
}

std::vector<FeatureRow> load_features(const RunConfig& cfg) {
    const auto path = cfg.features() / "features.csv";
    if (!fs::exists(path)) throw Error("feature table not found: " + path.string());
    auto rows = read_feature_table(read_file(path));
    for (const auto& r : rows) require_task(r.task_id);
    return rows;
}

void check_plan_matches(const FoldPlan& plan, const fs::path& folds_csv) {
    if (!fs::exists(folds_csv)) return;
    if (read_file(folds_csv) != plan.to_csv()) {
        throw InvariantError("fold consistency", folds_csv.string() + " differs from the evaluation fold plan");
    }
}

void write_reports(const RunConfig& cfg, const std::vector<PredictionRecord>& records, const FoldPlan& plan) {
    const auto report = build_report(records, plan);
    fs::create_directories(cfg.reports());
    write_file_atomic(cfg.reports() / "report.csv", report_csv(report));
    write_file_atomic(cfg.reports() / "report.json", report_json(report, plan));
}

int cmd_evaluate(const RunConfig& cfg, const std::string& approach, const std::string& predictions_path) {
    const auto rows = load_features(cfg);
    const auto plan = plan_for_rows(rows, cfg.experiment);
    check_plan_matches(plan, cfg.volumes() / "folds.csv");

    std::vector<PredictionRecord> records;
    if (approach == "handcrafted" || approach == "both") records = run_handcrafted(rows, plan, cfg.experiment);
    if (approach == "endtoend" || approach == "both") {
        const fs::path path = predictions_path.empty() ? cfg.workspace / "dl_predictions.csv" : fs::path(predictions_path);
        if (!fs::exists(path)) throw Error("end-to-end predictions not found: " + path.string());
        auto dl = read_dl_predictions(read_file(path), plan);
        for (const auto& r : dl) require_task(r.task_id);
        records.insert(records.end(), dl.begin(), dl.end());
    }
    sort_predictions(records);
    fs::create_directories(cfg.reports());
    write_file_atomic(cfg.reports() / "folds.csv", plan.to_csv());
    write_file_atomic(cfg.reports() / "predictions.csv", write_predictions(records));
    write_reports(cfg, records, plan);
    std::cout << "evaluate: " << records.size() << " predictions, reports in " << cfg.reports().string() << '\n';
    return 0;
}

std::pair<std::vector<PredictionRecord>, FoldPlan> load_predictions(const RunConfig& cfg) {
    const auto rows = load_features(cfg);
    const auto plan = plan_for_rows(rows, cfg.experiment);
    check_plan_matches(plan, cfg.reports() / "folds.csv");
    const auto path = cfg.reports() / "predictions.csv";
    if (!fs::exists(path)) throw Error("no predictions; run evaluate first");
    return {read_predictions(read_file(path)), plan};
}

int cmd_report(const RunConfig& cfg) {
    const auto [records, plan] = load_predictions(cfg);
    write_reports(cfg, records, plan);
    std::cout << read_file(cfg.reports() / "report.csv");
    return 0;
}

int cmd_compare(const RunConfig& cfg) {
    const auto [records, plan] = load_predictions(cfg);
    const auto report = build_report(records, plan);
    std::string out = "model_a,model_b,n_a,n_b,mean_auc_a,mean_auc_b,welch_t,welch_df,welch_p,levene_w,levene_p\n";
    for (const auto& c : report.comparisons) {
        const auto a = pooled_aucs(report, c.model_a), b = pooled_aucs(report, c.model_b);
        auto f = [&](double v) { return c.valid ? format_double(v) : std::string("nan"); };
        out += c.model_a + ',' + c.model_b + ',' + std::to_string(c.n_a) + ',' + std::to_string(c.n_b) + ',' +
               format_double(mean_sd(a).mean) + ',' + format_double(mean_sd(b).mean) + ',' + f(c.welch.statistic) +
               ',' + f(c.welch.df1) + ',' + f(c.welch.p_value) + ',' + f(c.levene.statistic) + ',' +
               f(c.levene.p_value) + '\n';
    }
    fs::create_directories(cfg.reports());
    write_file_atomic(cfg.reports() / "comparison.csv", out);
    std::cout << out;
    return 0;
}

int cmd_train(const RunConfig& cfg, const std::string& model, const std::string& task) {
    require_task(task);
    const auto rows = load_features(cfg);
    std::vector<const FeatureRow*> use;
    for (const auto& r : rows) {
        if (r.task_id == task && r.label) use.push_back(&r);
    }
    if (use.empty()) throw EmptyInputError("no labelled rows for task " + task);
    Matrix x(use.size(), kFeatureCount);
    std::vector<int> y(use.size());
    for (std::size_t i = 0; i < use.size(); ++i) {
        std::copy(use[i]->features.values.begin(), use[i]->features.values.end(), x.row(i).begin());
        y[i] = *use[i]->label == Label::Positive ? 1 : 0;
    }
    const auto& e = cfg.experiment;
    const std::uint64_t seed = derive_seed(cfg.seed, {hash_string(task), hash_string(model)});
    std::string text;
    if (model == "svm") {
        RfecvOptions opts;
        opts.c_grid = e.c_grid;
        opts.selection_folds = e.inner_folds;
        opts.tuning_folds = e.inner_folds;
        opts.tuning_repeats = e.inner_repeats;
        opts.seed = seed;
        const auto res = rfecv_select(x, y, opts);
        text = serialize_model(res.pipeline);
        std::cout << "svm: C=" << format_double(res.best_C) << ", " << res.selected_features.size() << " features\n";
    } else {
        DepthTuningOptions opts;
        opts.depth_grid = e.depth_grid;
        opts.folds = e.inner_folds;
        opts.repeats = e.inner_repeats;
        opts.n_trees = e.n_trees;
        opts.seed = derive_seed(seed, {1});
        const auto tuning = tune_depth(x, y, opts);
        text = serialize_model(train_random_forest(x, y, tuning.best_depth, e.n_trees, derive_seed(seed, {2})));
        std::cout << "forest: depth " << tuning.best_depth << '\n';
    }
    fs::create_directories(cfg.models());
    write_file_atomic(cfg.models() / (model + "_" + task + ".json"), text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Skeleton kinematics pipeline: synthetic cohorts, cleaning, features, heatmap volumes, evaluation"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--config", g.config, "key = value config file")->check(CLI::ExistingFile);
    app.add_option("--set", g.overrides, "override a config key (key=value), repeatable");
    app.add_option("--workspace", g.workspace, "workspace directory (default $KINEMOTION_WORKSPACE or .)");
    app.add_option("--seed", g.seed, "master seed")->check(CLI::NonNegativeNumber);
    app.add_option("--jobs", g.jobs, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
    app.fallthrough();

    std::string spec_path;
    auto* synth = app.add_subcommand("synth", "generate a synthetic cohort into <workspace>/raw");
    synth->add_option("--spec", spec_path, "cohort config file (same key = value format)")->check(CLI::ExistingFile);
    auto* clean = app.add_subcommand("clean", "select the participant and resample every raw log");
    auto* features = app.add_subcommand("features", "extract the 160 kinematic features per sequence");
    bool no_augment = false;
    auto* render = app.add_subcommand("render", "write heatmap volumes, manifest.csv and folds.csv");
    render->add_flag("--no-augment", no_augment, "originals only");
    std::string approach = "handcrafted";
    std::string predictions;
    auto* evaluate = app.add_subcommand("evaluate", "run the repeated cross-validation experiment");
    evaluate->add_option("--approach", approach, "handcrafted, endtoend or both")
        ->check(CLI::IsMember({"handcrafted", "endtoend", "both"}));
    evaluate->add_option("--predictions", predictions, "dl_predictions.csv (default <workspace>/dl_predictions.csv)");
    auto* compare = app.add_subcommand("compare", "Welch and Levene tests between model families");
    auto* report = app.add_subcommand("report", "rebuild report.csv and report.json from predictions");
    std::string model = "svm", task;
    auto* train = app.add_subcommand("train-classical", "fit one tuned classical model on all labelled subjects");
    train->add_option("--model", model, "svm or forest")->check(CLI::IsMember({"svm", "forest"}));
    train->add_option("--task", task, "task id")->required();
    auto* defaults = app.add_subcommand("defaults", "print every config key with its default");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*defaults) {
            std::cout << default_config_text();
            return 0;
        }
        const RunConfig cfg = load_config(g, *synth ? spec_path : std::string());
        if (*synth) return cmd_synth(cfg);
        if (*clean) return cmd_clean(cfg);
        if (*features) return cmd_features(cfg);
        if (*render) return cmd_render(cfg, !no_augment);
        if (*evaluate) return cmd_evaluate(cfg, approach, predictions);
        if (*compare) return cmd_compare(cfg);
        if (*report) return cmd_report(cfg);
        if (*train) return cmd_train(cfg, model, task);
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const InvariantError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
