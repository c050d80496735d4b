#include "kinemotion/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <tuple>

#include <json.hpp>

#include "kinemotion/errors.hpp"
#include "kinemotion/joints.hpp"
#include "kinemotion/matrix.hpp"
#include "kinemotion/parallel.hpp"
#include "kinemotion/random_forest.hpp"
#include "kinemotion/rfecv.hpp"
#include "kinemotion/rng.hpp"
#include "kinemotion/text.hpp"

namespace kinemotion {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool task_less(const std::string& a, const std::string& b) {
    const auto oa = task_order(a), ob = task_order(b);
    return oa != ob ? oa < ob : a < b;
}

std::vector<std::string> ordered_tasks(std::set<std::string> tasks) {
    std::vector<std::string> out(tasks.begin(), tasks.end());
    std::sort(out.begin(), out.end(), task_less);
    return out;
}

}  // namespace

int model_order(std::string_view model_id) {
    if (model_id == kModelDeep) return 0;
    if (model_id == kModelSvm) return 1;
    if (model_id == kModelForest) return 2;
    return 3;
}

void ExperimentConfig::validate() const {
    if (folds < 2) throw ConfigError("folds must be at least 2");
    if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
    if (depth_grid.empty()) throw ConfigError("depth grid is empty");
    for (int d : depth_grid) {
        if (d < 1) throw ConfigError("depths must be positive");
    }
    for (double c : c_grid) {
        if (!(c > 0.0)) throw ConfigError("C values must be positive");
    }
    if (n_trees < 1) throw ConfigError("n_trees must be positive");
    if (inner_folds < 2 || inner_repeats < 1) throw ConfigError("inner CV needs >= 2 folds and >= 1 repeat");
    if (!svm && !forest) throw ConfigError("no model family enabled");
}

FoldPlan plan_for_rows(std::span<const FeatureRow> rows, const ExperimentConfig& cfg) {
    std::map<std::string, int> labels;
    for (const auto& r : rows) {
        if (!r.label) continue;
        const int y = *r.label == Label::Positive ? 1 : 0;
        auto [it, inserted] = labels.emplace(r.subject_id, y);
        if (!inserted && it->second != y) {
            throw InvariantError("label consistency", "subject " + r.subject_id + " has conflicting labels");
        }
    }
    std::vector<SubjectLabel> subjects;
    for (const auto& [id, y] : labels) subjects.push_back({id, y});
    return stratified_repeated_kfold(std::move(subjects), cfg.folds, cfg.repetitions, cfg.seed);
}

void check_leakage(std::span<const PredictionRecord> records, const FoldPlan& plan) {
    for (const auto& r : records) {
        const auto s = plan.find(r.subject_id);
        if (s == FoldPlan::npos) {
            throw InvariantError("leakage", "prediction for unplanned subject " + r.subject_id);
        }
        if (r.fold_id < 0 || r.fold_id >= plan.evaluations()) {
            throw InvariantError("leakage", "fold_id " + std::to_string(r.fold_id) + " out of range");
        }
        if (!plan.is_test(r.fold_id, s)) {
            throw InvariantError("leakage", "subject " + r.subject_id + " is a training subject of fold " +
                                                std::to_string(r.fold_id));
        }
    }
}

std::vector<PredictionRecord> run_handcrafted(std::span<const FeatureRow> rows, const FoldPlan& plan,
                                              const ExperimentConfig& cfg) {
    cfg.validate();
    std::set<std::string> task_set;
    for (const auto& r : rows) {
        if (r.label && plan.find(r.subject_id) != FoldPlan::npos) task_set.insert(r.task_id);
    }
    const auto tasks = ordered_tasks(std::move(task_set));

    struct Job {
        int fold_id;
        std::size_t task;
        bool svm;
    };
    std::vector<Job> jobs;
    for (int f = 0; f < plan.evaluations(); ++f) {
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            if (cfg.svm) jobs.push_back({f, t, true});
            if (cfg.forest) jobs.push_back({f, t, false});
        }
    }

    std::vector<std::vector<PredictionRecord>> out(jobs.size());
    parallel_for(jobs.size(), cfg.jobs, [&](std::size_t j) {
        const Job& job = jobs[j];
        const std::string& task = tasks[job.task];
        std::vector<const FeatureRow*> train, test;
        std::set<std::string> train_ids;
        for (const auto& r : rows) {
            if (r.task_id != task || !r.label) continue;
            const auto s = plan.find(r.subject_id);
            if (s == FoldPlan::npos) continue;
            if (plan.is_test(job.fold_id, s)) {
                test.push_back(&r);
            } else {
                train.push_back(&r);
                train_ids.insert(r.subject_id);
            }
        }
        for (const auto* r : test) {
            if (train_ids.count(r->subject_id)) {
                throw InvariantError("leakage", "subject " + r->subject_id + " in both partitions of fold " +
                                                    std::to_string(job.fold_id));
            }
        }
        if (test.empty()) return;

        Matrix x(train.size(), kFeatureCount);
        std::vector<int> y(train.size());
        for (std::size_t i = 0; i < train.size(); ++i) {
            std::copy(train[i]->features.values.begin(), train[i]->features.values.end(), x.row(i).begin());
            y[i] = *train[i]->label == Label::Positive ? 1 : 0;
        }
        const std::uint64_t seed =
            derive_seed(cfg.seed, {static_cast<std::uint64_t>(job.fold_id), hash_string(task), job.svm ? 1u : 2u});

        std::vector<double> probs(test.size());
        if (job.svm) {
            RfecvOptions opts;
            if (!cfg.c_grid.empty()) opts.c_grid = cfg.c_grid;
            opts.selection_folds = cfg.inner_folds;
            opts.tuning_folds = cfg.inner_folds;
            opts.tuning_repeats = cfg.inner_repeats;
            opts.seed = seed;
            const auto result = rfecv_select(x, y, opts);
            for (std::size_t i = 0; i < test.size(); ++i) probs[i] = result.pipeline.probability(test[i]->features.values);
        } else {
            DepthTuningOptions opts;
            opts.depth_grid = cfg.depth_grid;
            opts.folds = cfg.inner_folds;
            opts.repeats = cfg.inner_repeats;
            opts.n_trees = cfg.n_trees;
            opts.seed = derive_seed(seed, {1});
            const auto tuning = tune_depth(x, y, opts);
            const auto forest = train_random_forest(x, y, tuning.best_depth, cfg.n_trees, derive_seed(seed, {2}));
            for (std::size_t i = 0; i < test.size(); ++i) probs[i] = forest.probability(test[i]->features.values);
        }

        auto& dst = out[j];
        for (std::size_t i = 0; i < test.size(); ++i) {
            dst.push_back({test[i]->subject_id, task, std::string(job.svm ? kModelSvm : kModelForest), job.fold_id,
                           probs[i], *test[i]->label == Label::Positive ? 1 : 0});
        }
    });

    std::vector<PredictionRecord> records;
    for (auto& part : out) {
        for (auto& r : part) records.push_back(std::move(r));
    }
    sort_predictions(records);
    check_leakage(records, plan);
    return records;
}

void sort_predictions(std::vector<PredictionRecord>& records) {
    std::sort(records.begin(), records.end(), [](const PredictionRecord& a, const PredictionRecord& b) {
        const int ma = model_order(a.model_id), mb = model_order(b.model_id);
        if (ma != mb) return ma < mb;
        if (a.model_id != b.model_id) return a.model_id < b.model_id;
        if (a.task_id != b.task_id) return task_less(a.task_id, b.task_id);
        if (a.fold_id != b.fold_id) return a.fold_id < b.fold_id;
        return a.subject_id < b.subject_id;
    });
}

namespace {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::pair<std::size_t, std::vector<std::string_view>>> rows;  // (line number, cells)

    std::size_t column(const std::string& name) const {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ParseError(1, "missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    }
};

CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    const auto lines = split(text, '\n');
    std::size_t li = 0;
    while (li < lines.size() && trim(lines[li]).empty()) ++li;
    if (li == lines.size()) throw EmptyInputError("empty CSV");
    for (auto h : split(trim(lines[li]), ',')) table.header.emplace_back(trim(h));
    for (++li; li < lines.size(); ++li) {
        const auto line = trim(lines[li]);
        if (line.empty()) continue;
        auto cells = split(line, ',');
        for (auto& c : cells) c = trim(c);
        if (cells.size() != table.header.size()) {
            throw ParseError(li + 1, "expected " + std::to_string(table.header.size()) + " columns, found " +
                                         std::to_string(cells.size()));
        }
        table.rows.emplace_back(li + 1, std::move(cells));
    }
    return table;
}

double parse_probability(std::string_view cell, std::size_t line) {
    const auto p = parse_double(cell);
    if (!p || !(*p >= 0.0 && *p <= 1.0)) throw ParseError(line, "probability must lie in [0, 1]");
    return *p;
}

int parse_fold(std::string_view cell, std::size_t line) {
    const auto f = parse_int(cell);
    if (!f || *f < 0 || *f > std::numeric_limits<int>::max()) throw ParseError(line, "bad fold_id");
    return static_cast<int>(*f);
}

}  // namespace

std::vector<PredictionRecord> read_dl_predictions(std::string_view text, const FoldPlan& plan) {
    const auto table = parse_csv(text);
    const auto c_subject = table.column("subject_id"), c_task = table.column("task_id"),
               c_fold = table.column("fold_id"), c_prob = table.column("probability");
    std::vector<PredictionRecord> records;
    for (const auto& [line, cells] : table.rows) {
        PredictionRecord r;
        r.subject_id = std::string(cells[c_subject]);
        r.task_id = std::string(cells[c_task]);
        if (r.subject_id.empty() || r.task_id.empty()) throw ParseError(line, "empty id");
        r.model_id = std::string(kModelDeep);
        r.fold_id = parse_fold(cells[c_fold], line);
        r.probability = parse_probability(cells[c_prob], line);
        const auto s = plan.find(r.subject_id);
        if (s != FoldPlan::npos) r.label = plan.subjects()[s].label;
        records.push_back(std::move(r));
    }
    check_leakage(records, plan);
    sort_predictions(records);
    return records;
}

std::string write_predictions(std::span<const PredictionRecord> records) {
    std::vector<PredictionRecord> sorted(records.begin(), records.end());
    sort_predictions(sorted);
    std::string out = "subject_id,task_id,model_id,fold_id,label,probability\n";
    for (const auto& r : sorted) {
        out += r.subject_id + ',' + r.task_id + ',' + r.model_id + ',' + std::to_string(r.fold_id) + ',' +
               std::to_string(r.label) + ',' + format_double(r.probability) + '\n';
    }
    return out;
}

std::vector<PredictionRecord> read_predictions(std::string_view text) {
    const auto table = parse_csv(text);
    const auto c_subject = table.column("subject_id"), c_task = table.column("task_id"),
               c_model = table.column("model_id"), c_fold = table.column("fold_id"), c_label = table.column("label"),
               c_prob = table.column("probability");
    std::vector<PredictionRecord> records;
    for (const auto& [line, cells] : table.rows) {
        PredictionRecord r;
        r.subject_id = std::string(cells[c_subject]);
        r.task_id = std::string(cells[c_task]);
        r.model_id = std::string(cells[c_model]);
        r.fold_id = parse_fold(cells[c_fold], line);
        r.probability = parse_probability(cells[c_prob], line);
        if (cells[c_label] != "0" && cells[c_label] != "1") throw ParseError(line, "label must be 0 or 1");
        r.label = cells[c_label] == "1" ? 1 : 0;
        records.push_back(std::move(r));
    }
    return records;
}

MeanSd mean_sd(std::span<const double> values) {
    MeanSd out;
    double sum = 0.0;
    for (double v : values) {
        if (std::isnan(v)) continue;
        sum += v;
        ++out.n;
    }
    if (out.n == 0) return {kNaN, kNaN, 0};
    out.mean = sum / static_cast<double>(out.n);
    double ss = 0.0;
    for (double v : values) {
        if (!std::isnan(v)) ss += (v - out.mean) * (v - out.mean);
    }
    out.sd = std::sqrt(ss / static_cast<double>(out.n));
    return out;
}

const ReportRow* ModelReport::find(std::string_view game, std::string_view model) const {
    for (const auto& r : rows) {
        if (r.game == game && r.model == model) return &r;
    }
    return nullptr;
}

namespace {

void check_metrics(const ConfusionMetrics& m, double auc, const std::string& where) {
    auto in_unit = [](double v) { return std::isnan(v) || (v >= 0.0 && v <= 1.0); };
    if (!in_unit(m.accuracy) || !in_unit(m.tpr) || !in_unit(m.tnr) || !in_unit(auc)) {
        throw InvariantError("metric range", where);
    }
    const double p = static_cast<double>(m.positives()), n = static_cast<double>(m.negatives());
    const double rebuilt = (p > 0 ? m.tpr * p : 0.0) + (n > 0 ? m.tnr * n : 0.0);
    const double correct = static_cast<double>(m.tp + m.tn);
    if (std::abs(rebuilt - correct) > 1e-9 * (p + n) || std::abs(m.accuracy * (p + n) - correct) > 1e-9 * (p + n)) {
        throw InvariantError("accuracy identity", where);
    }
}

FoldMetrics score_fold(int fold_id, const std::vector<double>& probs, const std::vector<int>& labels,
                       const std::string& where) {
    FoldMetrics fm;
    fm.fold_id = fold_id;
    fm.confusion = confusion_metrics(probs, labels);
    const bool both = std::find(labels.begin(), labels.end(), 0) != labels.end() &&
                      std::find(labels.begin(), labels.end(), 1) != labels.end();
    fm.auc = both ? roc_auc(probs, labels) : kNaN;
    check_metrics(fm.confusion, fm.auc, where + " fold " + std::to_string(fold_id));
    return fm;
}

void summarize_row(ReportRow& row) {
    std::vector<double> acc, tpr, tnr, auc;
    for (const auto& f : row.folds) {
        acc.push_back(f.confusion.accuracy);
        tpr.push_back(f.confusion.tpr);
        tnr.push_back(f.confusion.tnr);
        auc.push_back(f.auc);
    }
    row.accuracy = mean_sd(acc);
    row.tpr = mean_sd(tpr);
    row.tnr = mean_sd(tnr);
    row.auc = mean_sd(auc);
}

double nan_mean(const std::vector<double>& v) {
    return mean_sd(v).mean;
}

}  // namespace

ModelReport build_report(std::span<const PredictionRecord> records, const FoldPlan& plan) {
    check_leakage(records, plan);
    ModelReport report;
    std::set<std::string> task_set;
    std::set<std::string> model_set;
    // (model, task, fold) -> (probability, label)
    std::map<std::tuple<std::string, std::string, int>, std::pair<std::vector<double>, std::vector<int>>> groups;
    std::set<std::tuple<std::string, std::string, std::string, int>> seen;
    for (const auto& r : records) {
        const auto s = plan.find(r.subject_id);
        if (plan.subjects()[s].label != r.label) {
            throw InvariantError("label consistency", "subject " + r.subject_id + " label differs from the fold plan");
        }
        if (!seen.emplace(r.model_id, r.task_id, r.subject_id, r.fold_id).second) {
            throw InvariantError("unique prediction", r.model_id + "/" + r.task_id + "/" + r.subject_id +
                                                          " fold " + std::to_string(r.fold_id));
        }
        task_set.insert(r.task_id);
        model_set.insert(r.model_id);
        auto& g = groups[{r.model_id, r.task_id, r.fold_id}];
        g.first.push_back(r.probability);
        g.second.push_back(r.label);
    }
    report.tasks = ordered_tasks(task_set);
    report.models.assign(model_set.begin(), model_set.end());
    std::stable_sort(report.models.begin(), report.models.end(),
                     [](const std::string& a, const std::string& b) { return model_order(a) < model_order(b); });

    const int n_folds = plan.evaluations();
    for (const auto& task : report.tasks) {
        for (const auto& model : report.models) {
            ReportRow row;
            row.game = task;
            row.model = model;
            for (int f = 0; f < n_folds; ++f) {
                auto it = groups.find({model, task, f});
                if (it == groups.end()) continue;
                row.folds.push_back(score_fold(f, it->second.first, it->second.second, model + "/" + task));
            }
            if (row.folds.empty()) continue;
            summarize_row(row);
            report.rows.push_back(std::move(row));
        }
    }

    for (const auto& model : report.models) {
        // per fold, average each metric over tasks; then summarize across folds
        std::vector<double> acc(n_folds, kNaN), tpr(n_folds, kNaN), tnr(n_folds, kNaN), auc(n_folds, kNaN);
        for (int f = 0; f < n_folds; ++f) {
            std::vector<double> a, p, n, u;
            for (const auto& row : report.rows) {
                if (row.model != model) continue;
                for (const auto& fm : row.folds) {
                    if (fm.fold_id != f) continue;
                    a.push_back(fm.confusion.accuracy);
                    p.push_back(fm.confusion.tpr);
                    n.push_back(fm.confusion.tnr);
                    u.push_back(fm.auc);
                }
            }
            if (a.empty()) continue;
            acc[f] = nan_mean(a);
            tpr[f] = nan_mean(p);
            tnr[f] = nan_mean(n);
            auc[f] = nan_mean(u);
        }
        ReportRow mean_row;
        mean_row.game = std::string(kMeanRow);
        mean_row.model = model;
        mean_row.accuracy = mean_sd(acc);
        mean_row.tpr = mean_sd(tpr);
        mean_row.tnr = mean_sd(tnr);
        mean_row.auc = mean_sd(auc);
        report.rows.push_back(std::move(mean_row));
    }

    for (const auto& model : report.models) {
        ReportRow row;
        row.game = std::string(kVotingRow);
        row.model = model;
        for (int f = 0; f < n_folds; ++f) {
            std::map<std::string, std::vector<double>> per_subject;
            for (const auto& r : records) {
                if (r.model_id == model && r.fold_id == f) per_subject[r.subject_id].push_back(r.probability);
            }
            if (per_subject.empty()) continue;
            std::vector<double> probs;
            std::vector<int> labels;
            for (const auto& [id, ps] : per_subject) {
                probs.push_back(ensemble_vote(std::span<const double>(ps)));
                labels.push_back(plan.subjects()[plan.find(id)].label);
            }
            row.folds.push_back(score_fold(f, probs, labels, model + "/voting"));
        }
        if (row.folds.empty()) continue;
        summarize_row(row);
        report.rows.push_back(std::move(row));
    }

    for (const auto& model : report.models) {
        std::vector<ScoredSet> sets;
        for (const auto& task : report.tasks) {
            for (int f = 0; f < n_folds; ++f) {
                auto it = groups.find({model, task, f});
                if (it == groups.end()) continue;
                const auto& labels = it->second.second;
                if (std::find(labels.begin(), labels.end(), 0) == labels.end() ||
                    std::find(labels.begin(), labels.end(), 1) == labels.end()) {
                    continue;
                }
                sets.push_back({it->second.first, labels});
            }
        }
        if (sets.size() >= 2) report.roc[model] = mean_roc_curve(sets);
    }

    for (std::size_t a = 0; a < report.models.size(); ++a) {
        for (std::size_t b = a + 1; b < report.models.size(); ++b) {
            ModelComparison cmp;
            cmp.model_a = report.models[a];
            cmp.model_b = report.models[b];
            const auto xa = pooled_aucs(report, cmp.model_a);
            const auto xb = pooled_aucs(report, cmp.model_b);
            cmp.n_a = xa.size();
            cmp.n_b = xb.size();
            if (xa.size() >= 2 && xb.size() >= 2) {
                try {
                    cmp.welch = welch_ttest(xa, xb);
                    cmp.levene = levene_test(xa, xb);
                    cmp.valid = true;
                } catch (const DegenerateError&) {
                    cmp.valid = false;
                }
            }
            report.comparisons.push_back(std::move(cmp));
        }
    }
    return report;
}

std::vector<double> pooled_aucs(const ModelReport& report, std::string_view model) {
    std::vector<double> out;
    for (const auto& row : report.rows) {
        if (row.model != model || row.game == kMeanRow || row.game == kVotingRow) continue;
        for (const auto& f : row.folds) {
            if (!std::isnan(f.auc)) out.push_back(f.auc);
        }
    }
    return out;
}

std::string percent_cell(const MeanSd& v) {
    if (v.n == 0 || std::isnan(v.mean)) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02ld±%02ld", std::lround(100.0 * v.mean), std::lround(100.0 * v.sd));
    return buf;
}

std::string report_csv(const ModelReport& report) {
    std::string out = "game,model,accuracy,tpr,tnr,auc\n";
    for (const auto& row : report.rows) {
        out += row.game + ',' + row.model + ',' + percent_cell(row.accuracy) + ',' + percent_cell(row.tpr) + ',' +
               percent_cell(row.tnr) + ',' + percent_cell(row.auc) + '\n';
    }
    return out;
}

namespace {

nlohmann::ordered_json num(double v) {
    if (std::isnan(v) || std::isinf(v)) return nullptr;
    return v;
}

nlohmann::ordered_json summary_json(const MeanSd& v) {
    return {{"mean", num(v.mean)}, {"sd", num(v.sd)}, {"n", v.n}};
}

nlohmann::ordered_json test_json(const TestResult& t, bool levene) {
    nlohmann::ordered_json j;
    j["statistic"] = num(t.statistic);
    j["p_value"] = num(t.p_value);
    if (levene) {
        j["df1"] = num(t.df1);
        j["df2"] = num(t.df2);
    } else {
        j["df"] = num(t.df1);
    }
    return j;
}

}  // namespace

std::string report_json(const ModelReport& report, const FoldPlan& plan) {
    nlohmann::ordered_json j;
    j["format"] = "kinemotion-report";
    j["version"] = 1;
    j["plan"] = {{"folds", plan.folds()},
                 {"repetitions", plan.repetitions()},
                 {"evaluations", plan.evaluations()},
                 {"seed", plan.seed()},
                 {"subjects", plan.subjects().size()}};
    j["threshold"] = 0.5;
    j["sd"] = "population";
    j["tasks"] = report.tasks;
    j["models"] = report.models;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json r;
        r["game"] = row.game;
        r["model"] = row.model;
        r["accuracy"] = summary_json(row.accuracy);
        r["tpr"] = summary_json(row.tpr);
        r["tnr"] = summary_json(row.tnr);
        r["auc"] = summary_json(row.auc);
        auto folds = nlohmann::ordered_json::array();
        for (const auto& f : row.folds) {
            folds.push_back({{"fold_id", f.fold_id},
                             {"accuracy", num(f.confusion.accuracy)},
                             {"tpr", num(f.confusion.tpr)},
                             {"tnr", num(f.confusion.tnr)},
                             {"auc", num(f.auc)},
                             {"tp", f.confusion.tp},
                             {"fn", f.confusion.fn},
                             {"tn", f.confusion.tn},
                             {"fp", f.confusion.fp}});
        }
        r["folds"] = std::move(folds);
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    auto roc = nlohmann::ordered_json::object();
    for (const auto& model : report.models) {
        auto it = report.roc.find(model);
        if (it == report.roc.end()) continue;
        nlohmann::ordered_json band;
        band["fpr"] = it->second.fpr;
        band["mean_tpr"] = it->second.mean_tpr;
        band["sd_tpr"] = it->second.sd_tpr;
        roc[model] = std::move(band);
    }
    j["roc"] = std::move(roc);
    auto cmps = nlohmann::ordered_json::array();
    for (const auto& c : report.comparisons) {
        nlohmann::ordered_json cj;
        cj["model_a"] = c.model_a;
        cj["model_b"] = c.model_b;
        cj["n_a"] = c.n_a;
        cj["n_b"] = c.n_b;
        cj["samples"] = "per (task, fold) AUC, pooled";
        if (c.valid) {
            cj["t_test"] = test_json(c.welch, false);
            cj["t_test"]["variant"] = "Welch, unpaired, two-sided";
            cj["levene"] = test_json(c.levene, true);
            cj["levene"]["center"] = "mean";
        } else {
            cj["t_test"] = nullptr;
            cj["levene"] = nullptr;
        }
        cmps.push_back(std::move(cj));
    }
    j["comparisons"] = std::move(cmps);
    return j.dump(2) + '\n';
}

}  // namespace kinemotion
