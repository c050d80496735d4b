#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "helpers.hpp"
#include "kinemotion/errors.hpp"
#include "kinemotion/experiment.hpp"
#include "kinemotion/folds.hpp"
#include "kinemotion/metrics.hpp"

using namespace kinemotion;

namespace {

std::vector<SubjectLabel> cohort(int negatives, int positives) {
    std::vector<SubjectLabel> out;
    for (int i = 0; i < negatives + positives; ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "S%03d", i + 1);
        out.push_back({id, i < negatives ? 0 : 1});
    }
    return out;
}

/// One record per (model, task, fold, held-out subject), probabilities from `prob`.
template <typename F>
std::vector<PredictionRecord> records_for(const FoldPlan& plan, const std::vector<std::string>& tasks,
                                          const std::vector<std::string>& models, F prob) {
    std::vector<PredictionRecord> out;
    for (const auto& m : models) {
        for (const auto& t : tasks) {
            for (int f = 0; f < plan.evaluations(); ++f) {
                for (auto s : plan.test_subjects(f)) {
                    const auto& sub = plan.subjects()[s];
                    out.push_back({sub.subject_id, t, m, f, prob(m, t, f, sub), sub.label});
                }
            }
        }
    }
    return out;
}

double pop_sd(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x;
    m /= v.size();
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / v.size());
}

double avg(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x;
    return m / v.size();
}

std::vector<FeatureRow> planted_rows(int per_class, const std::vector<std::string>& tasks, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n01;
    std::vector<FeatureRow> rows;
    for (int i = 0; i < 2 * per_class; ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "S%03d", i + 1);
        const bool pos = i >= per_class;
        for (const auto& t : tasks) {
            FeatureRow r{id, t, pos ? Label::Positive : Label::Negative, {}};
            for (auto& v : r.features.values) v = n01(gen);
            for (std::size_t c = 0; c < 4; ++c) r.features.values[c] += pos ? 4.0 : 0.0;
            rows.push_back(r);
        }
    }
    return rows;
}

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.seed = 7;
    cfg.c_grid = {0.25, 4.0};
    cfg.depth_grid = {1, 2, 3};
    cfg.n_trees = 15;
    cfg.inner_folds = 3;
    cfg.inner_repeats = 1;
    return cfg;
}

}  // namespace

TEST_CASE("fold sizes for 42 negative and 39 positive subjects") {
    const auto plan = stratified_repeated_kfold(cohort(42, 39), 4, 2, 123);
    CHECK(plan.evaluations() == 8);
    plan.check();
    for (int r = 0; r < 2; ++r) {
        std::vector<int> neg(4, 0), pos(4, 0);
        for (std::size_t s = 0; s < plan.subjects().size(); ++s) {
            (plan.subjects()[s].label ? pos : neg)[plan.fold_of(r, s)]++;
        }
        std::sort(neg.rbegin(), neg.rend());
        std::sort(pos.rbegin(), pos.rend());
        CHECK(neg == std::vector<int>{11, 11, 10, 10});
        CHECK(pos == std::vector<int>{10, 10, 10, 9});
    }
    for (int f = 0; f < 8; ++f) {
        const auto test = plan.test_subjects(f), train = plan.train_subjects(f);
        CHECK(test.size() + train.size() == 81);
        for (auto s : test) CHECK(std::find(train.begin(), train.end(), s) == train.end());
    }
}

TEST_CASE("eight subjects give one per class per fold") {
    const auto plan = stratified_repeated_kfold(cohort(4, 4), 4, 2, 5);
    for (int f = 0; f < 8; ++f) {
        const auto test = plan.test_subjects(f);
        REQUIRE(test.size() == 2);
        CHECK(plan.subjects()[test[0]].label + plan.subjects()[test[1]].label == 1);
    }
}

TEST_CASE("fold plans are deterministic and seed dependent") {
    const auto a = stratified_repeated_kfold(cohort(20, 20), 4, 2, 99);
    const auto b = stratified_repeated_kfold(cohort(20, 20), 4, 2, 99);
    const auto c = stratified_repeated_kfold(cohort(20, 20), 4, 2, 100);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.to_csv() != c.to_csv());
    CHECK(a.to_csv().rfind("subject_id,label,repetition,fold,fold_id\n", 0) == 0);
}

TEST_CASE("too few subjects in a class") {
    CHECK_THROWS_AS(stratified_repeated_kfold(cohort(3, 10), 4, 2, 1), StratificationError);
}

TEST_CASE("leakage guard") {
    const auto plan = stratified_repeated_kfold(cohort(8, 8), 4, 2, 3);
    auto records = records_for(plan, {"T2A1"}, {std::string(kModelSvm)},
                               [](auto&&, auto&&, int, const SubjectLabel& s) { return s.label ? 0.7 : 0.2; });
    CHECK_NOTHROW(check_leakage(records, plan));
    const auto train = plan.train_subjects(2);
    auto bad = records;
    bad.push_back({plan.subjects()[train[0]].subject_id, "T2A1", std::string(kModelSvm), 2, 0.5,
                   plan.subjects()[train[0]].label});
    try {
        check_leakage(bad, plan);
        FAIL("leakage not detected");
    } catch (const InvariantError& e) {
        CHECK(e.invariant() == "leakage");
    }
    CHECK_THROWS_AS(build_report(bad, plan), InvariantError);
    auto unknown = records;
    unknown.push_back({"S999", "T2A1", std::string(kModelSvm), 0, 0.5, 0});
    CHECK_THROWS_AS(check_leakage(unknown, plan), InvariantError);
}

TEST_CASE("dl_predictions loader") {
    const auto plan = stratified_repeated_kfold(cohort(4, 4), 4, 2, 5);
    const auto t0 = plan.test_subjects(0);
    const auto t5 = plan.test_subjects(5);
    const auto& a = plan.subjects()[t0[0]];
    const auto& b = plan.subjects()[t5[1]];
    const std::string text = "probability,fold_id,task_id,subject_id,extra\n0.25,0,T2A1," + a.subject_id + ",x\n0.75,5,T2B1," +
                             b.subject_id + ",y\n";
    const auto recs = read_dl_predictions(text, plan);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].model_id == std::string(kModelDeep));
    CHECK(recs[0].subject_id == a.subject_id);
    CHECK(recs[0].label == a.label);
    CHECK(recs[0].probability == 0.25);
    CHECK(recs[1].fold_id == 5);
    CHECK(recs[1].label == b.label);

    const auto& trained = plan.subjects()[plan.train_subjects(0)[0]];
    const std::string leak = "subject_id,task_id,fold_id,probability\n" + trained.subject_id + ",T2A1,0,0.5\n";
    CHECK_THROWS_AS(read_dl_predictions(leak, plan), InvariantError);
    const std::string range = "subject_id,task_id,fold_id,probability\n" + a.subject_id + ",T2A1,0,1.5\n";
    CHECK_THROWS_AS(read_dl_predictions(range, plan), ParseError);
    const std::string fold = "subject_id,task_id,fold_id,probability\n" + a.subject_id + ",T2A1,8,0.5\n";
    CHECK_THROWS_AS(read_dl_predictions(fold, plan), InvariantError);
    CHECK_THROWS_AS(read_dl_predictions("subject_id,task_id,probability\nS001,T2A1,0.5\n", plan), ParseError);
}

TEST_CASE("prediction table round trip") {
    const auto plan = stratified_repeated_kfold(cohort(6, 6), 4, 2, 8);
    auto recs = records_for(plan, {"T2B1", "T2A1"}, {std::string(kModelForest), std::string(kModelSvm)},
                            [](auto&&, auto&&, int f, const SubjectLabel& s) { return 0.1 * (f % 5) + 0.3 * s.label; });
    const auto text = write_predictions(recs);
    auto back = read_predictions(text);
    CHECK(write_predictions(back) == text);
    sort_predictions(recs);
    REQUIRE(back.size() == recs.size());
    CHECK(back.front().model_id == std::string(kModelSvm));
    CHECK(back.front().task_id == "T2A1");
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(back[i].subject_id == recs[i].subject_id);
        CHECK(back[i].probability == recs[i].probability);
    }
}

TEST_CASE("report rows match direct per-fold computation") {
    const auto plan = stratified_repeated_kfold(cohort(12, 10), 4, 2, 21);
    const std::vector<std::string> tasks = {"T2A1", "T2A3", "T2B1"};
    const std::vector<std::string> models = {std::string(kModelSvm), std::string(kModelForest)};
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u;
    std::map<std::tuple<std::string, std::string, std::string, int>, double> draw;
    const auto recs = records_for(plan, tasks, models, [&](const std::string& m, const std::string& t, int f,
                                                          const SubjectLabel& s) {
        const double p = std::clamp(u(gen) * 0.8 + 0.3 * s.label, 0.0, 1.0);
        draw[{m, t, s.subject_id, f}] = p;
        return p;
    });
    const auto report = build_report(recs, plan);
    CHECK(report.tasks == tasks);
    CHECK(report.models == models);
    REQUIRE(report.rows.size() == tasks.size() * models.size() + 2 * models.size());

    for (const auto& m : models) {
        std::vector<std::vector<double>> fold_auc(8), fold_acc(8);
        for (const auto& t : tasks) {
            std::vector<double> acc, tpr, tnr, auc;
            for (int f = 0; f < 8; ++f) {
                std::vector<double> p;
                std::vector<int> y;
                for (auto s : plan.test_subjects(f)) {
                    p.push_back(draw[{m, t, plan.subjects()[s].subject_id, f}]);
                    y.push_back(plan.subjects()[s].label);
                }
                double tp = 0, tn = 0, pos = 0, neg = 0;
                for (std::size_t i = 0; i < p.size(); ++i) {
                    (y[i] ? pos : neg) += 1;
                    tp += y[i] && p[i] >= 0.5;
                    tn += !y[i] && p[i] < 0.5;
                }
                acc.push_back((tp + tn) / (pos + neg));
                tpr.push_back(tp / pos);
                tnr.push_back(tn / neg);
                auc.push_back(roc_auc(p, y));
                fold_auc[f].push_back(auc.back());
                fold_acc[f].push_back(acc.back());
            }
            const auto* row = report.find(t, m);
            REQUIRE(row);
            CHECK(row->folds.size() == 8);
            CHECK(row->accuracy.mean == doctest::Approx(avg(acc)).epsilon(1e-12));
            CHECK(row->accuracy.sd == doctest::Approx(pop_sd(acc)).epsilon(1e-12));
            CHECK(row->tpr.mean == doctest::Approx(avg(tpr)).epsilon(1e-12));
            CHECK(row->tnr.sd == doctest::Approx(pop_sd(tnr)).epsilon(1e-12));
            CHECK(row->auc.mean == doctest::Approx(avg(auc)).epsilon(1e-12));
            CHECK(row->auc.sd == doctest::Approx(pop_sd(auc)).epsilon(1e-12));
        }
        std::vector<double> mean_auc, mean_acc;
        for (int f = 0; f < 8; ++f) {
            mean_auc.push_back(avg(fold_auc[f]));
            mean_acc.push_back(avg(fold_acc[f]));
        }
        const auto* mean = report.find(kMeanRow, m);
        REQUIRE(mean);
        CHECK(mean->auc.mean == doctest::Approx(avg(mean_auc)).epsilon(1e-12));
        CHECK(mean->auc.sd == doctest::Approx(pop_sd(mean_auc)).epsilon(1e-12));
        CHECK(mean->accuracy.sd == doctest::Approx(pop_sd(mean_acc)).epsilon(1e-12));

        std::vector<double> vote_auc;
        for (int f = 0; f < 8; ++f) {
            std::vector<double> p;
            std::vector<int> y;
            for (auto s : plan.test_subjects(f)) {
                double sum = 0;
                for (const auto& t : tasks) sum += draw[{m, t, plan.subjects()[s].subject_id, f}];
                p.push_back(sum / tasks.size());
                y.push_back(plan.subjects()[s].label);
            }
            vote_auc.push_back(roc_auc(p, y));
        }
        const auto* vote = report.find(kVotingRow, m);
        REQUIRE(vote);
        CHECK(vote->auc.mean == doctest::Approx(avg(vote_auc)).epsilon(1e-12));
        CHECK(vote->auc.sd == doctest::Approx(pop_sd(vote_auc)).epsilon(1e-12));

        const auto pooled = pooled_aucs(report, m);
        CHECK(pooled.size() == 24);
    }
    REQUIRE(report.comparisons.size() == 1);
    CHECK(report.comparisons[0].n_a == 24);
    CHECK(report.comparisons[0].valid);
    const auto a = pooled_aucs(report, models[0]), b = pooled_aucs(report, models[1]);
    CHECK(report.comparisons[0].welch.statistic == welch_ttest(a, b).statistic);
    for (const auto& row : report.rows) {
        for (const auto& fm : row.folds) {
            const double P = fm.confusion.positives(), N = fm.confusion.negatives();
            CHECK(fm.confusion.tp + fm.confusion.tn == doctest::Approx(fm.confusion.tpr * P + fm.confusion.tnr * N));
        }
    }
    CHECK(report.roc.at(models[0]).fpr.size() == kRocGridPoints);
}

TEST_CASE("report csv layout") {
    const auto plan = stratified_repeated_kfold(cohort(4, 4), 4, 2, 5);
    const auto recs = records_for(plan, {"T2A3", "T2A1"}, {std::string(kModelForest), std::string(kModelSvm)},
                                  [](const std::string& m, auto&&, int, const SubjectLabel& s) {
                                      return m == kModelSvm ? (s.label ? 0.8 : 0.3) : 0.6;
                                  });
    const auto report = build_report(recs, plan);
    const auto golden = testutil::read_text(std::string(KINEMOTION_GOLDEN_DIR) + "/report_layout.csv");
    CHECK(report_csv(report) == golden);
}

TEST_CASE("percent cells") {
    CHECK(percent_cell({0.9, 0.06, 8}) == "90±06");
    CHECK(percent_cell({1.0, 0.0, 8}) == "100±00");
    CHECK(percent_cell({0.054, 0.004, 8}) == "05±00");
    CHECK(percent_cell({0.0, 0.0, 0}) == "n/a");
    const std::vector<double> v = {0.5, std::nan(""), 1.0};
    const auto ms = mean_sd(v);
    CHECK(ms.n == 2);
    CHECK(ms.mean == 0.75);
    CHECK(ms.sd == 0.25);
}

TEST_CASE("report guards") {
    const auto plan = stratified_repeated_kfold(cohort(4, 4), 4, 2, 5);
    auto recs = records_for(plan, {"T2A1"}, {std::string(kModelSvm)},
                            [](auto&&, auto&&, int, const SubjectLabel& s) { return s.label ? 0.8 : 0.3; });
    auto dup = recs;
    dup.push_back(recs.front());
    CHECK_THROWS_AS(build_report(dup, plan), InvariantError);
    auto flipped = recs;
    flipped.front().label = 1 - flipped.front().label;
    CHECK_THROWS_AS(build_report(flipped, plan), InvariantError);
    CHECK_NOTHROW(report_json(build_report(recs, plan), plan));
}

TEST_CASE("single class fold gives an undefined auc") {
    const auto plan = stratified_repeated_kfold(cohort(4, 4), 4, 2, 5);
    std::vector<PredictionRecord> recs;
    for (auto s : plan.test_subjects(0)) {
        if (plan.subjects()[s].label == 1) recs.push_back({plan.subjects()[s].subject_id, "T2A1", std::string(kModelSvm), 0, 0.7, 1});
    }
    const auto report = build_report(recs, plan);
    const auto* row = report.find("T2A1", kModelSvm);
    REQUIRE(row);
    CHECK(std::isnan(row->folds[0].auc));
    CHECK(percent_cell(row->auc) == "n/a");
    CHECK(percent_cell(row->tpr) == "100±00");
    const auto json = report_json(report, plan);
    CHECK(json.find("null") != std::string::npos);
}

TEST_CASE("handcrafted run is leakage free and independent of the job count") {
    const std::vector<std::string> tasks = {"T2A1", "T2B1"};
    const auto rows = planted_rows(8, tasks, 12);
    auto cfg = small_config();
    const auto plan = plan_for_rows(rows, cfg);
    CHECK(plan.subjects().size() == 16);
    cfg.jobs = 1;
    const auto one = run_handcrafted(rows, plan, cfg);
    cfg.jobs = 4;
    const auto four = run_handcrafted(rows, plan, cfg);
    CHECK(one.size() == 2 * 2 * 16 * 2);
    CHECK(write_predictions(one) == write_predictions(four));
    CHECK_NOTHROW(check_leakage(one, plan));
    const auto report = build_report(one, plan);
    CHECK(report_csv(report) == report_csv(build_report(four, plan)));
}

TEST_CASE("unlabelled and inconsistent rows") {
    auto rows = planted_rows(6, {"T2A1", "T2A3"}, 3);
    rows[0].label.reset();
    rows[1].label.reset();
    const auto cfg = small_config();
    const auto plan = plan_for_rows(rows, cfg);
    CHECK(plan.subjects().size() == 11);
    CHECK(plan.find(rows[0].subject_id) == FoldPlan::npos);

    auto bad = planted_rows(6, {"T2A1", "T2A3"}, 3);
    bad[1].label = Label::Positive;
    CHECK_THROWS_AS(plan_for_rows(bad, cfg), InvariantError);
}
