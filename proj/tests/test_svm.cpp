#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "kinemotion/errors.hpp"
#include "kinemotion/folds.hpp"
#include "kinemotion/linear_svm.hpp"
#include "kinemotion/metrics.hpp"
#include "kinemotion/model_io.hpp"
#include "kinemotion/rfecv.hpp"

using namespace kinemotion;

namespace {

struct Data {
    Matrix x;
    std::vector<int> y;
};

Data blobs(std::size_t per_class, double gap, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    Data d{Matrix(2 * per_class, 2), {}};
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const int label = i < per_class ? 0 : 1;
        const double centre = label ? gap / 2 + 0.5 : -gap / 2 - 0.5;
        d.x(i, 0) = centre + u(gen);
        d.x(i, 1) = u(gen) * 4;
        d.y.push_back(label);
    }
    return d;
}

/// Rows with `informative` class-shifted columns followed by noise columns.
Data planted(std::size_t n, std::size_t informative, std::size_t noise, std::uint64_t seed,
             std::vector<std::size_t> positions = {}, double shift = 3.0) {
    const std::size_t d = informative + noise;
    if (positions.empty()) {
        for (std::size_t i = 0; i < informative; ++i) positions.push_back(i);
    }
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n01;
    Data out{Matrix(n, d), {}};
    for (std::size_t r = 0; r < n; ++r) {
        const int label = static_cast<int>(r % 2);
        out.y.push_back(label);
        for (std::size_t c = 0; c < d; ++c) out.x(r, c) = n01(gen);
        for (auto c : positions) out.x(r, c) += shift * label;
    }
    return out;
}

/// min over b of the primal objective; the optimum sits at a hinge breakpoint.
double objective_at(double w0, double w1, const Matrix& x, const std::vector<int>& y, double C) {
    double best = INFINITY;
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double yk = y[k] ? 1.0 : -1.0;
        const double b = yk - (w0 * x(k, 0) + w1 * x(k, 1));
        double obj = 0.5 * (w0 * w0 + w1 * w1);
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double yi = y[i] ? 1.0 : -1.0;
            obj += C * std::max(0.0, 1.0 - yi * (w0 * x(i, 0) + w1 * x(i, 1) + b));
        }
        best = std::min(best, obj);
    }
    return best;
}

/// Exhaustive grid over w, refined twice around the incumbent.
double grid_oracle(const Matrix& x, const std::vector<int>& y, double C) {
    double c0 = 0, c1 = 0, half = 4.0, step = 0.01;
    double best = INFINITY;
    for (int level = 0; level < 3; ++level) {
        double b0 = c0, b1 = c1;
        const int steps = static_cast<int>(std::round(2 * half / step));
        for (int i = 0; i <= steps; ++i) {
            for (int j = 0; j <= steps; ++j) {
                const double w0 = c0 - half + i * step, w1 = c1 - half + j * step;
                const double v = objective_at(w0, w1, x, y, C);
                if (v < best) {
                    best = v;
                    b0 = w0;
                    b1 = w1;
                }
            }
        }
        c0 = b0;
        c1 = b1;
        half = 5 * step;
        step /= 50;
    }
    return best;
}

std::vector<double> decisions(const LinearModel& m, const Matrix& x) {
    std::vector<double> out;
    for (std::size_t r = 0; r < x.rows(); ++r) out.push_back(m.decision(x.row(r)));
    return out;
}

}  // namespace

TEST_CASE("standardizer") {
    Data d = planted(30, 2, 3, 5);
    for (std::size_t r = 0; r < 30; ++r) d.x(r, 4) = 7.25;
    const auto s = Standardizer::fit(d.x);
    const Matrix z = s.transform(d.x);
    for (std::size_t c = 0; c < 4; ++c) {
        double m = 0, v = 0;
        for (std::size_t r = 0; r < z.rows(); ++r) m += z(r, c);
        m /= z.rows();
        for (std::size_t r = 0; r < z.rows(); ++r) v += (z(r, c) - m) * (z(r, c) - m);
        CHECK(std::abs(m) < 1e-9);
        CHECK(std::abs(std::sqrt(v / z.rows()) - 1) < 1e-9);
    }
    for (std::size_t r = 0; r < z.rows(); ++r) CHECK(z(r, 4) == 0.0);

    // statistics depend on the rows passed to fit and nothing else
    std::vector<std::size_t> train = {0, 3, 4, 9, 12, 20};
    const auto a = Standardizer::fit(d.x.select_rows(train));
    Matrix altered = d.x;
    for (std::size_t r = 0; r < altered.rows(); ++r) {
        if (std::find(train.begin(), train.end(), r) == train.end()) altered(r, 0) = 1e6;
    }
    const auto b = Standardizer::fit(altered.select_rows(train));
    CHECK(a.mean() == b.mean());
    CHECK(a.sd() == b.sd());
    CHECK_THROWS_AS(Standardizer::fit(Matrix(0, 3)), EmptyInputError);
}

TEST_CASE("separable blobs are classified perfectly") {
    const Data d = blobs(20, 2.0, 1);
    const auto m = train_linear_svm(d.x, d.y, 10.0);
    for (std::size_t r = 0; r < d.x.rows(); ++r) {
        CHECK((m.decision(d.x.row(r)) > 0) == (d.y[r] == 1));
    }
    CHECK(std::isfinite(m.bias));
    for (double w : m.weights) CHECK(std::isfinite(w));
    CHECK_THROWS_AS(train_linear_svm(d.x, std::vector<int>(d.y.size(), 1), 1.0), DegenerateError);
}

TEST_CASE("duplicating the training set") {
    SUBCASE("separable data keeps the hard-margin solution") {
        const Data d = blobs(10, 2.0, 2);
        Matrix x2(2 * d.x.rows(), 2);
        std::vector<int> y2;
        for (std::size_t r = 0; r < 2 * d.x.rows(); ++r) {
            x2(r, 0) = d.x(r % d.x.rows(), 0);
            x2(r, 1) = d.x(r % d.x.rows(), 1);
            y2.push_back(d.y[r % d.x.rows()]);
        }
        const auto a = train_linear_svm(d.x, d.y, 100.0);
        const auto b = train_linear_svm(x2, y2, 100.0);
        const auto da = decisions(a, d.x), db = decisions(b, d.x);
        for (std::size_t i = 0; i < da.size(); ++i) CHECK(da[i] == doctest::Approx(db[i]).epsilon(1e-4));
    }
    SUBCASE("overlapping data with C halved") {
        const Data d = planted(24, 2, 0, 3);
        Matrix x2(48, 2);
        std::vector<int> y2;
        for (std::size_t r = 0; r < 48; ++r) {
            x2(r, 0) = d.x(r % 24, 0);
            x2(r, 1) = d.x(r % 24, 1);
            y2.push_back(d.y[r % 24]);
        }
        const auto a = train_linear_svm(d.x, d.y, 0.5);
        const auto b = train_linear_svm(x2, y2, 0.25);
        CHECK(svm_objective(a, d.x, d.y) == doctest::Approx(svm_objective(b, x2, y2)).epsilon(1e-5));
        const auto da = decisions(a, d.x), db = decisions(b, d.x);
        for (std::size_t i = 0; i < da.size(); ++i) CHECK(std::abs(da[i] - db[i]) < 1e-3);
    }
}

TEST_CASE("four point objective matches a grid oracle") {
    Matrix x(4, 2);
    const double pts[4][2] = {{1.0, 0.5}, {-0.2, 1.0}, {-1.0, -0.5}, {0.4, -0.3}};
    for (int i = 0; i < 4; ++i) {
        x(i, 0) = pts[i][0];
        x(i, 1) = pts[i][1];
    }
    const std::vector<int> y = {1, 1, 0, 0};
    for (double C : {0.25, 1.0, 4.0}) {
        const auto m = train_linear_svm(x, y, C);
        const double oracle = grid_oracle(x, y, C);
        CHECK(std::abs(svm_objective(m, x, y) - oracle) < 1e-4);
    }
    // overlapping labels
    const std::vector<int> y2 = {1, 0, 0, 1};
    const auto m = train_linear_svm(x, y2, 1.0);
    CHECK(std::abs(svm_objective(m, x, y2) - grid_oracle(x, y2, 1.0)) < 1e-4);
}

TEST_CASE("svm probability") {
    LinearModel m;
    m.weights = {2.0, -1.0};
    m.bias = 0.5;
    m.selected_features = {0, 2};
    const std::vector<double> zero = {0.0, 99.0, 0.5};
    CHECK(m.decision(zero) == 0.0);
    CHECK(svm_probability(m, zero) == 0.5);
    CHECK(svm_probability(m, std::vector<double>{1e6, 0, 0}) == 1.0);
    CHECK(svm_probability(m, std::vector<double>{-1e6, 0, 0}) == 0.0);
    double prev = -1;
    for (int i = -50; i <= 50; ++i) {
        const double p = svm_probability(m, std::vector<double>{i * 0.2, 0, 0});
        CHECK(p >= prev);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        prev = p;
    }
}

TEST_CASE("an all-zero feature leaves the decision unchanged") {
    const Data d = planted(40, 3, 2, 8);
    Matrix wide(40, 6);
    for (std::size_t r = 0; r < 40; ++r) {
        for (std::size_t c = 0; c < 5; ++c) wide(r, c < 2 ? c : c + 1) = d.x(r, c);
    }
    const auto a = train_linear_svm(d.x, d.y, 1.0);
    const auto b = train_linear_svm(wide, d.y, 1.0);
    const auto da = decisions(a, d.x), db = decisions(b, wide);
    for (std::size_t i = 0; i < da.size(); ++i) CHECK(da[i] == doctest::Approx(db[i]).epsilon(1e-9));
}

TEST_CASE("rfe ranking and cv scores") {
    const Data d = planted(40, 2, 6, 4);
    const auto z = Standardizer::fit(d.x).transform(d.x);
    auto order = rfe_ranking(z, d.y, 1.0, {});
    CHECK(order.size() == 8);
    std::vector<std::size_t> last(order.end() - 2, order.end());
    std::sort(last.begin(), last.end());
    CHECK(last == std::vector<std::size_t>{0, 1});
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < 8; ++i) CHECK(order[i] == i);
    const auto scores = rfe_cv_scores(d.x, d.y, 1.0, 5, 7, {});
    CHECK(scores.size() == 8);
    for (double s : scores) CHECK((s >= 0.0 && s <= 1.0));
}

TEST_CASE("rfe ranks planted features last") {
    const Data d = planted(60, 5, 155, 11);
    const auto z = Standardizer::fit(d.x).transform(d.x);
    const auto order = rfe_ranking(z, d.y, 1.0, {});
    std::vector<std::size_t> last(order.end() - 5, order.end());
    std::sort(last.begin(), last.end());
    CHECK(last == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("rfecv on planted features selects only planted ones") {
    const Data d = planted(60, 5, 155, 11);
    RfecvOptions opts;
    opts.seed = 3;
    const auto r = rfecv_select(d.x, d.y, opts);
    REQUIRE(!r.selected_features.empty());
    for (auto f : r.selected_features) CHECK(f < 5);
    CHECK(std::find(opts.c_grid.begin(), opts.c_grid.end(), r.best_C) != opts.c_grid.end());
    CHECK(r.candidates.size() == opts.c_grid.size());
    CHECK(r.pipeline.model.selected_features == r.selected_features);
    for (double w : r.pipeline.model.weights) CHECK(std::isfinite(w));
    for (const auto& c : r.candidates) CHECK(c.features.size() == c.feature_count);
}

TEST_CASE("rfecv with a single feature") {
    const Data d = planted(20, 1, 0, 2);
    const auto r = rfecv_select(d.x, d.y);
    CHECK(r.selected_features == std::vector<std::size_t>{0});
    CHECK_THROWS_AS(rfecv_select(d.x.select_rows(std::vector<std::size_t>{0, 1, 2}), std::vector<int>{0, 1, 0}),
                    TooShortError);
}

TEST_CASE("rfecv held-out auc on pure noise stays near chance") {
    // outer 4-fold CV on several noise datasets; the pooled mean is the null estimate
    double total = 0;
    int count = 0;
    for (std::uint64_t rep = 0; rep < 4; ++rep) {
        Data d = planted(48, 0, 30, 100 + rep);
        std::mt19937_64 gen(200 + rep);
        std::shuffle(d.y.begin(), d.y.end(), gen);
        RfecvOptions opts;
        opts.c_grid = {0.0625, 1.0, 16.0};
        opts.tuning_repeats = 2;
        opts.seed = rep;
        for (const auto& split : repeated_stratified_splits(d.y, 4, 1, rep)) {
            const auto r = rfecv_select(d.x.select_rows(split.train), select<int>(d.y, split.train), opts);
            std::vector<double> s;
            const Matrix test = d.x.select_rows(split.test);
            for (std::size_t i = 0; i < test.rows(); ++i) s.push_back(r.pipeline.probability(test.row(i)));
            total += roc_auc(s, select<int>(d.y, split.test));
            ++count;
        }
    }
    const double mean = total / count;
    CHECK(mean >= 0.35);
    CHECK(mean <= 0.65);
}

TEST_CASE("permuting columns permutes the selection") {
    const std::size_t d = 24;
    const Data a = planted(40, 3, d - 3, 21);
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 gen(5);
    std::shuffle(perm.begin(), perm.end(), gen);
    const Matrix b = a.x.select_cols(perm);  // column j of b is column perm[j] of a

    RfecvOptions opts;
    opts.c_grid = {0.125, 1.0, 8.0};
    opts.seed = 9;
    const auto ra = rfecv_select(a.x, a.y, opts);
    const auto rb = rfecv_select(b, a.y, opts);
    std::vector<std::size_t> mapped;
    for (auto j : rb.selected_features) mapped.push_back(perm[j]);
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == ra.selected_features);
    CHECK(ra.best_C == rb.best_C);
}

TEST_CASE("svm artifact round trip") {
    const Data d = planted(30, 2, 4, 6);
    RfecvOptions opts;
    opts.c_grid = {0.5, 2.0};
    const auto r = rfecv_select(d.x, d.y, opts);
    const std::string text = serialize_model(r.pipeline);
    const auto back = deserialize_svm(text);
    CHECK(serialize_model(back) == text);
    for (std::size_t i = 0; i < d.x.rows(); ++i) CHECK(back.probability(d.x.row(i)) == r.pipeline.probability(d.x.row(i)));
    CHECK_THROWS_AS(deserialize_forest(text), FormatError);
    std::string bumped = text;
    const auto at = bumped.find("\"version\": 1");
    REQUIRE(at != std::string::npos);
    bumped.replace(at, 12, "\"version\": 9");
    CHECK_THROWS_AS(deserialize_svm(bumped), FormatError);
}
