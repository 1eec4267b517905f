#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gic/error.hpp"
#include "gic/forest.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace gic;

namespace {

DecisionTree stump(int feature, double threshold, int left, int right) {
    return DecisionTree({{feature, threshold, 1, 2, -1}, {-1, 0, -1, -1, left}, {-1, 0, -1, -1, right}});
}

DecisionTree leaf(int vote) { return DecisionTree({{-1, 0, -1, -1, vote}}); }

// Ten points on feature 0: negatives at 0..4, positives at 5..9; feature 1 is noise.
LabeledDataset separable_ten() {
    std::vector<double> x;
    std::vector<int> y;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> noise(0, 1);
    for (int i = 0; i < 10; ++i) {
        x.push_back(i);
        x.push_back(noise(rng));
        y.push_back(i >= 5 ? 1 : -1);
    }
    return LabeledDataset(10, 2, x, y);
}

double accuracy(const Forest& f, const LabeledDataset& d) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < d.rows; ++i) ok += (f.predict_probability(d.row(i)) > 0.5 ? 1 : -1) == d.y[i];
    return static_cast<double>(ok) / static_cast<double>(d.rows);
}

} // namespace

TEST_CASE("vote proportion") {
    std::vector<DecisionTree> trees;
    for (int t = 0; t < 10; ++t) trees.push_back(leaf(t < 7 ? 1 : -1));
    const Forest f(3, trees);
    CHECK(f.predict_probability(std::vector<double>{0, 0, 0}) == doctest::Approx(0.7));
    CHECK(f.positive_votes(std::vector<double>{0, 0, 0}) == 7);
}

TEST_CASE("unanimous forests and omega") {
    const Forest neg(2, {leaf(-1), leaf(-1)});
    const Forest pos(2, {leaf(1), leaf(1), leaf(1)});
    CHECK(neg.predict_probability(std::vector<double>{1, 2}) == 0.0);
    CHECK(pos.predict_probability(std::vector<double>{1, 2}) == 1.0);
    CHECK(pos.worst_case() == 1.0);
    CHECK(pos.worst_case() >= pos.predict_probability(std::vector<double>{1, 2}));
}

TEST_CASE("prediction follows the threshold with x <= t going left") {
    const Forest f(2, {stump(1, 0.5, 1, -1)});
    CHECK(f.predict_probability(std::vector<double>{9, 0.5}) == 1.0);
    CHECK(f.predict_probability(std::vector<double>{9, 0.5000001}) == 0.0);
}

TEST_CASE("dimension mismatch") {
    const Forest f(2, {leaf(1)});
    CHECK_THROWS_AS(f.predict_probability(std::vector<double>{1}), DimensionError);
    CHECK_THROWS_AS(Forest(1, {stump(3, 0, 1, -1)}), DimensionError);
}

TEST_CASE("training preconditions") {
    const auto d = separable_ten();
    ForestParams p;
    p.n_trees = 0;
    CHECK_THROWS_AS(train_forest(d, p), DegenerateTrainingError);
    const LabeledDataset one_class(3, 1, {1, 2, 3}, {1, 1, 1});
    CHECK_THROWS_AS(train_forest(one_class, ForestParams{}), DegenerateTrainingError);
    const LabeledDataset single(1, 1, {1}, {1});
    CHECK_THROWS_AS(train_forest(single, ForestParams{}), DegenerateTrainingError);
}

TEST_CASE("single tree on separable data splits on feature 0 at the class gap") {
    const auto d = separable_ten();
    std::vector<std::size_t> rows(10);
    std::iota(rows.begin(), rows.end(), 0);
    const DecisionTree t = train_tree(d, rows, 8, 2, 11);
    const auto& root = t.nodes().front();
    CHECK(root.feature == 0);
    // exhaustive check: among all midpoints on feature 0 only 4.5 separates
    std::size_t separating = 0;
    for (int k = 0; k < 9; ++k) {
        const double thr = k + 0.5;
        bool ok = true;
        for (std::size_t i = 0; i < 10; ++i) ok = ok && ((d.at(i, 0) <= thr ? -1 : 1) == d.y[i]);
        separating += ok;
        if (ok) CHECK(root.threshold == thr);
    }
    CHECK(separating == 1);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < 10; ++i) correct += t.predict(d.row(i)) == d.y[i];
    CHECK(correct == 10);
    CHECK(t.depth() == 1);
}

TEST_CASE("a one-tree forest on one separable feature splits on it") {
    const LabeledDataset d(10, 1, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, {-1, -1, -1, -1, -1, 1, 1, 1, 1, 1});
    ForestParams p;
    p.n_trees = 1;
    p.seed = 4;
    const Forest f = train_forest(d, p);
    REQUIRE(f.size() == 1);
    CHECK(f.trees()[0].nodes().front().feature == 0);
}

TEST_CASE("leaf ties go to the benign class") {
    const LabeledDataset d(2, 1, {1, 1}, {1, -1});
    const std::vector<std::size_t> rows{0, 1};
    const DecisionTree t = train_tree(d, rows, 8, 1, 0);
    REQUIRE(t.nodes().size() == 1);
    CHECK(t.nodes()[0].vote == -1);
}

TEST_CASE("max_depth is respected") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> x;
    std::vector<int> y;
    for (int i = 0; i < 300; ++i) {
        x.push_back(u(rng));
        x.push_back(u(rng));
        y.push_back(u(rng) < 0.5 ? 1 : -1);
    }
    const LabeledDataset d(300, 2, x, y);
    for (std::size_t depth : {1, 3, 5}) {
        ForestParams p;
        p.n_trees = 5;
        p.max_depth = depth;
        const Forest f = train_forest(d, p);
        for (const auto& t : f.trees()) CHECK(t.depth() <= depth);
    }
}

TEST_CASE("seed determinism and range") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> x;
    std::vector<int> y;
    for (int i = 0; i < 200; ++i) {
        const double a = u(rng), b = u(rng), c = u(rng);
        x.insert(x.end(), {a, b, c});
        y.push_back(a + 0.3 * b > 0.6 ? 1 : -1);
    }
    const LabeledDataset d(200, 3, x, y);
    ForestParams p;
    p.n_trees = 20;
    p.seed = 99;
    const Forest f1 = train_forest(d, p);
    const Forest f2 = train_forest(d, p);
    for (std::size_t t = 0; t < f1.size(); ++t) {
        const auto& a = f1.trees()[t].nodes();
        const auto& b = f2.trees()[t].nodes();
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(a[k].feature == b[k].feature);
            CHECK(a[k].threshold == b[k].threshold);
            CHECK(a[k].vote == b[k].vote);
        }
    }
    for (int probe = 0; probe < 200; ++probe) {
        const std::vector<double> q{u(rng), u(rng), u(rng)};
        const double pr = f1.predict_probability(q);
        CHECK(pr == f2.predict_probability(q));
        const double votes = pr * 20;
        CHECK(std::abs(votes - std::round(votes)) < 1e-12);
        CHECK(pr >= 0.0);
        CHECK(pr <= 1.0);
    }
    p.seed = 100;
    const Forest f3 = train_forest(d, p);
    bool differs = false;
    for (std::size_t t = 0; t < f1.size() && !differs; ++t)
        differs = f1.trees()[t].nodes().size() != f3.trees()[t].nodes().size() ||
                  f1.trees()[t].nodes()[0].threshold != f3.trees()[t].nodes()[0].threshold;
    CHECK(differs);
}

TEST_CASE("training sanity on an axis-aligned separable problem") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> x;
    std::vector<int> y;
    for (int i = 0; i < 400; ++i) {
        const double a = u(rng), b = u(rng), c = u(rng);
        x.insert(x.end(), {a, b, c});
        y.push_back(a > 0.5 && b < 0.4 ? 1 : -1);
    }
    const LabeledDataset d(400, 3, x, y);
    ForestParams p;
    p.n_trees = 50;
    p.max_depth = 4;
    p.seed = 5;
    CHECK(accuracy(train_forest(d, p), d) >= 0.95);
}

TEST_CASE("dataset statistics and validation") {
    const LabeledDataset d(4, 2, {1, 5, 3, 5, 1, 5, 3, 5}, {1, -1, 1, -1});
    CHECK(d.feature_sd[0] == doctest::Approx(1.0));
    CHECK(d.feature_sd[1] == doctest::Approx(5e-6));  // constant column floored at 1e-6 * max|x|
    CHECK(d.feature_sd[1] > 0.0);
    const auto s = d.subset(std::vector<std::size_t>{1, 1});
    CHECK(s.rows == 2);
    CHECK(s.at(1, 0) == 3.0);
    CHECK(d.count_label(1) == 2);
    CHECK_THROWS_AS(LabeledDataset(2, 1, {1, 2}, {1, 0}), IngestionError);
    CHECK_THROWS_AS(LabeledDataset(2, 1, {1, std::nan("")}, {1, -1}), IngestionError);
    CHECK_THROWS_AS(LabeledDataset(2, 2, {1, 2}, {1, -1}), DimensionError);
}
