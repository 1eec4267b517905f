#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gic/baselines.hpp"
#include "gic/error.hpp"
#include "support/toys.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <set>

using namespace gic;
using gic::testing::DecisiveToy;
using gic::testing::stump;

namespace {

const BoundSpec kWide = BoundSpec::shifted({-5}, {5});

} // namespace

TEST_CASE("max feasible step") {
    const std::vector<double> zero{0.0};
    CHECK(max_feasible_step(0, StepDirection::Increase, zero, CostSpec{{2}, {2}, CostKind::Linear}, kWide, 4.0) == 2.0);
    CHECK(max_feasible_step(0, StepDirection::Increase, zero, CostSpec{{1}, {1}, CostKind::Quadratic}, kWide, 4.0) ==
          doctest::Approx(2.0));
    CHECK(max_feasible_step(0, StepDirection::Increase, zero, CostSpec{{1}, {1}, CostKind::Linear}, kWide, 40.0) == 5.0);
    CHECK(max_feasible_step(0, StepDirection::Decrease, zero, CostSpec{{1}, {4}, CostKind::Quadratic},
                            BoundSpec::shifted({-0.5}, {5}), 4.0) == 0.5);
    CHECK(max_feasible_step(0, StepDirection::Decrease, zero, CostSpec{{1}, {4}, CostKind::Quadratic}, kWide, 4.0) ==
          doctest::Approx(1.0));
}

TEST_CASE("max feasible step is zero once the budget is spent") {
    const CostSpec c{{1, 1}, {1, 1}, CostKind::Quadratic};
    const BoundSpec b = BoundSpec::shifted({-5, -5}, {5, 5});
    const std::vector<double> z{0.0, 2.0};  // φ = 4 = B
    CHECK(max_feasible_step(0, StepDirection::Increase, z, c, b, 4.0) == 0.0);
    CHECK(max_feasible_step(1, StepDirection::Increase, z, c, b, 4.0) == 0.0);
    // moving the spent coordinate back across zero is still allowed
    CHECK(max_feasible_step(1, StepDirection::Decrease, z, c, b, 4.0) == doctest::Approx(4.0));
    // the resulting move stays within budget
    std::vector<double> moved = z;
    moved[0] += max_feasible_step(0, StepDirection::Increase, std::vector<double>{0.0, 1.0}, c, b, 4.0);
    CHECK(cost(std::vector<double>{moved[0], 1.0}, c) <= 4.0 + 1e-12);
}

TEST_CASE("unbounded free step is a configuration error") {
    CHECK_THROWS_AS(max_feasible_step(0, StepDirection::Increase, std::vector<double>{0.0}, CostSpec{{0}, {1}},
                                      BoundSpec::shifted({-1}, {INFINITY}), 1.0),
                    ConfigError);
}

TEST_CASE("zero budget and constant objective return the instance") {
    DecisiveToy toy;
    auto obj0 = toy.objective(0.0);
    CHECK(lvp_best_improvement(*obj0).x == obj0->base_direct());
    CHECK(lvp_first_improvement(*obj0, 3).x == obj0->base_direct());

    const FunctionClassifier flat(6, [](std::span<const double>) { return 0.3; });
    const Objective obj(flat, nullptr, toy.partition, toy.instance, CostSpec{std::vector<double>(5, 1.0), std::vector<double>(5, 1.0)},
                        BoundSpec::shifted(std::vector<double>(5, -3), std::vector<double>(5, 2)), 4.0);
    CHECK(lvp_best_improvement(obj).x == obj.base_direct());
    CHECK(lvp_first_improvement(obj, 1).x == obj.base_direct());
}

TEST_CASE("best improvement moves the feature whose saturating step crosses the tree first") {
    // Features [d0, d1]: the tree votes +1 unless d1 <= 1. Both saturating
    // steps are evaluated; only the decrease of d1 helps.
    const Forest forest(2, {stump(1, 1.0, -1, 1)});
    const FeaturePartition part({FeatureRole::Direct, FeatureRole::Direct});
    const Objective obj(forest, nullptr, part, {2.0, 2.0}, CostSpec{{1, 1}, {1, 1}},
                        BoundSpec::shifted({-2, -2}, {2, 2}), 4.0);
    // direct evaluation of the four candidate moves
    CHECK(forest.predict_probability(std::vector<double>{4.0, 2.0}) == 1.0);
    CHECK(forest.predict_probability(std::vector<double>{0.0, 2.0}) == 1.0);
    CHECK(forest.predict_probability(std::vector<double>{2.0, 4.0}) == 1.0);
    CHECK(forest.predict_probability(std::vector<double>{2.0, 0.0}) == 0.0);
    const auto r = lvp_best_improvement(obj);
    CHECK(r.z[0] == 0.0);
    CHECK(r.z[1] == doctest::Approx(-2.0));
    CHECK(r.value == 0.0);
    // g(0), four moves in round one, then only d1 back up to +2 is still open
    CHECK(r.evaluations == 1 + 4 + 1);
}

TEST_CASE("first improvement finds the single improving feature for every scan order") {
    DecisiveToy toy;
    std::set<std::size_t> first_evaluated;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto obj = toy.objective(4.0);
        const auto r = lvp_first_improvement(*obj, seed);
        CHECK(r.value == 0.0);
        CHECK(r.z[1] == doctest::Approx(-2.0));
        CHECK(obj->feasible(r.z));
        for (std::size_t i : {0, 2, 3, 4}) CHECK(r.z[i] == 0.0);
        // evaluations before acceptance reveal where d1 sat in the scan
        first_evaluated.insert(r.evaluations);
    }
    CHECK(first_evaluated.size() >= 5);
}

TEST_CASE("first improvement is deterministic for a seed") {
    DecisiveToy toy;
    auto a = toy.objective(3.0);
    auto b = toy.objective(3.0);
    const auto ra = lvp_first_improvement(*a, 42);
    const auto rb = lvp_first_improvement(*b, 42);
    CHECK(ra.z == rb.z);
    CHECK(ra.evaluations == rb.evaluations);
}

TEST_CASE("accepted moves are capped") {
    // g decreases on every call, so every candidate improves and the loops
    // would never stop on their own.
    auto calls = std::make_shared<std::atomic<int>>(0);
    const FunctionClassifier shrinking(3, [calls](std::span<const double>) {
        return std::max(0.0, 1.0 - 1e-4 * (*calls)++);
    });
    const FeaturePartition part({FeatureRole::Direct, FeatureRole::Direct, FeatureRole::Direct});
    const Objective obj(shrinking, nullptr, part, {0, 0, 0}, CostSpec{{1, 1, 1}, {1, 1, 1}},
                        BoundSpec::shifted({-3, -3, -3}, {3, 3, 3}), 1.0);
    const auto bi = lvp_best_improvement(obj);
    CHECK(bi.evaluations <= 1 + 30 * 6);
    CHECK(obj.feasible(bi.z));
    const auto fi = lvp_first_improvement(obj, 1);
    CHECK(fi.evaluations <= 1 + 30 * 6);
    CHECK(obj.feasible(fi.z));
}

TEST_CASE("feasibility and never-worse on random forests") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<DecisionTree> trees;
        for (int t = 0; t < 7; ++t)
            trees.push_back(stump(1 + static_cast<int>(u(rng) * 3), 1 + 3 * u(rng), u(rng) < 0.5 ? 1 : -1,
                                  u(rng) < 0.5 ? 1 : -1));
        const Forest f(4, trees);
        const FeaturePartition part({FeatureRole::Unchangeable, FeatureRole::Direct, FeatureRole::Direct,
                                     FeatureRole::Direct});
        const std::vector<double> x{0, 1 + 3 * u(rng), 1 + 3 * u(rng), 1 + 3 * u(rng)};
        const auto bounds = hardline_bounds(std::vector<double>{x[1], x[2], x[3]},
                                            {Direction::IncreaseOnly, Direction::DecreaseOnly, Direction::Both},
                                            {0, 0, 0}, {5, 5, 5});
        const CostSpec c{{0.5 + u(rng), 0.5 + u(rng), 0.5 + u(rng)}, {0.5 + u(rng), 0.5 + u(rng), 0.5 + u(rng)},
                         trial % 2 ? CostKind::Linear : CostKind::Quadratic};
        const Objective obj(f, nullptr, part, x, c, bounds, 3 * u(rng));
        for (const auto& r : {lvp_best_improvement(obj), lvp_first_improvement(obj, trial)}) {
            CHECK(obj.feasible(r.z));
            CHECK(r.value <= r.initial);
            CHECK(r.value == f.predict_probability(obj.assemble(r.z)));
        }
    }
}
