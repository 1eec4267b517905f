#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gic/error.hpp"
#include "gic/optimizers.hpp"
#include "support/toys.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace gic;
using gic::testing::DecisiveToy;
using gic::testing::MonotoneToy;

namespace {

// One direct feature with g(z) = min(1, (z - 1)^2 / 10); instance at 0, box [-5, 5].
struct Parabola {
    FunctionClassifier f{1, [](std::span<const double> x) { return std::min(1.0, (x[0] - 1) * (x[0] - 1) / 10); }};
    Objective obj(double budget) const {
        return Objective(f, nullptr, FeaturePartition({FeatureRole::Direct}), {0.0}, CostSpec{{1}, {1}},
                         BoundSpec::shifted({-5}, {5}), budget);
    }
};

const FunctionClassifier kConstant(6, [](std::span<const double>) { return 0.5; });

Objective constant_objective(double budget) {
    std::vector<FeatureRole> roles(6, FeatureRole::Direct);
    roles[0] = FeatureRole::Unchangeable;
    return Objective(kConstant, nullptr, FeaturePartition(roles), {1, 3, 3, 3, 3, 3},
                     CostSpec{std::vector<double>(5, 1.0), std::vector<double>(5, 1.0)},
                     BoundSpec::shifted(std::vector<double>(5, -3), std::vector<double>(5, 2)), budget);
}

HeuristicParams quick(std::size_t iters, std::uint64_t seed) {
    HeuristicParams p = HeuristicParams::genetic_defaults();
    p.max_iters = iters;
    p.seed = seed;
    return p;
}

const std::vector<double> kSigma5(5, 1.0);

} // namespace

TEST_CASE("sampler: singleton support, zero mean, floor") {
    PerturbationSampler one({2.0}, 1);
    for (int k = 0; k < 100; ++k) CHECK(one.sample().first == 0);

    PerturbationSampler s({0.5, 2.0}, 7);
    const std::size_t n = 100000;
    std::map<std::size_t, std::pair<double, std::size_t>> acc;
    for (std::size_t k = 0; k < n; ++k) {
        auto [q, b] = s.sample();
        acc[q].first += b;
        acc[q].second += 1;
    }
    for (auto [q, pr] : acc) {
        const double sd = q == 0 ? 0.5 : 2.0;
        CHECK(std::abs(pr.first / static_cast<double>(pr.second)) <= 3 * sd / std::sqrt(static_cast<double>(pr.second)));
        CHECK(std::abs(static_cast<double>(pr.second) / n - 0.5) < 0.01);
    }

    PerturbationSampler floored({0.0, 1e-9}, 1, 1e-6);
    CHECK(floored.sigma()[0] == 1e-6);
    CHECK(floored.sigma()[1] == 1e-6);
}

TEST_CASE("local search: zero budget and constant objective leave the point unchanged") {
    auto obj0 = constant_objective(0.0);
    PerturbationSampler s(kSigma5, 3);
    const Row x = obj0.base_direct();
    auto r = local_search(obj0, x, std::nullopt, s, 20);
    CHECK(r.x == x);

    auto obj = constant_objective(5.0);
    const Row start{3.5, 3, 2, 3, 3};
    auto r2 = local_search(obj, start, 0.5, s, 20);
    CHECK(r2.x == start);
    CHECK(obj.evaluations() == 20);
}

TEST_CASE("local search on a parabola never increases g and counts m evaluations") {
    Parabola p;
    auto obj = p.obj(100.0);
    PerturbationSampler s({1.0}, 11);
    Row x{0.0};
    double value = obj(std::vector<double>{0.0});
    for (int k = 0; k < 20; ++k) {
        const auto before = obj.evaluations();
        auto r = local_search(obj, x, value, s, 50);
        CHECK(obj.evaluations() - before == 50);
        CHECK(*r.value <= value);
        CHECK(*r.value == obj(displacement(obj, r.x)));
        x = r.x;
        value = *r.value;
    }
    CHECK(std::abs(x[0] - 1.0) < 0.2);
}

TEST_CASE("local search moves from the incumbent and projects relative to the instance") {
    Parabola p;
    auto obj = p.obj(1.0);  // |z| <= 1
    PerturbationSampler s({3.0}, 2);
    for (int k = 0; k < 50; ++k) {
        auto r = local_search(obj, Row{0.5}, std::nullopt, s, 5);
        CHECK(obj.feasible(displacement(obj, r.x)));
    }
}

TEST_CASE("hill climb edge cases") {
    auto obj = constant_objective(3.0);
    HeuristicParams p = HeuristicParams::hill_climb_defaults();
    p.max_iters = 0;
    auto r = hill_climb(obj, kSigma5, p);
    CHECK(r.x == obj.base_direct());
    CHECK(r.evaluations == 1);

    auto obj0 = constant_objective(0.0);
    p.max_iters = 20;
    r = hill_climb(obj0, kSigma5, p);
    CHECK(r.x == obj0.base_direct());
}

TEST_CASE("hill climb crosses the decisive threshold") {
    DecisiveToy toy;
    auto obj = toy.objective(4.0);
    HeuristicParams p = HeuristicParams::hill_climb_defaults();
    p.seed = 3;
    const auto r = hill_climb(*obj, kSigma5, p);
    CHECK(r.initial == 1.0);
    CHECK(r.value == 0.0);
    CHECK(r.x[1] <= 2.0);
    CHECK(obj->feasible(r.z));
}

TEST_CASE("init population: zero budget, determinism, feasibility fuzz") {
    auto obj0 = constant_objective(0.0);
    PerturbationSampler s0(kSigma5, 1);
    for (const auto& row : init_population(obj0, s0, 15).rows) CHECK(row == obj0.base_direct());

    auto obj = constant_objective(2.0);
    PerturbationSampler a(kSigma5, 9), b(kSigma5, 9);
    CHECK(init_population(obj, a, 3).rows == init_population(obj, b, 3).rows);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    std::size_t rows = 0;
    for (int k = 0; k < 1000; ++k) {
        const double budget = 5 * u(rng);
        auto o = constant_objective(budget);
        PerturbationSampler sm({0.1 + 3 * u(rng), 1, 2, 0.5, 4}, k);
        for (const auto& row : init_population(o, sm, 4).rows) {
            const Row z = displacement(o, row);
            CHECK(cost(z, o.costs()) <= budget + o.tol());
            for (std::size_t i = 0; i < z.size(); ++i) {
                CHECK(z[i] >= o.bounds().lower_shift[i]);
                CHECK(z[i] <= o.bounds().upper_shift[i]);
            }
            ++rows;
        }
    }
    CHECK(rows == 4000);
}

TEST_CASE("crossover index ranges") {
    const Row a{1, 2, 3}, b{10, 20, 30};
    auto [c1, c2] = crossover(a, b, 0);  // first feature as the cut point
    CHECK(c1 == b);
    CHECK(c2 == a);
    auto [d1, d2] = crossover(a, b, 1);
    CHECK(d1 == Row{1, 20, 30});
    CHECK(d2 == Row{10, 2, 3});
    auto [e1, e2] = crossover(b, a, 1);  // swapping parents swaps children
    CHECK(e1 == d2);
    CHECK(e2 == d1);
}

TEST_CASE("make_children: gate v = 1 equals the unmutated run") {
    auto obj = constant_objective(4.0);
    PerturbationSampler init(kSigma5, 5);
    const auto pop = init_population(obj, init, 6);
    const std::vector<std::size_t> theta{0, 1, 2, 3, 4, 5, 0, 2};
    Rng s1(8), s2(8);
    PerturbationSampler m1(kSigma5, 9), m2(kSigma5, 9);
    const auto off = make_children(obj, pop.rows, theta, s1, m1, 1.0, true);
    const auto plain = make_children(obj, pop.rows, theta, s2, m2, 0.7, false);
    CHECK(off == plain);
    for (const auto& c : off) CHECK(obj.feasible(displacement(obj, c)));

    Rng s3(8);
    PerturbationSampler m3(kSigma5, 9);
    const auto mutated = make_children(obj, pop.rows, theta, s3, m3, 0.0, true);
    CHECK(mutated != plain);
    CHECK_THROWS_AS(make_children(obj, pop.rows, std::vector<std::size_t>{0, 1, 2}, s3, m3, 0.5, true), ConfigError);
}

TEST_CASE("make_children pairs are complementary before mutation") {
    auto obj = constant_objective(100.0);  // nothing binds, projection is the identity
    const std::vector<Row> cross{{1, 1, 1, 1, 1}, {3, 4, 4, 4, 4}};
    Rng s(2);
    PerturbationSampler m(kSigma5, 1);
    const auto kids = make_children(obj, cross, std::vector<std::size_t>{0, 1}, s, m, 0.7, false);
    for (std::size_t i = 0; i < 5; ++i) CHECK(kids[0][i] + kids[1][i] == cross[0][i] + cross[1][i]);
}

TEST_CASE("selection probabilities") {
    const auto p = selection_probabilities(std::vector<double>{0.2, 0.6}, 1.0);
    CHECK(p[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    const auto u = selection_probabilities(std::vector<double>{0.4, 0.4, 0.4}, 1.0);
    for (double v : u) CHECK(v == doctest::Approx(1.0 / 3));
    const auto worst = selection_probabilities(std::vector<double>{1.0, 1.0}, 1.0);
    CHECK(worst[0] == 0.5);
    CHECK_THROWS_AS(selection_probabilities(std::vector<double>{1.5}, 1.0), ConfigError);
    const auto ordered = selection_probabilities(std::vector<double>{0.1, 0.1, 0.3, 0.9}, 1.0);
    for (std::size_t j = 1; j < ordered.size(); ++j) CHECK(ordered[j] <= ordered[j - 1]);
}

TEST_CASE("generation counts") {
    CHECK(generation_split(15, 0.10) == std::pair<std::size_t, std::size_t>{14, 1});
    CHECK(parent_pool_size(15, 0.40) == 6);
    CHECK(generation_split(10, 0.10) == std::pair<std::size_t, std::size_t>{9, 1});
    CHECK(generation_split(7, 0.0) == std::pair<std::size_t, std::size_t>{7, 0});
    for (std::size_t m = 2; m < 40; ++m)
        for (double g : {0.0, 0.1, 0.25, 0.5, 0.9}) {
            auto [c, k] = generation_split(m, g);
            CHECK(c + k == m);
        }
}

TEST_CASE("breeding indices reuse the pool when it is too small") {
    Rng rng(1);
    const auto theta = breeding_indices(6, 14, rng);
    REQUIRE(theta.size() == 14);
    for (std::size_t k = 0; k < 6; ++k) CHECK(theta[k] == k);
    for (std::size_t k = 6; k < 14; ++k) CHECK(theta[k] < 6);
    Rng rng2(1);
    CHECK(breeding_indices(6, 4, rng2) == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("GA edge cases") {
    auto obj0 = constant_objective(0.0);
    auto r = genetic(obj0, kSigma5, quick(10, 1));
    CHECK(r.x == obj0.base_direct());

    auto obj = constant_objective(3.0);
    r = genetic(obj, kSigma5, quick(1, 1));
    CHECK(r.x == obj.base_direct());
    CHECK(r.value == r.initial);
}

TEST_CASE("GA population invariants and evaluation count") {
    DecisiveToy toy;
    auto obj = toy.objective(4.0);
    GeneticTrace trace;
    const auto params = quick(25, 4);
    const auto r = genetic(*obj, kSigma5, params, &trace);
    REQUIRE(trace.generations.size() == 25);
    for (const auto& pop : trace.generations) {
        CHECK(pop.size() == 15);
        for (std::size_t j = 0; j < pop.size(); ++j) {
            const Row z = displacement(*obj, pop.rows[j]);
            CHECK(obj->feasible(z));
            REQUIRE(pop.values[j].has_value());
            CHECK(*pop.values[j] == (*obj)(z));
        }
    }
    // one g(0), m for the first population, then only the children of each later generation
    CHECK(r.evaluations == 1 + 15 + 24 * 14);
    CHECK(r.value == 0.0);
}

TEST_CASE("GA determinism") {
    DecisiveToy toy;
    auto o1 = toy.objective(2.5);
    auto o2 = toy.objective(2.5);
    const auto a = genetic(*o1, kSigma5, quick(30, 77));
    const auto b = genetic(*o2, kSigma5, quick(30, 77));
    CHECK(a.x == b.x);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("GA+LS with no local search equals GA without mutation") {
    DecisiveToy toy;
    for (std::uint64_t seed : {1, 2, 3}) {
        auto o1 = toy.objective(3.0);
        auto o2 = toy.objective(3.0);
        auto pg = quick(20, seed);
        pg.mutation_gate = 1.0;
        auto pl = quick(20, seed);
        pl.local_extent = 0;
        GeneticTrace tg, tl;
        const auto a = genetic(*o1, kSigma5, pg, &tg);
        const auto b = genetic_local(*o2, kSigma5, pl, &tl);
        CHECK(a.x == b.x);
        CHECK(a.evaluations == b.evaluations);
        REQUIRE(tg.generations.size() == tl.generations.size());
        for (std::size_t g = 0; g < tg.generations.size(); ++g) CHECK(tg.generations[g].rows == tl.generations[g].rows);
    }
}

TEST_CASE("GA+LS zero budget and evaluation scale") {
    auto obj0 = constant_objective(0.0);
    HeuristicParams p = HeuristicParams::genetic_local_defaults();
    p.max_iters = 5;
    CHECK(genetic_local(obj0, kSigma5, p).x == obj0.base_direct());
    auto obj = constant_objective(2.0);
    const auto r = genetic_local(obj, kSigma5, p);
    // 1 + m + per generation: each child evaluated once plus ξ probes
    CHECK(r.evaluations == 1 + 15 + 5 * 14 * (1 + 6));
}

TEST_CASE("GA+LS is at least as good as GA on the monotone toy in most paired seeds") {
    MonotoneToy toy;
    std::size_t wins = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto o1 = toy.objective(1.5);
        auto o2 = toy.objective(1.5);
        const auto ga = genetic(*o1, {1.0}, quick(10, seed));
        auto pl = HeuristicParams::genetic_local_defaults();
        pl.max_iters = 10;
        pl.seed = seed;
        const auto gl = genetic_local(*o2, {1.0}, pl);
        wins += gl.value <= ga.value;
    }
    CHECK(wins >= 10);
}

TEST_CASE("never worse than the starting point") {
    DecisiveToy toy;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        for (double budget : {0.0, 0.3, 1.5, 6.0}) {
            auto o = toy.objective(budget);
            auto hp = HeuristicParams::hill_climb_defaults();
            hp.max_iters = 20;
            hp.seed = seed;
            CHECK(hill_climb(*o, kSigma5, hp).value <= 1.0);
            CHECK(genetic(*o, kSigma5, quick(10, seed)).value <= 1.0);
            auto pl = HeuristicParams::genetic_local_defaults();
            pl.max_iters = 5;
            pl.seed = seed;
            const auto r = genetic_local(*o, kSigma5, pl);
            CHECK(r.value <= r.initial);
            CHECK(o->feasible(r.z));
        }
}

TEST_CASE("parameter validation") {
    auto obj = constant_objective(1.0);
    auto p = quick(1, 0);
    p.breed = 0.0;
    CHECK_THROWS_AS(genetic(obj, kSigma5, p), ConfigError);
    p = quick(1, 0);
    p.carryover = 1.0;
    CHECK_THROWS_AS(genetic(obj, kSigma5, p), ConfigError);
    p = quick(1, 0);
    p.population = 1;
    CHECK_THROWS_AS(genetic(obj, kSigma5, p), ConfigError);
    p = quick(1, 0);
    p.mutation_gate = 1.5;
    CHECK_THROWS_AS(genetic(obj, kSigma5, p), ConfigError);
}
