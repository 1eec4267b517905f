#include "gic/optimizers.hpp"

#include "gic/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gic {

namespace {

std::size_t ceil_share(std::size_t m, double share) {
    // Guards against 15 * 0.4 landing a hair above 6.
    return static_cast<std::size_t>(std::ceil(static_cast<double>(m) * share - 1e-9));
}

enum Stream : std::uint64_t { kPerturbStream = 1, kStructureStream = 2, kMutationStream = 3 };

std::size_t argmin_first(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < values.size(); ++j)
        if (values[j] < values[best]) best = j;
    return best;
}

} // namespace

void HeuristicParams::validate() const {
    if (population == 0) throw ConfigError("heuristic params: population size m must be positive");
    if (!(breed > 0.0 && breed <= 1.0)) throw ConfigError("heuristic params: beta must lie in (0, 1]");
    if (!(carryover >= 0.0 && carryover < 1.0)) throw ConfigError("heuristic params: gamma must lie in [0, 1)");
    if (!(mutation_gate >= 0.0 && mutation_gate <= 1.0))
        throw ConfigError("heuristic params: mutation gate v must lie in [0, 1]");
}

HeuristicParams HeuristicParams::hill_climb_defaults() {
    HeuristicParams p;
    p.max_iters = 300;
    p.population = 15;
    return p;
}

HeuristicParams HeuristicParams::genetic_defaults() {
    HeuristicParams p;
    p.max_iters = 300;
    p.population = 15;
    p.alpha = 0.30;
    p.breed = 0.40;
    p.carryover = 0.10;
    return p;
}

HeuristicParams HeuristicParams::genetic_local_defaults() {
    HeuristicParams p;
    p.max_iters = 150;
    p.population = 15;
    p.breed = 0.40;
    p.carryover = 0.10;
    p.local_extent = 6;
    return p;
}

PerturbationSampler::PerturbationSampler(std::vector<double> sigma, std::uint64_t seed, double floor)
    : sigma_(std::move(sigma)), rng_(seed) {
    if (sigma_.empty()) throw ConfigError("perturbation sampler: no direct features");
    for (double& s : sigma_) {
        if (!std::isfinite(s)) throw NumericInputError("perturbation sampler: non-finite sigma");
        s = std::max(s, floor);
    }
}

std::pair<std::size_t, double> PerturbationSampler::sample() {
    const std::size_t q = uniform_index(rng_, sigma_.size());
    const double b = std::normal_distribution<double>(0.0, sigma_[q])(rng_);
    return {q, b};
}

Row displacement(const Objective& objective, std::span<const double> x) {
    const auto& base = objective.base_direct();
    Row z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - base[i];
    return z;
}

Row feasible_point(const Objective& objective, std::span<const double> w) {
    Row x = objective.project(w).z;
    const auto& base = objective.base_direct();
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += base[i];
    return x;
}

SearchPoint local_search(const Objective& objective, Row x, std::optional<double> incumbent_value,
                         PerturbationSampler& sampler, std::size_t m) {
    if (m == 0) return {std::move(x), incumbent_value};
    if (!incumbent_value) incumbent_value = objective(displacement(objective, x));

    const Row offset = displacement(objective, x);
    std::vector<Row> candidates;
    candidates.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        auto [q, b] = sampler.sample();
        Row w = offset;
        w[q] += b;
        candidates.push_back(objective.project(w).z);
    }
    std::vector<double> values(m);
    for (std::size_t j = 0; j < m; ++j) values[j] = objective(candidates[j]);

    const std::size_t best = argmin_first(values);
    if (values[best] < *incumbent_value) {
        Row moved = candidates[best];
        const auto& base = objective.base_direct();
        for (std::size_t i = 0; i < moved.size(); ++i) moved[i] += base[i];
        return {std::move(moved), values[best]};
    }
    return {std::move(x), incumbent_value};
}

OptimizationResult hill_climb(const Objective& objective, const std::vector<double>& sigma,
                              const HeuristicParams& params) {
    params.validate();
    const std::uint64_t start = objective.evaluations();
    PerturbationSampler sampler(sigma, derive_seed(params.seed, {kPerturbStream}));

    OptimizationResult out;
    out.z.assign(objective.dim(), 0.0);
    out.initial = objective(out.z);
    Row x = objective.base_direct();
    double value = out.initial;
    for (std::size_t it = 0; it < params.max_iters; ++it) {
        auto step = local_search(objective, std::move(x), value, sampler, params.population);
        x = std::move(step.x);
        value = *step.value;
    }
    out.z = displacement(objective, x);
    out.x = std::move(x);
    out.value = value;
    out.evaluations = objective.evaluations() - start;
    return out;
}

Population init_population(const Objective& objective, PerturbationSampler& sampler, std::size_t m) {
    const std::size_t d = objective.dim();
    Population pop;
    pop.rows.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t t = 1 + uniform_index(sampler.rng(), d);
        Row b(d, 0.0);
        for (std::size_t k = 0; k < t; ++k) {
            auto [q, v] = sampler.sample();
            b[q] += v;
        }
        pop.rows.push_back(feasible_point(objective, b));
    }
    pop.values.assign(m, std::nullopt);
    return pop;
}

std::vector<std::size_t> breeding_indices(std::size_t pool, std::size_t children, Rng& rng) {
    if (pool == 0) throw ConfigError("breeding: empty parent pool");
    std::vector<std::size_t> theta;
    theta.reserve(children);
    for (std::size_t k = 0; k < children; ++k)
        theta.push_back(k < pool ? k : uniform_index(rng, pool));
    return theta;
}

std::pair<Row, Row> crossover(std::span<const double> a, std::span<const double> b, std::size_t q) {
    if (a.size() != b.size()) throw DimensionError("crossover: parent length mismatch");
    Row first(a.size()), second(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        first[i] = i < q ? a[i] : b[i];
        second[i] = i < q ? b[i] : a[i];
    }
    return {std::move(first), std::move(second)};
}

std::vector<Row> make_children(const Objective& objective, const std::vector<Row>& cross,
                               std::span<const std::size_t> theta, Rng& structure_rng,
                               PerturbationSampler& mutation_sampler, double mutation_gate, bool mutate) {
    if (theta.size() % 2 != 0) throw ConfigError("make_children: need an even number of parent slots");
    const std::size_t pairs = theta.size() / 2;
    const std::size_t d = objective.dim();
    std::vector<std::size_t> points(pairs);
    for (auto& q : points) q = uniform_index(structure_rng, d);

    std::vector<Row> children;
    children.reserve(theta.size());
    for (std::size_t k = 0; k < pairs; ++k) {
        auto [first, second] = crossover(cross.at(theta[2 * k]), cross.at(theta[2 * k + 1]), points[k]);
        children.push_back(std::move(first));
        children.push_back(std::move(second));
    }
    if (mutate) {
        for (auto& child : children) {
            // I_v = 1 with probability 1 - v.
            if (uniform_unit(mutation_sampler.rng()) >= mutation_gate) {
                auto [q, b] = mutation_sampler.sample();
                child[q] += b;
            }
        }
    }
    for (auto& child : children) child = feasible_point(objective, displacement(objective, child));
    return children;
}

std::vector<double> selection_probabilities(std::span<const double> values, double omega) {
    std::vector<double> p(values.size());
    double total = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (values[j] > omega)
            throw ConfigError("selection: objective value exceeds the worst-case constant omega");
        total += (p[j] = omega - values[j]);
    }
    if (!(total > 0.0)) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(values.size()));
        return p;
    }
    for (double& v : p) v /= total;
    return p;
}

std::vector<std::size_t> select_carryover(std::span<const double> values, std::size_t count, double omega,
                                          Rng& rng) {
    const auto p = selection_probabilities(values, omega);
    std::vector<double> cumulative(p.size());
    std::partial_sum(p.begin(), p.end(), cumulative.begin());
    std::vector<std::size_t> picks;
    picks.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double u = uniform_unit(rng) * cumulative.back();
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        picks.push_back(it == cumulative.end() ? p.size() - 1
                                               : static_cast<std::size_t>(it - cumulative.begin()));
    }
    return picks;
}

std::pair<std::size_t, std::size_t> generation_split(std::size_t m, double carryover) {
    const std::size_t children = std::clamp<std::size_t>(ceil_share(m, 1.0 - carryover), 1, m);
    return {children, m - children};
}

std::size_t parent_pool_size(std::size_t m, double breed) {
    return std::clamp<std::size_t>(ceil_share(m, breed), 1, m);
}

namespace {

OptimizationResult run_genetic(const Objective& objective, const std::vector<double>& sigma,
                               const HeuristicParams& params, bool with_local_search, GeneticTrace* trace) {
    params.validate();
    if (params.population < 2) throw ConfigError("genetic: population size m must be at least 2");
    const std::uint64_t start = objective.evaluations();
    PerturbationSampler perturb(sigma, derive_seed(params.seed, {kPerturbStream}));
    PerturbationSampler mutation(sigma, derive_seed(params.seed, {kMutationStream}));
    Rng structure(derive_seed(params.seed, {kStructureStream}));
    const double omega = objective.omega();
    const std::size_t m = params.population;
    const auto [n_children, n_carry] = generation_split(m, params.carryover);
    const std::size_t pool = parent_pool_size(m, params.breed);

    OptimizationResult out;
    out.z.assign(objective.dim(), 0.0);
    out.initial = objective(out.z);
    Row best = objective.base_direct();
    double best_value = out.initial;

    Population pop;
    for (std::size_t iter = 1; iter <= params.max_iters; ++iter) {
        if (iter == 1) pop = init_population(objective, perturb, m);
        pop.generation = iter;

        std::vector<double> values(pop.size());
        for (std::size_t j = 0; j < pop.size(); ++j) {
            if (!pop.values[j]) pop.values[j] = objective(displacement(objective, pop.rows[j]));
            values[j] = *pop.values[j];
        }
        if (trace) trace->generations.push_back(pop);

        const std::size_t j_best = argmin_first(values);
        if (values[j_best] < best_value) {
            best_value = values[j_best];
            best = pop.rows[j_best];
        }

        std::vector<std::size_t> order(pop.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<Row> sorted_rows;
        std::vector<double> sorted_values;
        for (std::size_t j : order) {
            sorted_rows.push_back(pop.rows[j]);
            sorted_values.push_back(values[j]);
        }

        std::vector<Row> cross(sorted_rows.begin(), sorted_rows.begin() + static_cast<std::ptrdiff_t>(pool));
        std::shuffle(cross.begin(), cross.end(), structure);

        const std::size_t slots = n_children + (n_children % 2);
        const auto theta = breeding_indices(pool, slots, structure);
        auto children = make_children(objective, cross, theta, structure, mutation, params.mutation_gate,
                                      !with_local_search);
        children.resize(n_children);

        Population next;
        next.rows.reserve(m);
        next.values.reserve(m);
        for (auto& child : children) {
            if (with_local_search) {
                auto refined = local_search(objective, std::move(child), std::nullopt, perturb, params.local_extent);
                next.rows.push_back(std::move(refined.x));
                next.values.push_back(refined.value);
            } else {
                next.rows.push_back(std::move(child));
                next.values.push_back(std::nullopt);
            }
        }
        for (std::size_t j : select_carryover(sorted_values, n_carry, omega, structure)) {
            next.rows.push_back(sorted_rows[j]);
            next.values.push_back(sorted_values[j]);
        }
        pop = std::move(next);
    }

    out.z = displacement(objective, best);
    out.x = std::move(best);
    out.value = best_value;
    out.evaluations = objective.evaluations() - start;
    return out;
}

} // namespace

OptimizationResult genetic(const Objective& objective, const std::vector<double>& sigma,
                           const HeuristicParams& params) {
    return run_genetic(objective, sigma, params, false, nullptr);
}

OptimizationResult genetic_local(const Objective& objective, const std::vector<double>& sigma,
                                 const HeuristicParams& params) {
    return run_genetic(objective, sigma, params, true, nullptr);
}

OptimizationResult genetic(const Objective& objective, const std::vector<double>& sigma,
                           const HeuristicParams& params, GeneticTrace* trace) {
    return run_genetic(objective, sigma, params, false, trace);
}

OptimizationResult genetic_local(const Objective& objective, const std::vector<double>& sigma,
                                 const HeuristicParams& params, GeneticTrace* trace) {
    return run_genetic(objective, sigma, params, true, trace);
}

} // namespace gic
