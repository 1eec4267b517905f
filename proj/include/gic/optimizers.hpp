#pragma once

// Heuristic search over feasible perturbations: local search, hill climbing
// with local search, a real-valued genetic algorithm and the genetic
// algorithm with local-search refinement of its children.

#include "gic/objective.hpp"
#include "gic/random.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace gic {

struct HeuristicParams {
    std::size_t population = 15;   // m
    std::size_t max_iters = 300;   // MaxIters
    double breed = 0.40;           // β, share of the ordered population used as parents
    double carryover = 0.10;       // γ, share of the next population carried over
    /// v. A child is mutated when the gate I_v equals one, which happens with
    /// probability 1 - v; v = 1 disables mutation.
    double mutation_gate = 0.70;
    std::size_t local_extent = 6;  // ξ, LS sample size inside GA+LS
    std::optional<double> alpha;   // accepted for config fidelity, unused
    std::uint64_t seed = 0;

    void validate() const;

    static HeuristicParams hill_climb_defaults();
    static HeuristicParams genetic_defaults();
    static HeuristicParams genetic_local_defaults();
};

/// Draws (q, b_q): q uniform over the direct features, b_q ~ Normal(0, σ_q²).
class PerturbationSampler {
public:
    /// sigma[q] below floor is replaced by floor.
    PerturbationSampler(std::vector<double> sigma, std::uint64_t seed, double floor = 1e-6);

    std::pair<std::size_t, double> sample();
    std::size_t dim() const { return sigma_.size(); }
    const std::vector<double>& sigma() const { return sigma_; }
    Rng& rng() { return rng_; }

private:
    std::vector<double> sigma_;
    Rng rng_;
};

using Row = std::vector<double>;

struct Population {
    std::vector<Row> rows;                       // candidate x_D vectors
    std::vector<std::optional<double>> values;   // cached g(row - x̄_D)
    std::size_t generation = 0;

    std::size_t size() const { return rows.size(); }
};

struct SearchPoint {
    Row x;                        // x_D
    std::optional<double> value;  // g(x - x̄_D); unknown only when m = 0 and none was given
};

struct OptimizationResult {
    Row x;               // best x_D
    Row z;               // x - x̄_D
    double initial = 0;  // g(0)
    double value = 0;    // g(z)
    std::uint64_t evaluations = 0;
};

/// x_D − x̄_D as a fresh vector.
Row displacement(const Objective& objective, std::span<const double> x);
/// x̄_D + Proj(w).
Row feasible_point(const Objective& objective, std::span<const double> w);

/// One LS step from incumbent x. Draws m single-feature perturbations,
/// projects x + b e_q − x̄_D, and moves to the best only on strict
/// improvement. incumbent_value is g(x − x̄_D) if already known; it is
/// evaluated here only when m > 0 and it is missing.
SearchPoint local_search(const Objective& objective, Row x, std::optional<double> incumbent_value,
                         PerturbationSampler& sampler, std::size_t m);

OptimizationResult hill_climb(const Objective& objective, const std::vector<double>& sigma,
                              const HeuristicParams& params);

/// Initial GA population: row j is x̄_D + Proj(b_j), b_j the sum of t_j
/// single-feature draws with t_j uniform on {1..|D|}. Values are not evaluated.
Population init_population(const Objective& objective, PerturbationSampler& sampler, std::size_t m);

/// Index vector ϑ of length children: 0..children-1 when children <= pool,
/// otherwise 0..pool-1 followed by uniform draws from the pool.
std::vector<std::size_t> breeding_indices(std::size_t pool, std::size_t children, Rng& rng);

/// Single-point crossover of consecutive pairs (ϑ[2k], ϑ[2k+1]) of cross, then
/// optional gated mutation, then projection to feasibility. Crossover points
/// are all drawn from structure_rng before any mutation draw, and mutation
/// only touches mutation_sampler, so mutate=false and mutation_gate=1 produce
/// the same children.
std::vector<Row> make_children(const Objective& objective, const std::vector<Row>& cross,
                               std::span<const std::size_t> theta, Rng& structure_rng,
                               PerturbationSampler& mutation_sampler, double mutation_gate, bool mutate);

/// Children of parents a and b cut at 0-based point q: the first child takes
/// a[0..q) and b[q..); the second the complement.
std::pair<Row, Row> crossover(std::span<const double> a, std::span<const double> b, std::size_t q);

/// 𝒫_j = (ω − g_j) / Σ(ω − g); uniform when the sum is zero.
std::vector<double> selection_probabilities(std::span<const double> values, double omega);

/// count roulette draws with replacement; returns row indices.
std::vector<std::size_t> select_carryover(std::span<const double> values, std::size_t count, double omega,
                                          Rng& rng);

/// Children and carryover counts for a population of m: children =
/// ceil(m(1−γ)), carryover = m − children.
std::pair<std::size_t, std::size_t> generation_split(std::size_t m, double carryover);
std::size_t parent_pool_size(std::size_t m, double breed);

OptimizationResult genetic(const Objective& objective, const std::vector<double>& sigma,
                           const HeuristicParams& params);
OptimizationResult genetic_local(const Objective& objective, const std::vector<double>& sigma,
                                 const HeuristicParams& params);

/// Every population at the top of a generation, after evaluation.
struct GeneticTrace {
    std::vector<Population> generations;
};

OptimizationResult genetic(const Objective& objective, const std::vector<double>& sigma,
                           const HeuristicParams& params, GeneticTrace* trace);
OptimizationResult genetic_local(const Objective& objective, const std::vector<double>& sigma,
                                 const HeuristicParams& params, GeneticTrace* trace);

} // namespace gic
