#include "gic/baselines.hpp"

#include "gic/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gic {

double max_feasible_step(std::size_t i, StepDirection direction, std::span<const double> z,
                         const CostSpec& costs, const BoundSpec& bounds, double budget) {
    if (i >= z.size()) throw DimensionError("max_feasible_step: feature index out of range");
    const double others = cost(z, costs) - coordinate_cost(z[i], costs.increase[i], costs.decrease[i], costs.kind);
    const double allowance = std::max(0.0, budget - others);
    const bool up = direction == StepDirection::Increase;
    const double c = up ? costs.increase[i] : costs.decrease[i];

    double reach = std::numeric_limits<double>::infinity();
    if (c > 0.0) reach = costs.kind == CostKind::Quadratic ? std::sqrt(allowance / c) : allowance / c;
    const double target = up ? std::min(reach, bounds.upper_shift[i]) : std::max(-reach, bounds.lower_shift[i]);
    if (!std::isfinite(target))
        throw ConfigError("max_feasible_step: unbounded cost-free move at direct index " + std::to_string(i));

    const double delta = up ? target - z[i] : z[i] - target;
    if (delta <= 1e-12 * std::max(1.0, std::abs(target))) return 0.0;
    return delta;
}

namespace {

constexpr StepDirection kDirections[] = {StepDirection::Increase, StepDirection::Decrease};

// z moved along i by the saturating step; empty when the feature is saturated.
std::optional<Row> saturating_move(const Objective& objective, const Row& z, std::size_t i, StepDirection dir) {
    const double delta = max_feasible_step(i, dir, z, objective.costs(), objective.bounds(), objective.budget());
    if (delta <= 0.0) return std::nullopt;
    Row moved = z;
    moved[i] += dir == StepDirection::Increase ? delta : -delta;
    // Clamp against rounding so the box holds exactly.
    moved[i] = std::clamp(moved[i], objective.bounds().lower_shift[i], objective.bounds().upper_shift[i]);
    return moved;
}

OptimizationResult finish(const Objective& objective, Row z, double value, double initial, std::uint64_t start) {
    OptimizationResult out;
    out.x = objective.base_direct();
    for (std::size_t i = 0; i < z.size(); ++i) out.x[i] += z[i];
    out.z = std::move(z);
    out.value = value;
    out.initial = initial;
    out.evaluations = objective.evaluations() - start;
    return out;
}

} // namespace

OptimizationResult lvp_best_improvement(const Objective& objective) {
    const std::uint64_t start = objective.evaluations();
    const std::size_t d = objective.dim();
    Row z(d, 0.0);
    const double initial = objective(z);
    double value = initial;

    for (std::size_t accepted = 0; accepted < 10 * d; ++accepted) {
        std::optional<Row> best;
        double best_value = value;
        for (std::size_t i = 0; i < d; ++i) {
            for (StepDirection dir : kDirections) {
                auto moved = saturating_move(objective, z, i, dir);
                if (!moved) continue;
                const double v = objective(*moved);
                if (v < best_value) {
                    best_value = v;
                    best = std::move(moved);
                }
            }
        }
        if (!best) break;
        z = std::move(*best);
        value = best_value;
    }
    return finish(objective, std::move(z), value, initial, start);
}

OptimizationResult lvp_first_improvement(const Objective& objective, std::uint64_t seed) {
    const std::uint64_t start = objective.evaluations();
    const std::size_t d = objective.dim();
    Rng rng(seed);
    Row z(d, 0.0);
    const double initial = objective(z);
    double value = initial;

    std::vector<std::size_t> order(d);
    for (std::size_t accepted = 0; accepted < 10 * d; ++accepted) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        bool improved = false;
        for (std::size_t i : order) {
            for (StepDirection dir : kDirections) {
                auto moved = saturating_move(objective, z, i, dir);
                if (!moved) continue;
                const double v = objective(*moved);
                if (v < value) {
                    z = std::move(*moved);
                    value = v;
                    improved = true;
                    break;
                }
            }
            if (improved) break;
        }
        if (!improved) break;
    }
    return finish(objective, std::move(z), value, initial, start);
}

} // namespace gic
