#pragma once

// Sensitivity-analysis baselines. Both take budget-saturating single-feature
// steps from the current perturbation; LVP-BI accepts the best improving
// step each round, LVP-FI the first improving one in a random scan order.

#include "gic/optimizers.hpp"

#include <cstdint>
#include <span>

namespace gic {

enum class StepDirection { Increase, Decrease };

/// Largest δ >= 0 such that moving coordinate i by +δ (Increase) or −δ
/// (Decrease) from z stays inside the box and keeps φ <= budget. Returns 0 when
/// the feature is saturated in that direction. Throws ConfigError when the
/// step is unbounded (cost-free direction with an infinite bound).
double max_feasible_step(std::size_t i, StepDirection direction, std::span<const double> z,
                         const CostSpec& costs, const BoundSpec& bounds, double budget);

/// Safety cap on accepted moves is 10 |D|.
OptimizationResult lvp_best_improvement(const Objective& objective);
OptimizationResult lvp_first_improvement(const Objective& objective, std::uint64_t seed);

} // namespace gic
