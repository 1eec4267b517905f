#pragma once

#include "gic/baselines.hpp"
#include "gic/optimizers.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gic {

enum class Method { HillClimbLocal, Genetic, GeneticLocal, LvpFirst, LvpBest };

std::string to_string(Method method);  // "hc-ls", "ga", "ga-ls", "lvp-fi", "lvp-bi"
Method parse_method(const std::string& text);
std::vector<Method> all_methods();
bool is_heuristic(Method method);

struct MethodSettings {
    HeuristicParams hill_climb = HeuristicParams::hill_climb_defaults();
    HeuristicParams genetic = HeuristicParams::genetic_defaults();
    HeuristicParams genetic_local = HeuristicParams::genetic_local_defaults();
};

/// Runs one method on one instance; seed replaces the params' own seed.
OptimizationResult run_method(Method method, const Objective& objective, const std::vector<double>& sigma,
                              const MethodSettings& settings, std::uint64_t seed);

} // namespace gic
