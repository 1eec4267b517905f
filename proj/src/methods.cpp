#include "gic/methods.hpp"

#include "gic/error.hpp"

namespace gic {

std::string to_string(Method method) {
    switch (method) {
    case Method::HillClimbLocal: return "hc-ls";
    case Method::Genetic: return "ga";
    case Method::GeneticLocal: return "ga-ls";
    case Method::LvpFirst: return "lvp-fi";
    case Method::LvpBest: return "lvp-bi";
    }
    return "unknown";
}

Method parse_method(const std::string& text) {
    for (Method m : all_methods())
        if (to_string(m) == text) return m;
    throw ConfigError("unknown method '" + text + "' (expected hc-ls, ga, ga-ls, lvp-fi or lvp-bi)");
}

std::vector<Method> all_methods() {
    return {Method::HillClimbLocal, Method::Genetic, Method::GeneticLocal, Method::LvpFirst, Method::LvpBest};
}

bool is_heuristic(Method method) {
    return method == Method::HillClimbLocal || method == Method::Genetic || method == Method::GeneticLocal;
}

OptimizationResult run_method(Method method, const Objective& objective, const std::vector<double>& sigma,
                              const MethodSettings& settings, std::uint64_t seed) {
    switch (method) {
    case Method::HillClimbLocal: {
        auto p = settings.hill_climb;
        p.seed = seed;
        return hill_climb(objective, sigma, p);
    }
    case Method::Genetic: {
        auto p = settings.genetic;
        p.seed = seed;
        return genetic(objective, sigma, p);
    }
    case Method::GeneticLocal: {
        auto p = settings.genetic_local;
        p.seed = seed;
        return genetic_local(objective, sigma, p);
    }
    case Method::LvpFirst: return lvp_first_improvement(objective, seed);
    case Method::LvpBest: return lvp_best_improvement(objective);
    }
    throw ConfigError("run_method: unhandled method");
}

} // namespace gic
