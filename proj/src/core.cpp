#include "gic/core.hpp"

#include "gic/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gic {

std::string to_string(FeatureRole role) {
    switch (role) {
    case FeatureRole::Unchangeable: return "unchangeable";
    case FeatureRole::Direct: return "direct";
    case FeatureRole::Indirect: return "indirect";
    }
    return "unknown";
}

FeatureRole parse_feature_role(const std::string& text) {
    if (text == "unchangeable" || text == "U") return FeatureRole::Unchangeable;
    if (text == "direct" || text == "D") return FeatureRole::Direct;
    if (text == "indirect" || text == "I") return FeatureRole::Indirect;
    throw ConfigError("unknown feature role '" + text + "'");
}

FeaturePartition::FeaturePartition(std::vector<FeatureRole> roles) : roles_(std::move(roles)) {
    for (std::size_t i = 0; i < roles_.size(); ++i) {
        switch (roles_[i]) {
        case FeatureRole::Unchangeable: unchangeable_.push_back(i); break;
        case FeatureRole::Direct: direct_.push_back(i); break;
        case FeatureRole::Indirect: indirect_.push_back(i); break;
        }
    }
}

std::string to_string(CostKind kind) {
    return kind == CostKind::Linear ? "linear" : "quadratic";
}

CostKind parse_cost_kind(const std::string& text) {
    if (text == "linear") return CostKind::Linear;
    if (text == "quadratic") return CostKind::Quadratic;
    throw ConfigError("unknown cost kind '" + text + "'");
}

void CostSpec::validate() const {
    if (increase.size() != decrease.size())
        throw DimensionError("cost spec: increase/decrease length mismatch");
    for (std::size_t i = 0; i < increase.size(); ++i) {
        if (!(increase[i] >= 0.0) || !(decrease[i] >= 0.0) || !std::isfinite(increase[i]) ||
            !std::isfinite(decrease[i]))
            throw ConfigError("cost spec: costs must be finite and nonnegative (index " +
                              std::to_string(i) + ")");
    }
}

std::string to_string(Direction direction) {
    switch (direction) {
    case Direction::IncreaseOnly: return "increase";
    case Direction::DecreaseOnly: return "decrease";
    case Direction::Both: return "both";
    }
    return "unknown";
}

Direction parse_direction(const std::string& text) {
    if (text == "increase") return Direction::IncreaseOnly;
    if (text == "decrease") return Direction::DecreaseOnly;
    if (text == "both") return Direction::Both;
    throw ConfigError("unknown direction '" + text + "'");
}

BoundSpec BoundSpec::around(std::span<const double> x_bar, std::vector<double> lower,
                            std::vector<double> upper) {
    if (lower.size() != x_bar.size() || upper.size() != x_bar.size())
        throw DimensionError("bound spec: length mismatch with instance");
    BoundSpec b;
    b.lower_shift.resize(x_bar.size());
    b.upper_shift.resize(x_bar.size());
    for (std::size_t i = 0; i < x_bar.size(); ++i) {
        if (lower[i] > upper[i])
            throw ContradictoryDirectionError("bounds: lower > upper at direct index " +
                                              std::to_string(i));
        if (x_bar[i] < lower[i] || x_bar[i] > upper[i])
            throw ContradictoryDirectionError("bounds: instance value outside [lower, upper] at direct index " +
                                              std::to_string(i));
        b.lower_shift[i] = lower[i] - x_bar[i];
        b.upper_shift[i] = upper[i] - x_bar[i];
    }
    b.lower = std::move(lower);
    b.upper = std::move(upper);
    return b;
}

BoundSpec BoundSpec::shifted(std::vector<double> lower_shift, std::vector<double> upper_shift) {
    if (lower_shift.size() != upper_shift.size())
        throw DimensionError("bound spec: lower/upper length mismatch");
    for (std::size_t i = 0; i < lower_shift.size(); ++i) {
        if (!(lower_shift[i] <= 0.0 && upper_shift[i] >= 0.0))
            throw ContradictoryDirectionError("shifted bounds must bracket zero at index " +
                                              std::to_string(i));
    }
    BoundSpec b;
    b.lower = lower_shift;
    b.upper = upper_shift;
    b.lower_shift = std::move(lower_shift);
    b.upper_shift = std::move(upper_shift);
    return b;
}

double coordinate_cost(double zi, double increase, double decrease, CostKind kind) {
    if (zi > 0.0) return kind == CostKind::Quadratic ? increase * zi * zi : increase * zi;
    if (zi < 0.0) return kind == CostKind::Quadratic ? decrease * zi * zi : -decrease * zi;
    return 0.0;
}

double cost(std::span<const double> z, const CostSpec& costs) {
    if (z.size() != costs.increase.size() || z.size() != costs.decrease.size())
        throw DimensionError("cost: perturbation length " + std::to_string(z.size()) +
                             " does not match cost spec length " +
                             std::to_string(costs.increase.size()));
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
        total += coordinate_cost(z[i], costs.increase[i], costs.decrease[i], costs.kind);
    return total;
}

double clamp_scaled(double w, double lambda, std::size_t i, const CostSpec& costs,
                    const BoundSpec& bounds) {
    const double c = w >= 0.0 ? costs.increase[i] : costs.decrease[i];
    double v;
    if (costs.kind == CostKind::Quadratic) {
        v = w / (1.0 + 2.0 * lambda * c);
    } else {
        const double shift = lambda * c;
        v = w >= 0.0 ? std::max(w - shift, 0.0) : std::min(w + shift, 0.0);
    }
    return std::max(std::min(v, bounds.upper_shift[i]), bounds.lower_shift[i]);
}

namespace {

void clamp_all(std::span<const double> w, double lambda, const CostSpec& costs,
               const BoundSpec& bounds, std::vector<double>& out) {
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = clamp_scaled(w[i], lambda, i, costs, bounds);
}

} // namespace

Projection project(std::span<const double> w, const CostSpec& costs, const BoundSpec& bounds,
                   double budget, double tol) {
    const std::size_t n = w.size();
    if (costs.increase.size() != n || costs.decrease.size() != n || bounds.lower_shift.size() != n ||
        bounds.upper_shift.size() != n)
        throw DimensionError("project: dimension mismatch between w, costs and bounds");
    if (!(budget >= 0.0)) throw InvalidBudgetError("project: budget must be nonnegative");
    if (!(tol > 0.0)) throw InvalidBudgetError("project: tolerance must be positive");
    for (double wi : w)
        if (!std::isfinite(wi)) throw NumericInputError("project: non-finite input");

    Projection out;
    out.z.resize(n);
    clamp_all(w, 0.0, costs, bounds, out.z);
    out.cost = cost(out.z, costs);
    if (out.cost <= budget) return out;

    if (budget == 0.0) {
        // λ → ∞ limit: every priced coordinate collapses to zero, cost-free
        // directions keep their clamped value.
        for (std::size_t i = 0; i < n; ++i) {
            const double c = w[i] >= 0.0 ? costs.increase[i] : costs.decrease[i];
            if (c > 0.0) out.z[i] = 0.0;
        }
        out.lambda = std::numeric_limits<double>::infinity();
        out.cost = cost(out.z, costs);
        return out;
    }

    std::vector<double> trial(n);
    auto residual = [&](double lambda) {
        clamp_all(w, lambda, costs, bounds, trial);
        return cost(trial, costs);
    };

    double hi = 1.0;
    for (int k = 0; residual(hi) > budget; ++k) {
        if (k > 4000) throw NumericInputError("project: failed to bracket the multiplier");
        hi *= 2.0;
    }
    double lo = hi == 1.0 ? 0.0 : 0.5 * hi;

    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        const double r = residual(mid);
        if (std::abs(r - budget) <= tol && r <= budget + tol) {
            out.z = trial;
            out.lambda = mid;
            out.cost = r;
            return out;
        }
        if (r > budget)
            lo = mid;
        else
            hi = mid;
    }
    clamp_all(w, hi, costs, bounds, out.z);
    out.lambda = hi;
    out.cost = cost(out.z, costs);
    return out;
}

bool is_feasible(std::span<const double> z, const CostSpec& costs, const BoundSpec& bounds,
                 double budget, double tol) {
    if (z.size() != bounds.lower_shift.size()) return false;
    for (std::size_t i = 0; i < z.size(); ++i)
        if (!(z[i] >= bounds.lower_shift[i] && z[i] <= bounds.upper_shift[i])) return false;
    return cost(z, costs) <= budget + tol;
}

BoundSpec hardline_bounds(std::span<const double> x_bar_direct, const DirectionSpec& directions,
                          const std::vector<double>& raw_lower, const std::vector<double>& raw_upper) {
    const std::size_t n = x_bar_direct.size();
    if (directions.size() != n || raw_lower.size() != n || raw_upper.size() != n)
        throw DimensionError("hardline_bounds: dimension mismatch");
    std::vector<double> lower(raw_lower), upper(raw_upper);
    for (std::size_t i = 0; i < n; ++i) {
        if (raw_lower[i] > raw_upper[i])
            throw ContradictoryDirectionError("hardline_bounds: raw lower > upper at direct index " +
                                              std::to_string(i));
        if (directions[i] == Direction::IncreaseOnly) lower[i] = x_bar_direct[i];
        if (directions[i] == Direction::DecreaseOnly) upper[i] = x_bar_direct[i];
        if (lower[i] > upper[i])
            throw ContradictoryDirectionError(
                "hardline_bounds: direction " + to_string(directions[i]) +
                " contradicts raw bounds at direct index " + std::to_string(i));
    }
    return BoundSpec::around(x_bar_direct, std::move(lower), std::move(upper));
}

} // namespace gic
