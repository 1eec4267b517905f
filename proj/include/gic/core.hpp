#pragma once

// Feature partition, change-cost model, bounds and the projection onto the
// budget-and-box feasible set. Every optimizer routes candidates through
// project() so nothing infeasible is ever evaluated.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gic {

enum class FeatureRole { Unchangeable, Direct, Indirect };

std::string to_string(FeatureRole role);
FeatureRole parse_feature_role(const std::string& text);

/// Role of every feature index 0..p-1, with the derived U / D / I index lists
/// kept in ascending order.
class FeaturePartition {
public:
    FeaturePartition() = default;
    explicit FeaturePartition(std::vector<FeatureRole> roles);

    std::size_t size() const { return roles_.size(); }
    FeatureRole role(std::size_t i) const { return roles_.at(i); }
    const std::vector<FeatureRole>& roles() const { return roles_; }

    const std::vector<std::size_t>& unchangeable() const { return unchangeable_; }
    const std::vector<std::size_t>& direct() const { return direct_; }
    const std::vector<std::size_t>& indirect() const { return indirect_; }

private:
    std::vector<FeatureRole> roles_;
    std::vector<std::size_t> unchangeable_;
    std::vector<std::size_t> direct_;
    std::vector<std::size_t> indirect_;
};

enum class CostKind { Linear, Quadratic };

std::string to_string(CostKind kind);
CostKind parse_cost_kind(const std::string& text);

/// Per-direct-feature prices for increasing and decreasing a feature by one
/// unit. Vectors are indexed by position in FeaturePartition::direct().
struct CostSpec {
    std::vector<double> increase;
    std::vector<double> decrease;
    CostKind kind = CostKind::Quadratic;

    std::size_t size() const { return increase.size(); }
    void validate() const;
};

/// Absolute bounds [lower, upper] and the bounds shifted by the instance,
/// lower_shift = lower - x̄ and upper_shift = upper - x̄, which are the box
/// constraints on the perturbation z.
struct BoundSpec {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> lower_shift;
    std::vector<double> upper_shift;

    std::size_t size() const { return lower.size(); }

    /// Builds a spec from absolute bounds and derives the shifted bounds.
    /// Throws ContradictoryDirectionError if x̄ is not inside [lower, upper].
    static BoundSpec around(std::span<const double> x_bar, std::vector<double> lower,
                            std::vector<double> upper);

    /// Box-only spec on z (no instance); lower/upper equal the shifted bounds.
    static BoundSpec shifted(std::vector<double> lower_shift, std::vector<double> upper_shift);
};

enum class Direction { IncreaseOnly, DecreaseOnly, Both };

std::string to_string(Direction direction);
Direction parse_direction(const std::string& text);

using DirectionSpec = std::vector<Direction>;

/// Cost φ(z) of a perturbation under the linear or quadratic model.
double cost(std::span<const double> z, const CostSpec& costs);

/// Single-coordinate contribution to φ.
double coordinate_cost(double zi, double increase, double decrease, CostKind kind);

/// h_i(w, λ): the KKT minimizer for one coordinate at multiplier λ, clamped to
/// [lower_shift[i], upper_shift[i]]. Quadratic costs shrink by 1/(1 + 2λc),
/// linear costs soft-threshold by λc.
double clamp_scaled(double w, double lambda, std::size_t i, const CostSpec& costs,
                    const BoundSpec& bounds);

struct Projection {
    std::vector<double> z;
    double lambda = 0.0;
    double cost = 0.0;
};

inline constexpr double kDefaultProjectionTol = 1e-8;

/// Euclidean projection of w onto {z : φ(z) <= budget, lower_shift <= z <= upper_shift}.
/// The multiplier is found by doubling then bisection; the returned z always
/// satisfies φ(z) <= budget + tol and the box exactly.
Projection project(std::span<const double> w, const CostSpec& costs, const BoundSpec& bounds,
                   double budget, double tol = kDefaultProjectionTol);

/// Feasibility check used by tests and assertions.
bool is_feasible(std::span<const double> z, const CostSpec& costs, const BoundSpec& bounds,
                 double budget, double tol = kDefaultProjectionTol);

/// Hard-line bounds: increase-only features get lower = x̄, decrease-only get
/// upper = x̄, others keep the raw bounds. Shifted bounds are derived around x̄.
BoundSpec hardline_bounds(std::span<const double> x_bar_direct, const DirectionSpec& directions,
                          const std::vector<double>& raw_lower, const std::vector<double>& raw_upper);

} // namespace gic
