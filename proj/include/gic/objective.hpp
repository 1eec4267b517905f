#pragma once

// g(z) = f(x̄_U, H(x̄_D + z, x̄_U), x̄_D + z): the quantity every optimizer
// minimizes over feasible perturbations z of the direct features.

#include "gic/core.hpp"
#include "gic/forest.hpp"
#include "gic/indirect.hpp"

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

namespace gic {

class Objective {
public:
    /// bounds must already be expressed around this instance (see
    /// hardline_bounds / BoundSpec::around). indirect may be null only when
    /// the partition has no indirect features.
    Objective(const Classifier& classifier, const IndirectModel* indirect, FeaturePartition partition,
              std::vector<double> instance, CostSpec costs, BoundSpec bounds, double budget,
              double tol = kDefaultProjectionTol);

    Objective(const Objective&) = delete;
    Objective& operator=(const Objective&) = delete;

    /// g(z); counts one evaluation. Feasibility is not required.
    double operator()(std::span<const double> z) const;

    /// Full feature vector in original index order for perturbation z.
    std::vector<double> assemble(std::span<const double> z) const;

    /// Proj onto this instance's feasible set.
    Projection project(std::span<const double> w) const;
    bool feasible(std::span<const double> z) const;

    /// f(x̄) with the observed indirect values; not counted.
    double raw_probability() const;

    std::size_t dim() const { return partition_.direct().size(); }
    const std::vector<double>& instance() const { return instance_; }
    const std::vector<double>& base_direct() const { return base_direct_; }
    const FeaturePartition& partition() const { return partition_; }
    const CostSpec& costs() const { return costs_; }
    const BoundSpec& bounds() const { return bounds_; }
    double budget() const { return budget_; }
    double tol() const { return tol_; }
    double omega() const { return classifier_.worst_case(); }
    const Classifier& classifier() const { return classifier_; }
    const IndirectModel* indirect() const { return indirect_; }

    std::uint64_t evaluations() const { return evaluations_.load(std::memory_order_relaxed); }
    /// Number of assemblies where H fell back to its nearest neighbor.
    std::uint64_t indirect_fallbacks() const { return fallbacks_.load(std::memory_order_relaxed); }

private:
    const Classifier& classifier_;
    const IndirectModel* indirect_;
    FeaturePartition partition_;
    std::vector<double> instance_;
    std::vector<double> base_direct_;
    std::vector<double> base_unchangeable_;
    IndirectModel::Anchor anchor_;
    CostSpec costs_;
    BoundSpec bounds_;
    double budget_;
    double tol_;
    mutable std::atomic<std::uint64_t> evaluations_{0};
    mutable std::atomic<std::uint64_t> fallbacks_{0};
};

} // namespace gic
