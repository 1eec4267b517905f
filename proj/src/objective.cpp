#include "gic/objective.hpp"

#include "gic/error.hpp"

#include <cmath>

namespace gic {

Objective::Objective(const Classifier& classifier, const IndirectModel* indirect, FeaturePartition partition,
                     std::vector<double> instance, CostSpec costs, BoundSpec bounds, double budget, double tol)
    : classifier_(classifier), indirect_(indirect), partition_(std::move(partition)),
      instance_(std::move(instance)), costs_(std::move(costs)), bounds_(std::move(bounds)), budget_(budget),
      tol_(tol) {
    if (instance_.size() != partition_.size())
        throw DimensionError("objective: instance length " + std::to_string(instance_.size()) +
                             " does not match partition size " + std::to_string(partition_.size()));
    if (classifier_.num_features() != instance_.size())
        throw DimensionError("objective: classifier expects " + std::to_string(classifier_.num_features()) +
                             " features, instance has " + std::to_string(instance_.size()));
    const std::size_t d = partition_.direct().size();
    if (d == 0) throw ConfigError("objective: no directly changeable features");
    if (costs_.increase.size() != d || costs_.decrease.size() != d)
        throw DimensionError("objective: cost spec does not match |D|");
    if (bounds_.lower_shift.size() != d || bounds_.upper_shift.size() != d)
        throw DimensionError("objective: bound spec does not match |D|");
    if (!(budget_ >= 0.0)) throw InvalidBudgetError("objective: budget must be nonnegative");
    if (!partition_.indirect().empty()) {
        if (indirect_ == nullptr) throw ConfigError("objective: indirect features present but no estimator");
        if (indirect_->output_dim() != partition_.indirect().size() ||
            indirect_->input_dim() != d + partition_.unchangeable().size())
            throw DimensionError("objective: indirect estimator shape does not match partition");
    }
    costs_.validate();
    for (std::size_t j : partition_.direct()) base_direct_.push_back(instance_[j]);
    for (std::size_t j : partition_.unchangeable()) base_unchangeable_.push_back(instance_[j]);
    if (!partition_.indirect().empty()) anchor_ = indirect_->anchor(base_unchangeable_);
    for (std::size_t i = 0; i < d; ++i)
        if (!(bounds_.lower_shift[i] <= 0.0 && bounds_.upper_shift[i] >= 0.0))
            throw ContradictoryDirectionError("objective: instance lies outside its bounds");
}

std::vector<double> Objective::assemble(std::span<const double> z) const {
    const auto& D = partition_.direct();
    if (z.size() != D.size())
        throw DimensionError("objective: perturbation length " + std::to_string(z.size()) +
                             " does not match |D| = " + std::to_string(D.size()));
    for (double v : z)
        if (!std::isfinite(v)) throw NumericInputError("objective: non-finite perturbation");
    std::vector<double> x = instance_;
    std::vector<double> direct(D.size());
    for (std::size_t i = 0; i < D.size(); ++i) x[D[i]] = direct[i] = base_direct_[i] + z[i];
    const auto& I = partition_.indirect();
    if (!I.empty()) {
        const auto est = indirect_->predict(direct, anchor_);
        if (est.nearest_neighbor_fallback) fallbacks_.fetch_add(1, std::memory_order_relaxed);
        for (std::size_t j = 0; j < I.size(); ++j) x[I[j]] = est.values[j];
    }
    return x;
}

double Objective::operator()(std::span<const double> z) const {
    const auto x = assemble(z);
    evaluations_.fetch_add(1, std::memory_order_relaxed);
    return classifier_.predict_probability(x);
}

Projection Objective::project(std::span<const double> w) const {
    return gic::project(w, costs_, bounds_, budget_, tol_);
}

bool Objective::feasible(std::span<const double> z) const {
    return is_feasible(z, costs_, bounds_, budget_, tol_);
}

double Objective::raw_probability() const { return classifier_.predict_probability(instance_); }

} // namespace gic
