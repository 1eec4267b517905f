#pragma once

// Leakage-free evaluation. The data are split in half: the first half trains
// the recommendation model (forest + H) that the optimizers query; the
// holdout half is cut into k folds. Recommendations for fold i are scored by
// an evaluation forest trained on the holdout minus fold i.

#include "gic/core.hpp"
#include "gic/dataset.hpp"
#include "gic/forest.hpp"
#include "gic/indirect.hpp"
#include "gic/methods.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gic {

/// Everything about an inverse-classification problem that does not depend
/// on a particular instance.
struct ProblemSpec {
    FeaturePartition partition;
    CostSpec costs;                  // indexed by position in partition.direct()
    DirectionSpec directions;
    std::vector<double> raw_lower;   // absolute bounds before hard-line adjustment
    std::vector<double> raw_upper;

    void validate() const;
    BoundSpec bounds_for(std::span<const double> instance) const;
};

struct IndirectSettings {
    std::vector<double> sigma;  // pre-fit bandwidths; empty selects by CV
    std::vector<double> grid = default_sigma_grid();
    std::size_t folds = 5;
};

struct TrainedModels {
    Forest forest;
    std::optional<IndirectModel> indirect;  // absent when there are no indirect features
    std::vector<double> direct_sd;          // σ_q of the direct features on the training rows

    const IndirectModel* indirect_ptr() const { return indirect ? &*indirect : nullptr; }
};

TrainedModels train_models(const LabeledDataset& train, const ProblemSpec& problem, const ForestParams& forest,
                           const IndirectSettings& indirect, std::uint64_t seed);

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::vector<std::size_t>> folds;  // holdout partition

    std::vector<std::size_t> holdout() const;
};

/// Random half split (sizes ceil(n/2), floor(n/2)) and k near-equal holdout
/// folds; deterministic given seed.
Split split_and_fold(std::size_t n, std::uint64_t seed, std::size_t k);

enum class SelectionPolicy { PredictedPositive, LabeledPositive, All, Balanced };

std::string to_string(SelectionPolicy policy);
SelectionPolicy parse_selection_policy(const std::string& text);

struct EvaluationPlan {
    std::uint64_t seed = 0;
    std::size_t folds = 10;
    std::vector<double> budgets;
    std::vector<Method> methods = all_methods();
    MethodSettings settings;
    ForestParams forest;
    IndirectSettings indirect;
    SelectionPolicy selection = SelectionPolicy::PredictedPositive;
    std::size_t max_instances = 0;  // 0 keeps every selected instance
    std::size_t threads = 1;
    double tol = kDefaultProjectionTol;

    void validate() const;
};

struct InstanceRecord {
    std::size_t row = 0;
    std::size_t fold = 0;
    double budget = 0.0;
    double initial_probability = 0.0;         // evaluation model at z = 0 (H-reconstructed)
    double raw_initial_probability = 0.0;     // evaluation model on the observed instance
    double final_probability = 0.0;          // evaluation model at the recommendation
    double recommendation_initial = 0.0;     // g(0) under the recommendation model
    double recommendation_final = 0.0;       // g(z)
    std::vector<double> z;
    std::uint64_t seed = 0;              // optimizer seed for this run
    std::uint64_t evaluations = 0;
    double wall_seconds = 0.0;
};

struct CurvePoint {
    Method method = Method::Genetic;
    double budget = 0.0;
    double mean = 0.0;
    double p5 = 0.0;
    double p95 = 0.0;
    std::size_t count = 0;
    double mean_evaluations = 0.0;
};

struct CurveResult {
    std::vector<CurvePoint> points;                     // method-major, budget-minor
    std::vector<std::vector<InstanceRecord>> records;   // same order as points
    std::vector<std::size_t> instances;                 // selected rows
    double baseline_mean = 0.0;                         // mean initial_probability
    std::size_t train_rows = 0;
    std::size_t holdout_rows = 0;
};

/// Linear-interpolation percentile (q in [0, 100]).
double percentile(std::vector<double> values, double q);

/// The recommendation model evaluate() trains on the train half; exposed so
/// `train` and `optimize` use the same seeds.
TrainedModels train_recommendation(const LabeledDataset& train, const ProblemSpec& problem,
                                   const EvaluationPlan& plan);

CurveResult evaluate(const LabeledDataset& data, const ProblemSpec& problem, const EvaluationPlan& plan);

CurveResult evaluate_method(Method method, EvaluationPlan plan, const LabeledDataset& data,
                            const ProblemSpec& problem);

/// Throws std::logic_error if any two of the three row sets share a row.
void check_disjoint(const std::vector<std::size_t>& recommendation_rows, const std::vector<std::size_t>& fold_rows,
                    const std::vector<std::size_t>& evaluation_rows);

/// Runs fn(i) for i in [0, n) on up to threads workers.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

} // namespace gic
