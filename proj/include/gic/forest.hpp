#pragma once

// The black-box classifier f. Optimizers only ever see Classifier; Forest is
// the nondifferentiable model used in experiments.

#include "gic/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace gic {

/// Probability of the undesirable (+1) class for a full feature vector.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual std::size_t num_features() const = 0;
    /// Always in [0, 1].
    virtual double predict_probability(std::span<const double> x) const = 0;
    /// ω: an upper bound on predict_probability, used by GA selection.
    virtual double worst_case() const { return 1.0; }
};

/// Wraps an arbitrary callable; handy for toys and for tests.
class FunctionClassifier final : public Classifier {
public:
    using Fn = std::function<double(std::span<const double>)>;
    FunctionClassifier(std::size_t p, Fn fn, double omega = 1.0)
        : p_(p), fn_(std::move(fn)), omega_(omega) {}
    std::size_t num_features() const override { return p_; }
    double predict_probability(std::span<const double> x) const override;
    double worst_case() const override { return omega_; }

private:
    std::size_t p_;
    Fn fn_;
    double omega_;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;     // taken when x[feature] <= threshold
    int right = -1;
    int vote = -1;     // leaf class, +1 or -1
};

class DecisionTree {
public:
    DecisionTree() = default;
    explicit DecisionTree(std::vector<TreeNode> nodes);

    int predict(std::span<const double> x) const;
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::size_t depth() const;

    void validate(std::size_t p) const;

private:
    std::vector<TreeNode> nodes_;
};

struct ForestParams {
    std::size_t n_trees = 100;
    std::size_t max_depth = 8;
    std::size_t features_per_split = 0;  // 0 selects ceil(sqrt(p))
    std::uint64_t seed = 0;
};

class Forest final : public Classifier {
public:
    Forest() = default;
    Forest(std::size_t p, std::vector<DecisionTree> trees, ForestParams params = {});

    std::size_t num_features() const override { return p_; }
    /// Proportion of trees voting +1.
    double predict_probability(std::span<const double> x) const override;
    std::size_t positive_votes(std::span<const double> x) const;

    std::size_t size() const { return trees_.size(); }
    const std::vector<DecisionTree>& trees() const { return trees_; }
    const ForestParams& params() const { return params_; }

private:
    std::size_t p_ = 0;
    std::vector<DecisionTree> trees_;
    ForestParams params_;
};

/// Bagged CART trees with Gini impurity and midpoint thresholds. Each tree is
/// grown on a bootstrap sample of size n; deterministic given params.seed.
Forest train_forest(const LabeledDataset& data, const ForestParams& params);

/// One CART tree on the given row indices (duplicates allowed).
DecisionTree train_tree(const LabeledDataset& data, std::span<const std::size_t> rows,
                        std::size_t max_depth, std::size_t features_per_split, std::uint64_t seed);

} // namespace gic
