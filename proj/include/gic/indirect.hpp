#pragma once

// H: estimates the indirectly changeable features from the direct and
// unchangeable ones with Nadaraya-Watson kernel regression. Each output
// feature has its own Gaussian bandwidth.

#include "gic/core.hpp"
#include "gic/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gic {

struct KernelPrediction {
    std::vector<double> values;
    /// Set when every kernel weight underflowed and the nearest training
    /// target was returned instead.
    bool nearest_neighbor_fallback = false;
};

class IndirectModel {
public:
    IndirectModel() = default;

    /// inputs: n x d row-major (direct block then unchangeable block),
    /// targets: n x t row-major, sigma: t bandwidths. Inputs are z-scored with
    /// their own column statistics before any distance is taken.
    IndirectModel(std::size_t n, std::size_t d, std::vector<double> inputs, std::size_t t,
                  std::vector<double> targets, std::vector<double> sigma);

    /// Restores a fitted model with explicit standardization statistics.
    IndirectModel(std::size_t n, std::size_t d, std::vector<double> inputs, std::size_t t,
                  std::vector<double> targets, std::vector<double> sigma, std::vector<double> mean,
                  std::vector<double> scale);

    /// Fits on the rows of data using the partition's D, U and I columns.
    static IndirectModel fit(const LabeledDataset& data, const FeaturePartition& partition,
                             std::vector<double> sigma);

    KernelPrediction predict(std::span<const double> x_direct, std::span<const double> x_unchangeable) const;

    /// Squared standardized distances over the unchangeable block, which stay
    /// fixed while an optimizer moves the direct block of one instance.
    struct Anchor {
        std::size_t direct_dim = 0;
        std::vector<double> partial;
    };
    Anchor anchor(std::span<const double> x_unchangeable) const;
    /// Same result as predict(x_direct, x_unchangeable) for the anchored x_unchangeable.
    KernelPrediction predict(std::span<const double> x_direct, const Anchor& anchor) const;
    KernelPrediction predict_input(std::span<const double> input) const;

    std::size_t input_dim() const { return d_; }
    std::size_t output_dim() const { return t_; }
    std::size_t size() const { return n_; }
    const std::vector<double>& sigma() const { return sigma_; }
    const std::vector<double>& raw_inputs() const { return raw_inputs_; }
    const std::vector<double>& targets() const { return targets_; }
    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& scale() const { return scale_; }

    /// Normalized kernel weights over the training rows for output j; empty
    /// when the fallback would trigger.
    std::vector<double> weights(std::span<const double> input, std::size_t j) const;

private:
    void standardize();
    std::vector<double> squared_distances(std::span<const double> input) const;
    KernelPrediction from_distances(const std::vector<double>& dist) const;

    std::size_t n_ = 0, d_ = 0, t_ = 0;
    std::vector<double> raw_inputs_;
    std::vector<double> inputs_;  // standardized
    std::vector<double> targets_;
    std::vector<double> sigma_;
    std::vector<double> mean_;
    std::vector<double> scale_;
    std::vector<double> target_min_, target_max_;
};

inline constexpr double kWeightUnderflow = 1e-300;

/// Per-indirect-feature bandwidth chosen from grid by k-fold CV mean squared
/// error (first grid entry wins ties). Deterministic given seed.
std::vector<double> kr_cv_sigma(const LabeledDataset& data, const FeaturePartition& partition,
                                const std::vector<double>& grid, std::size_t folds, std::uint64_t seed);

/// CV mean squared error for every (indirect feature, grid entry) pair;
/// result[j][g].
std::vector<std::vector<double>> kr_cv_errors(const LabeledDataset& data, const FeaturePartition& partition,
                                              const std::vector<double>& grid, std::size_t folds,
                                              std::uint64_t seed);

std::vector<double> default_sigma_grid();

} // namespace gic
