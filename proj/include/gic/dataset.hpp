#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gic {

/// Dense row-major design matrix with ±1 labels.
struct LabeledDataset {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> x;  // rows * cols
    std::vector<int> y;     // +1 undesirable class, -1 otherwise
    std::vector<std::string> feature_names;
    std::vector<double> feature_sd;  // floored training standard deviations

    LabeledDataset() = default;
    LabeledDataset(std::size_t n, std::size_t p, std::vector<double> values, std::vector<int> labels,
                   std::vector<std::string> names = {});

    std::span<const double> row(std::size_t i) const { return {x.data() + i * cols, cols}; }
    std::span<double> row(std::size_t i) { return {x.data() + i * cols, cols}; }
    double at(std::size_t i, std::size_t j) const { return x[i * cols + j]; }

    /// Rows selected by index, in the given order. Statistics are recomputed.
    LabeledDataset subset(std::span<const std::size_t> indices) const;

    /// Recomputes feature_sd from the current rows (population sd, floored).
    void compute_statistics();

    std::size_t count_label(int label) const;
};

/// Floor applied to standard deviations of (near-)constant features:
/// 1e-6 times the feature's magnitude scale max(1, max |x|).
double sd_floor(std::span<const double> column_values);

} // namespace gic
