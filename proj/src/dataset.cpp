#include "gic/dataset.hpp"

#include "gic/error.hpp"

#include <algorithm>
#include <cmath>

namespace gic {

LabeledDataset::LabeledDataset(std::size_t n, std::size_t p, std::vector<double> values,
                               std::vector<int> labels, std::vector<std::string> names)
    : rows(n), cols(p), x(std::move(values)), y(std::move(labels)), feature_names(std::move(names)) {
    if (x.size() != n * p) throw DimensionError("dataset: value count does not match n*p");
    if (y.size() != n) throw DimensionError("dataset: label count does not match n");
    for (int label : y)
        if (label != 1 && label != -1) throw IngestionError("dataset: labels must be +1 or -1");
    for (double v : x)
        if (!std::isfinite(v)) throw IngestionError("dataset: non-finite feature value");
    if (feature_names.empty()) {
        for (std::size_t j = 0; j < p; ++j) feature_names.push_back("x" + std::to_string(j));
    } else if (feature_names.size() != p) {
        throw DimensionError("dataset: feature name count does not match p");
    }
    compute_statistics();
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
    LabeledDataset out;
    out.rows = indices.size();
    out.cols = cols;
    out.feature_names = feature_names;
    out.x.reserve(indices.size() * cols);
    out.y.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= rows) throw DimensionError("dataset subset: row index out of range");
        auto r = row(i);
        out.x.insert(out.x.end(), r.begin(), r.end());
        out.y.push_back(y[i]);
    }
    out.compute_statistics();
    return out;
}

double sd_floor(std::span<const double> column_values) {
    double scale = 1.0;
    for (double v : column_values) scale = std::max(scale, std::abs(v));
    return 1e-6 * scale;
}

void LabeledDataset::compute_statistics() {
    feature_sd.assign(cols, 0.0);
    std::vector<double> column(rows);
    for (std::size_t j = 0; j < cols; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            column[i] = at(i, j);
            mean += column[i];
        }
        if (rows > 0) mean /= static_cast<double>(rows);
        double var = 0.0;
        for (double v : column) var += (v - mean) * (v - mean);
        if (rows > 0) var /= static_cast<double>(rows);
        feature_sd[j] = std::max(std::sqrt(var), sd_floor(column));
    }
}

std::size_t LabeledDataset::count_label(int label) const {
    return static_cast<std::size_t>(std::count(y.begin(), y.end(), label));
}

} // namespace gic
