#include "gic/indirect.hpp"

#include "gic/error.hpp"
#include "gic/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gic {

IndirectModel::IndirectModel(std::size_t n, std::size_t d, std::vector<double> inputs, std::size_t t,
                             std::vector<double> targets, std::vector<double> sigma)
    : n_(n), d_(d), t_(t), raw_inputs_(std::move(inputs)), targets_(std::move(targets)),
      sigma_(std::move(sigma)) {
    if (n_ == 0) throw InsufficientDataError("kernel regression: no training rows");
    if (raw_inputs_.size() != n_ * d_ || targets_.size() != n_ * t_)
        throw DimensionError("kernel regression: training matrix shape mismatch");
    if (sigma_.size() != t_) throw DimensionError("kernel regression: need one sigma per output");
    for (double s : sigma_)
        if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("kernel regression: sigma must be positive");
    mean_.assign(d_, 0.0);
    scale_.assign(d_, 1.0);
    for (std::size_t k = 0; k < d_; ++k) {
        double m = 0.0;
        for (std::size_t i = 0; i < n_; ++i) m += raw_inputs_[i * d_ + k];
        m /= static_cast<double>(n_);
        double v = 0.0;
        for (std::size_t i = 0; i < n_; ++i) v += (raw_inputs_[i * d_ + k] - m) * (raw_inputs_[i * d_ + k] - m);
        v /= static_cast<double>(n_);
        mean_[k] = m;
        scale_[k] = std::sqrt(v) > 1e-12 ? std::sqrt(v) : 1.0;
    }
    standardize();
}

IndirectModel::IndirectModel(std::size_t n, std::size_t d, std::vector<double> inputs, std::size_t t,
                             std::vector<double> targets, std::vector<double> sigma,
                             std::vector<double> mean, std::vector<double> scale)
    : IndirectModel(n, d, std::move(inputs), t, std::move(targets), std::move(sigma)) {
    if (mean.size() != d_ || scale.size() != d_)
        throw DimensionError("kernel regression: standardization statistics shape mismatch");
    mean_ = std::move(mean);
    scale_ = std::move(scale);
    standardize();
}

void IndirectModel::standardize() {
    target_min_.assign(t_, 0.0);
    target_max_.assign(t_, 0.0);
    for (std::size_t j = 0; j < t_; ++j) {
        target_min_[j] = target_max_[j] = targets_[j];
        for (std::size_t i = 1; i < n_; ++i) {
            target_min_[j] = std::min(target_min_[j], targets_[i * t_ + j]);
            target_max_[j] = std::max(target_max_[j], targets_[i * t_ + j]);
        }
    }
    inputs_.resize(raw_inputs_.size());
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < d_; ++k)
            inputs_[i * d_ + k] = (raw_inputs_[i * d_ + k] - mean_[k]) / scale_[k];
}

IndirectModel IndirectModel::fit(const LabeledDataset& data, const FeaturePartition& partition,
                                 std::vector<double> sigma) {
    if (partition.size() != data.cols) throw DimensionError("kernel regression: partition does not match data");
    const auto& D = partition.direct();
    const auto& U = partition.unchangeable();
    const auto& I = partition.indirect();
    std::vector<double> inputs;
    std::vector<double> targets;
    inputs.reserve(data.rows * (D.size() + U.size()));
    targets.reserve(data.rows * I.size());
    for (std::size_t r = 0; r < data.rows; ++r) {
        for (std::size_t j : D) inputs.push_back(data.at(r, j));
        for (std::size_t j : U) inputs.push_back(data.at(r, j));
        for (std::size_t j : I) targets.push_back(data.at(r, j));
    }
    return IndirectModel(data.rows, D.size() + U.size(), std::move(inputs), I.size(), std::move(targets),
                         std::move(sigma));
}

std::vector<double> IndirectModel::squared_distances(std::span<const double> input) const {
    if (input.size() != d_)
        throw DimensionError("kernel regression: expected input of length " + std::to_string(d_));
    std::vector<double> q(d_);
    for (std::size_t k = 0; k < d_; ++k) q[k] = (input[k] - mean_[k]) / scale_[k];
    std::vector<double> dist(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const double* row = inputs_.data() + i * d_;
        double s = 0.0;
        for (std::size_t k = 0; k < d_; ++k) s += (row[k] - q[k]) * (row[k] - q[k]);
        dist[i] = s;
    }
    return dist;
}

std::vector<double> IndirectModel::weights(std::span<const double> input, std::size_t j) const {
    const auto dist = squared_distances(input);
    const double denom = 2.0 * sigma_.at(j) * sigma_.at(j);
    std::vector<double> w(n_);
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i) total += (w[i] = std::exp(-dist[i] / denom));
    if (total < kWeightUnderflow) return {};
    for (double& v : w) v /= total;
    return w;
}

KernelPrediction IndirectModel::predict_input(std::span<const double> input) const {
    return from_distances(squared_distances(input));
}

KernelPrediction IndirectModel::from_distances(const std::vector<double>& dist) const {
    KernelPrediction out;
    out.values.assign(t_, 0.0);
    std::size_t nearest = static_cast<std::size_t>(
        std::distance(dist.begin(), std::min_element(dist.begin(), dist.end())));
    // outputs sharing a bandwidth share the weights
    std::vector<double> acc(t_);
    std::vector<bool> done(t_, false);
    for (std::size_t j = 0; j < t_; ++j) {
        if (done[j]) continue;
        const double denom = 2.0 * sigma_[j] * sigma_[j];
        double total = 0.0;
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            const double w = std::exp(-dist[i] / denom);
            total += w;
            const double* target = targets_.data() + i * t_;
            for (std::size_t k = j; k < t_; ++k)
                if (sigma_[k] == sigma_[j]) acc[k] += w * target[k];
        }
        for (std::size_t k = j; k < t_; ++k) {
            if (sigma_[k] != sigma_[j]) continue;
            done[k] = true;
            if (total < kWeightUnderflow) {
                out.values[k] = targets_[nearest * t_ + k];
                out.nearest_neighbor_fallback = true;
            } else {
                // rounding can leave the ratio an ulp outside the hull
                out.values[k] = std::clamp(acc[k] / total, target_min_[k], target_max_[k]);
            }
        }
    }
    return out;
}

KernelPrediction IndirectModel::predict(std::span<const double> x_direct,
                                        std::span<const double> x_unchangeable) const {
    return predict(x_direct, anchor(x_unchangeable));
}

IndirectModel::Anchor IndirectModel::anchor(std::span<const double> x_unchangeable) const {
    if (x_unchangeable.size() > d_)
        throw DimensionError("kernel regression: unchangeable block longer than the input");
    Anchor a;
    a.direct_dim = d_ - x_unchangeable.size();
    a.partial.assign(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const double* row = inputs_.data() + i * d_;
        double s = 0.0;
        for (std::size_t k = a.direct_dim; k < d_; ++k) {
            const double q = (x_unchangeable[k - a.direct_dim] - mean_[k]) / scale_[k];
            s += (row[k] - q) * (row[k] - q);
        }
        a.partial[i] = s;
    }
    return a;
}

KernelPrediction IndirectModel::predict(std::span<const double> x_direct, const Anchor& anchor) const {
    if (x_direct.size() != anchor.direct_dim || anchor.partial.size() != n_)
        throw DimensionError("kernel regression: expected input of length " + std::to_string(d_));
    const std::size_t dd = anchor.direct_dim;
    std::vector<double> q(dd);
    for (std::size_t k = 0; k < dd; ++k) q[k] = (x_direct[k] - mean_[k]) / scale_[k];
    std::vector<double> dist(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const double* row = inputs_.data() + i * d_;
        double s = 0.0;
        for (std::size_t k = 0; k < dd; ++k) s += (row[k] - q[k]) * (row[k] - q[k]);
        dist[i] = s + anchor.partial[i];
    }
    return from_distances(dist);
}

std::vector<double> default_sigma_grid() { return {0.1, 0.25, 0.5, 1.0, 1.5, 2.0}; }

std::vector<std::vector<double>> kr_cv_errors(const LabeledDataset& data, const FeaturePartition& partition,
                                              const std::vector<double>& grid, std::size_t folds,
                                              std::uint64_t seed) {
    if (grid.empty()) throw ConfigError("kernel regression CV: sigma grid is empty");
    if (folds < 2) throw ConfigError("kernel regression CV: need at least two folds");
    if (data.rows < folds) throw InsufficientDataError("kernel regression CV: fewer rows than folds");
    const std::size_t t = partition.indirect().size();

    std::vector<std::size_t> order(data.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::vector<double>> sse(t, std::vector<double>(grid.size(), 0.0));
    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t k = 0; k < order.size(); ++k) (k % folds == f ? test_rows : train_rows).push_back(order[k]);
        const LabeledDataset train = data.subset(train_rows);
        // One model per grid entry; standardization depends only on the training fold.
        std::vector<IndirectModel> models;
        models.reserve(grid.size());
        for (double s : grid) models.push_back(IndirectModel::fit(train, partition, std::vector<double>(t, s)));
        for (std::size_t r : test_rows) {
            std::vector<double> input;
            for (std::size_t j : partition.direct()) input.push_back(data.at(r, j));
            for (std::size_t j : partition.unchangeable()) input.push_back(data.at(r, j));
            for (std::size_t g = 0; g < grid.size(); ++g) {
                const auto pred = models[g].predict_input(input);
                for (std::size_t j = 0; j < t; ++j) {
                    const double e = pred.values[j] - data.at(r, partition.indirect()[j]);
                    sse[j][g] += e * e;
                }
            }
        }
    }
    for (auto& row : sse)
        for (double& v : row) v /= static_cast<double>(data.rows);
    return sse;
}

std::vector<double> kr_cv_sigma(const LabeledDataset& data, const FeaturePartition& partition,
                                const std::vector<double>& grid, std::size_t folds, std::uint64_t seed) {
    const auto errors = kr_cv_errors(data, partition, grid, folds, seed);
    std::vector<double> sigma;
    sigma.reserve(errors.size());
    for (const auto& row : errors) {
        std::size_t best = 0;
        for (std::size_t g = 1; g < row.size(); ++g)
            if (row[g] < row[best]) best = g;
        sigma.push_back(grid[best]);
    }
    return sigma;
}

} // namespace gic
