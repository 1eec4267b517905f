#include "gic/forest.hpp"

#include "gic/error.hpp"
#include "gic/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gic {

double FunctionClassifier::predict_probability(std::span<const double> x) const {
    if (x.size() != p_)
        throw DimensionError("classifier: expected " + std::to_string(p_) + " features, got " +
                             std::to_string(x.size()));
    return fn_(x);
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw DegenerateTrainingError("decision tree: no nodes");
}

int DecisionTree::predict(std::span<const double> x) const {
    std::size_t k = 0;
    while (nodes_[k].feature >= 0) {
        const TreeNode& n = nodes_[k];
        k = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                            : n.right);
    }
    return nodes_[k].vote;
}

std::size_t DecisionTree::depth() const {
    std::vector<std::size_t> d(nodes_.size(), 0);
    std::size_t best = 0;
    // Children always follow their parent in storage order.
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        best = std::max(best, d[k]);
        if (nodes_[k].feature >= 0) {
            d[static_cast<std::size_t>(nodes_[k].left)] = d[k] + 1;
            d[static_cast<std::size_t>(nodes_[k].right)] = d[k] + 1;
        }
    }
    return best;
}

void DecisionTree::validate(std::size_t p) const {
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        const TreeNode& n = nodes_[k];
        if (n.feature < 0) {
            if (n.vote != 1 && n.vote != -1)
                throw DegenerateTrainingError("decision tree: leaf vote must be +1 or -1");
            continue;
        }
        if (static_cast<std::size_t>(n.feature) >= p)
            throw DimensionError("decision tree: split feature index out of range");
        const auto in_range = [&](int c) {
            return c > static_cast<int>(k) && static_cast<std::size_t>(c) < nodes_.size();
        };
        if (!in_range(n.left) || !in_range(n.right))
            throw DegenerateTrainingError("decision tree: malformed child index");
    }
}

Forest::Forest(std::size_t p, std::vector<DecisionTree> trees, ForestParams params)
    : p_(p), trees_(std::move(trees)), params_(params) {
    if (trees_.empty()) throw DegenerateTrainingError("forest: at least one tree required");
    for (const auto& t : trees_) t.validate(p_);
    params_.n_trees = trees_.size();
}

std::size_t Forest::positive_votes(std::span<const double> x) const {
    if (x.size() != p_)
        throw DimensionError("forest: expected " + std::to_string(p_) + " features, got " +
                             std::to_string(x.size()));
    std::size_t votes = 0;
    for (const auto& t : trees_) votes += t.predict(x) == 1 ? 1 : 0;
    return votes;
}

double Forest::predict_probability(std::span<const double> x) const {
    return static_cast<double>(positive_votes(x)) / static_cast<double>(trees_.size());
}

namespace {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;
};

double gini(double pos, double total) {
    if (total <= 0.0) return 0.0;
    const double f = pos / total;
    return 2.0 * f * (1.0 - f);
}

class TreeBuilder {
public:
    TreeBuilder(const LabeledDataset& data, std::size_t max_depth, std::size_t per_split,
                std::uint64_t seed)
        : data_(data), max_depth_(max_depth), per_split_(per_split), rng_(seed) {
        features_.resize(data.cols);
        std::iota(features_.begin(), features_.end(), std::size_t{0});
    }

    std::vector<TreeNode> build(std::vector<std::size_t> rows) {
        grow(std::move(rows), 0);
        return std::move(nodes_);
    }

private:
    int grow(std::vector<std::size_t> rows, std::size_t depth) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        std::size_t pos = 0;
        for (std::size_t r : rows) pos += data_.y[r] == 1 ? 1 : 0;
        const std::size_t neg = rows.size() - pos;

        SplitChoice split;
        if (pos != 0 && neg != 0 && depth < max_depth_ && rows.size() >= 2) split = best_split(rows, pos);
        if (split.feature < 0) {
            // Ties go to the benign class.
            nodes_[static_cast<std::size_t>(id)].vote = pos > neg ? 1 : -1;
            return id;
        }

        std::vector<std::size_t> left, right;
        for (std::size_t r : rows)
            (data_.at(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right)
                .push_back(r);
        rows.clear();
        rows.shrink_to_fit();
        const int l = grow(std::move(left), depth + 1);
        const int r = grow(std::move(right), depth + 1);
        TreeNode& node = nodes_[static_cast<std::size_t>(id)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = l;
        node.right = r;
        return id;
    }

    SplitChoice best_split(const std::vector<std::size_t>& rows, std::size_t pos_total) {
        std::shuffle(features_.begin(), features_.end(), rng_);
        SplitChoice best;
        best.impurity = std::numeric_limits<double>::infinity();
        std::size_t informative = 0;
        std::vector<std::pair<double, int>> column(rows.size());
        const double n = static_cast<double>(rows.size());
        for (std::size_t f : features_) {
            if (informative >= per_split_ && best.feature >= 0) break;
            for (std::size_t k = 0; k < rows.size(); ++k)
                column[k] = {data_.at(rows[k], f), data_.y[rows[k]]};
            std::sort(column.begin(), column.end());
            if (column.front().first == column.back().first) continue;  // constant here
            ++informative;
            double left_pos = 0.0;
            for (std::size_t k = 0; k + 1 < column.size(); ++k) {
                left_pos += column[k].second == 1 ? 1.0 : 0.0;
                const double a = column[k].first;
                const double b = column[k + 1].first;
                if (a == b) continue;
                const double nl = static_cast<double>(k + 1);
                const double nr = n - nl;
                const double right_pos = static_cast<double>(pos_total) - left_pos;
                const double impurity = (nl * gini(left_pos, nl) + nr * gini(right_pos, nr)) / n;
                if (impurity < best.impurity) {
                    double mid = 0.5 * (a + b);
                    if (!(mid >= a && mid < b)) mid = a;
                    best = {static_cast<int>(f), mid, impurity};
                }
            }
        }
        return best;
    }

    const LabeledDataset& data_;
    std::size_t max_depth_;
    std::size_t per_split_;
    Rng rng_;
    std::vector<std::size_t> features_;
    std::vector<TreeNode> nodes_;
};

std::size_t resolve_per_split(std::size_t requested, std::size_t p) {
    if (requested == 0)
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(p)))));
    return std::min(requested, p);
}

} // namespace

DecisionTree train_tree(const LabeledDataset& data, std::span<const std::size_t> rows,
                        std::size_t max_depth, std::size_t features_per_split, std::uint64_t seed) {
    if (rows.empty()) throw DegenerateTrainingError("tree: empty training sample");
    TreeBuilder builder(data, max_depth, resolve_per_split(features_per_split, data.cols), seed);
    return DecisionTree(builder.build({rows.begin(), rows.end()}));
}

Forest train_forest(const LabeledDataset& data, const ForestParams& params) {
    if (params.n_trees == 0) throw DegenerateTrainingError("forest: n_trees must be positive");
    if (data.rows < 2) throw DegenerateTrainingError("forest: need at least two training rows");
    if (data.count_label(1) == 0 || data.count_label(-1) == 0)
        throw DegenerateTrainingError("forest: training data contains a single class");

    std::vector<DecisionTree> trees;
    trees.reserve(params.n_trees);
    std::vector<std::size_t> sample(data.rows);
    for (std::size_t t = 0; t < params.n_trees; ++t) {
        Rng rng(derive_seed(params.seed, {t, 0}));
        for (auto& s : sample) s = uniform_index(rng, data.rows);
        trees.push_back(train_tree(data, sample, params.max_depth, params.features_per_split,
                                   derive_seed(params.seed, {t, 1})));
    }
    ForestParams stored = params;
    stored.features_per_split = resolve_per_split(params.features_per_split, data.cols);
    return Forest(data.cols, std::move(trees), stored);
}

} // namespace gic
