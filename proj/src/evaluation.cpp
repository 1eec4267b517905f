#include "gic/evaluation.hpp"

#include "gic/error.hpp"
#include "gic/objective.hpp"
#include "gic/random.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

namespace gic {

void ProblemSpec::validate() const {
    const std::size_t d = partition.direct().size();
    if (d == 0) throw ConfigError("problem: no directly changeable features");
    if (costs.size() != d || costs.decrease.size() != d) throw DimensionError("problem: costs do not match |D|");
    if (directions.size() != d) throw DimensionError("problem: directions do not match |D|");
    if (raw_lower.size() != d || raw_upper.size() != d) throw DimensionError("problem: bounds do not match |D|");
    costs.validate();
}

BoundSpec ProblemSpec::bounds_for(std::span<const double> instance) const {
    if (instance.size() != partition.size()) throw DimensionError("problem: instance length mismatch");
    std::vector<double> x_direct;
    for (std::size_t j : partition.direct()) x_direct.push_back(instance[j]);
    return hardline_bounds(x_direct, directions, raw_lower, raw_upper);
}

TrainedModels train_models(const LabeledDataset& train, const ProblemSpec& problem, const ForestParams& forest,
                           const IndirectSettings& indirect, std::uint64_t seed) {
    if (train.cols != problem.partition.size()) throw DimensionError("train_models: partition does not match data");
    TrainedModels out{train_forest(train, forest), std::nullopt, {}};
    if (!problem.partition.indirect().empty()) {
        std::vector<double> sigma = indirect.sigma;
        if (sigma.empty()) sigma = kr_cv_sigma(train, problem.partition, indirect.grid, indirect.folds, seed);
        if (sigma.size() != problem.partition.indirect().size())
            throw ConfigError("train_models: need one sigma per indirect feature");
        out.indirect = IndirectModel::fit(train, problem.partition, std::move(sigma));
    }
    for (std::size_t j : problem.partition.direct()) out.direct_sd.push_back(train.feature_sd[j]);
    return out;
}

std::vector<std::size_t> Split::holdout() const {
    std::vector<std::size_t> out;
    for (const auto& f : folds) out.insert(out.end(), f.begin(), f.end());
    return out;
}

Split split_and_fold(std::size_t n, std::uint64_t seed, std::size_t k) {
    if (k == 0) throw ConfigError("split: fold count must be positive");
    if (n < 2 * k)
        throw InsufficientDataError("split: " + std::to_string(n) + " rows cannot fill " + std::to_string(k) +
                                    " holdout folds");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    Split split;
    const std::size_t n_train = (n + 1) / 2;
    split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    const std::size_t holdout = n - n_train;
    const std::size_t base = holdout / k, extra = holdout % k;
    std::size_t pos = n_train;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = base + (f < extra ? 1 : 0);
        split.folds.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(pos),
                                 order.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += size;
    }
    return split;
}

std::string to_string(SelectionPolicy policy) {
    switch (policy) {
    case SelectionPolicy::PredictedPositive: return "predicted-positive";
    case SelectionPolicy::LabeledPositive: return "labeled-positive";
    case SelectionPolicy::All: return "all";
    case SelectionPolicy::Balanced: return "balanced";
    }
    return "unknown";
}

SelectionPolicy parse_selection_policy(const std::string& text) {
    for (auto p : {SelectionPolicy::PredictedPositive, SelectionPolicy::LabeledPositive, SelectionPolicy::All,
                   SelectionPolicy::Balanced})
        if (to_string(p) == text) return p;
    throw ConfigError("unknown instance selection policy '" + text + "'");
}

void EvaluationPlan::validate() const {
    if (budgets.empty()) throw ConfigError("plan: budget grid is empty");
    for (std::size_t b = 0; b < budgets.size(); ++b) {
        if (!(budgets[b] >= 0.0) || !std::isfinite(budgets[b]))
            throw InvalidBudgetError("plan: budgets must be finite and nonnegative");
        if (b > 0 && !(budgets[b] > budgets[b - 1])) throw ConfigError("plan: budget grid must be strictly increasing");
    }
    if (methods.empty()) throw ConfigError("plan: no methods selected");
    if (folds < 2) throw ConfigError("plan: need at least two holdout folds");
    settings.hill_climb.validate();
    settings.genetic.validate();
    settings.genetic_local.validate();
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

void check_disjoint(const std::vector<std::size_t>& recommendation_rows, const std::vector<std::size_t>& fold_rows,
                    const std::vector<std::size_t>& evaluation_rows) {
    const std::set<std::size_t> fold(fold_rows.begin(), fold_rows.end());
    const std::set<std::size_t> rec(recommendation_rows.begin(), recommendation_rows.end());
    for (std::size_t r : evaluation_rows) {
        if (fold.count(r)) throw std::logic_error("leakage: fold row " + std::to_string(r) + " trains its evaluation model");
        if (rec.count(r)) throw std::logic_error("leakage: row " + std::to_string(r) + " trains both models");
    }
    for (std::size_t r : fold_rows)
        if (rec.count(r)) throw std::logic_error("leakage: fold row " + std::to_string(r) + " trains the recommendation model");
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (std::size_t t = 0; t < threads; ++t) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    if (failure) std::rethrow_exception(failure);
}

namespace {

std::vector<std::size_t> select_instances(const LabeledDataset& data, const Split& split, const Forest& recommender,
                                          const EvaluationPlan& plan) {
    std::vector<std::size_t> chosen;
    const auto holdout = split.holdout();
    switch (plan.selection) {
    case SelectionPolicy::All: chosen = holdout; break;
    case SelectionPolicy::PredictedPositive:
        for (std::size_t r : holdout)
            if (recommender.predict_probability(data.row(r)) > 0.5) chosen.push_back(r);
        break;
    case SelectionPolicy::LabeledPositive:
        for (std::size_t r : holdout)
            if (data.y[r] == 1) chosen.push_back(r);
        break;
    case SelectionPolicy::Balanced: {
        std::vector<std::size_t> negatives;
        for (std::size_t r : holdout) (data.y[r] == 1 ? chosen : negatives).push_back(r);
        Rng rng(derive_seed(plan.seed, {30}));
        std::shuffle(negatives.begin(), negatives.end(), rng);
        negatives.resize(std::min(negatives.size(), chosen.size()));
        chosen.insert(chosen.end(), negatives.begin(), negatives.end());
        // Keep holdout order so fold grouping is stable.
        std::vector<std::size_t> ordered;
        const std::set<std::size_t> keep(chosen.begin(), chosen.end());
        for (std::size_t r : holdout)
            if (keep.count(r)) ordered.push_back(r);
        chosen = std::move(ordered);
        break;
    }
    }
    if (plan.max_instances > 0 && chosen.size() > plan.max_instances) chosen.resize(plan.max_instances);
    return chosen;
}

} // namespace

TrainedModels train_recommendation(const LabeledDataset& train, const ProblemSpec& problem,
                                   const EvaluationPlan& plan) {
    ForestParams params = plan.forest;
    params.seed = derive_seed(plan.forest.seed, {0});
    return train_models(train, problem, params, plan.indirect, derive_seed(plan.seed, {11}));
}

CurveResult evaluate(const LabeledDataset& data, const ProblemSpec& problem, const EvaluationPlan& plan) {
    plan.validate();
    problem.validate();
    if (data.cols != problem.partition.size()) throw DimensionError("evaluate: partition does not match data");

    const Split split = split_and_fold(data.rows, plan.seed, plan.folds);
    const LabeledDataset train = data.subset(split.train);
    const TrainedModels rec = train_recommendation(train, problem, plan);

    // Evaluation models, one per fold.
    std::vector<Forest> evaluators(plan.folds);
    std::vector<std::size_t> fold_of(data.rows, plan.folds);
    for (std::size_t f = 0; f < plan.folds; ++f) {
        std::vector<std::size_t> eval_rows;
        for (std::size_t g = 0; g < plan.folds; ++g)
            if (g != f) eval_rows.insert(eval_rows.end(), split.folds[g].begin(), split.folds[g].end());
        check_disjoint(split.train, split.folds[f], eval_rows);
        const LabeledDataset eval_data = data.subset(eval_rows);
        if (eval_data.rows < 2 || eval_data.count_label(1) == 0 || eval_data.count_label(-1) == 0)
            throw InsufficientDataError("evaluate: holdout minus fold " + std::to_string(f) +
                                        " cannot train an evaluation model");
        ForestParams p = plan.forest;
        p.seed = derive_seed(plan.forest.seed, {1 + f});
        evaluators[f] = train_forest(eval_data, p);
        for (std::size_t r : split.folds[f]) fold_of[r] = f;
    }

    CurveResult result;
    result.train_rows = split.train.size();
    result.holdout_rows = data.rows - split.train.size();
    result.instances = select_instances(data, split, rec.forest, plan);

    const std::size_t n_inst = result.instances.size();
    const std::size_t n_budget = plan.budgets.size();
    const std::size_t n_method = plan.methods.size();
    // per_instance[i][m * n_budget + b]
    std::vector<std::vector<InstanceRecord>> per_instance(n_inst);

    parallel_for(n_inst, plan.threads, [&](std::size_t k) {
        const std::size_t row = result.instances[k];
        const std::size_t fold = fold_of[row];
        const Forest& evaluator = evaluators[fold];
        const std::vector<double> instance(data.row(row).begin(), data.row(row).end());
        const BoundSpec bounds = problem.bounds_for(instance);
        auto& out = per_instance[k];
        out.reserve(n_method * n_budget);
        for (std::size_t m = 0; m < n_method; ++m) {
            for (std::size_t b = 0; b < n_budget; ++b) {
                Objective objective(rec.forest, rec.indirect_ptr(), problem.partition, instance, problem.costs, bounds,
                                    plan.budgets[b], plan.tol);
                const std::uint64_t seed = derive_seed(plan.seed, {row, static_cast<std::uint64_t>(plan.methods[m]), b});
                const auto started = std::chrono::steady_clock::now();
                const auto opt = run_method(plan.methods[m], objective, rec.direct_sd, plan.settings, seed);
                const auto stopped = std::chrono::steady_clock::now();
                InstanceRecord rec_out;
                rec_out.row = row;
                rec_out.fold = fold;
                rec_out.budget = plan.budgets[b];
                rec_out.initial_probability = evaluator.predict_probability(objective.assemble(std::vector<double>(objective.dim(), 0.0)));
                rec_out.raw_initial_probability = evaluator.predict_probability(instance);
                rec_out.final_probability = evaluator.predict_probability(objective.assemble(opt.z));
                rec_out.recommendation_initial = opt.initial;
                rec_out.recommendation_final = opt.value;
                rec_out.z = opt.z;
                rec_out.seed = seed;
                rec_out.evaluations = opt.evaluations;
                rec_out.wall_seconds = std::chrono::duration<double>(stopped - started).count();
                out.push_back(std::move(rec_out));
            }
        }
    });

    double baseline_sum = 0.0;
    for (const auto& recs : per_instance)
        if (!recs.empty()) baseline_sum += recs.front().initial_probability;
    result.baseline_mean = n_inst ? baseline_sum / static_cast<double>(n_inst) : 0.0;

    for (std::size_t m = 0; m < n_method; ++m) {
        for (std::size_t b = 0; b < n_budget; ++b) {
            std::vector<InstanceRecord> records;
            std::vector<double> finals;
            double evals = 0.0;
            for (std::size_t k = 0; k < n_inst; ++k) {
                const auto& r = per_instance[k][m * n_budget + b];
                finals.push_back(r.final_probability);
                evals += static_cast<double>(r.evaluations);
                records.push_back(r);
            }
            CurvePoint point;
            point.method = plan.methods[m];
            point.budget = plan.budgets[b];
            point.count = n_inst;
            if (n_inst > 0) {
                point.mean = std::accumulate(finals.begin(), finals.end(), 0.0) / static_cast<double>(n_inst);
                point.mean_evaluations = evals / static_cast<double>(n_inst);
            }
            point.p5 = percentile(finals, 5.0);
            point.p95 = percentile(finals, 95.0);
            result.points.push_back(point);
            result.records.push_back(std::move(records));
        }
    }
    return result;
}

CurveResult evaluate_method(Method method, EvaluationPlan plan, const LabeledDataset& data,
                            const ProblemSpec& problem) {
    plan.methods = {method};
    return evaluate(data, problem, plan);
}

} // namespace gic
