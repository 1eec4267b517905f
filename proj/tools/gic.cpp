// gic: command-line front end (train, optimize, evaluate, sweep, synth).

#include "gic/config.hpp"
#include "gic/error.hpp"
#include "gic/evaluation.hpp"
#include "gic/serialize.hpp"
#include "gic/synthetic.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace gic;

struct Common {
    std::string config;
    std::string data;  // overrides the config's dataset path
    std::optional<std::uint64_t> seed;
    std::size_t threads = 1;
    std::string out;
    bool timing = false;
};

struct Setup {
    ExperimentConfig config;
    LoadedData loaded;
    EvaluationPlan plan;
};

Setup load_setup(const Common& c) {
    Setup s;
    s.config = load_config(c.config);
    if (c.seed) s.config.seed = *c.seed;
    const std::string path = c.data.empty() ? s.config.resolved_dataset_path() : c.data;
    if (path.empty()) throw ConfigError("no dataset: set dataset.path in the config or pass --data");
    s.loaded = load_dataset(path, s.config);
    s.plan = s.config.plan(c.threads);
    s.plan.indirect = indirect_settings(s.config, s.loaded);
    return s;
}

ModelBundle train_bundle(const Setup& s) {
    const Split split = split_and_fold(s.loaded.data.rows, s.plan.seed, s.plan.folds);
    const LabeledDataset train = s.loaded.data.subset(split.train);
    TrainedModels models = train_recommendation(train, s.loaded.problem, s.plan);
    ModelBundle b;
    b.feature_names = s.loaded.data.feature_names;
    b.roles = s.loaded.problem.partition.roles();
    b.forest = std::move(models.forest);
    b.indirect = std::move(models.indirect);
    b.direct_sd = std::move(models.direct_sd);
    b.seed = s.plan.seed;
    return b;
}

void check_compatible(const ModelBundle& model, const Setup& s) {
    if (model.forest.num_features() != s.loaded.data.cols)
        throw DimensionError("model has " + std::to_string(model.forest.num_features()) +
                             " features but the dataset has " + std::to_string(s.loaded.data.cols));
    if (model.roles != s.loaded.problem.partition.roles() || model.feature_names != s.loaded.data.feature_names)
        throw DimensionError("model feature layout does not match the dataset");
    if (model.direct_sd.size() != s.loaded.problem.partition.direct().size())
        throw DimensionError("model direct-feature statistics do not match the dataset");
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-")
        std::cout << text;
    else
        write_text_file(out, text);
}

int run_train(const Common& c) {
    const Setup s = load_setup(c);
    const ModelBundle b = train_bundle(s);
    if (c.out.empty()) throw ConfigError("train: --out is required");
    save_model(c.out, b);
    std::cerr << "trained " << b.forest.size() << " trees on " << s.loaded.data.cols << " features (seed " << b.seed
              << ") -> " << c.out << "\n";
    return 0;
}

int run_optimize(const Common& c, const std::string& model_path, const std::string& method_name, double budget,
                 std::size_t instance) {
    const Setup s = load_setup(c);
    const Method method = parse_method(method_name);
    const ModelBundle model = model_path.empty() ? train_bundle(s) : load_model(model_path);
    check_compatible(model, s);
    if (instance >= s.loaded.data.rows)
        throw DimensionError("instance " + std::to_string(instance) + " out of range (dataset has " +
                             std::to_string(s.loaded.data.rows) + " rows)");

    const auto& problem = s.loaded.problem;
    const std::vector<double> x(s.loaded.data.row(instance).begin(), s.loaded.data.row(instance).end());
    Objective objective(model.forest, model.indirect_ptr(), problem.partition, x, problem.costs,
                        problem.bounds_for(x), budget, s.plan.tol);
    const std::uint64_t seed = s.plan.seed;
    const auto started = std::chrono::steady_clock::now();
    const OptimizationResult opt = run_method(method, objective, model.direct_sd, s.plan.settings, seed);
    const auto stopped = std::chrono::steady_clock::now();

    RecommendationReport r;
    r.instance = instance;
    r.method = to_string(method);
    r.budget = budget;
    r.seed = seed;
    r.initial_probability = opt.initial;
    r.final_probability = opt.value;
    r.raw_probability = objective.raw_probability();
    r.spent = cost(opt.z, problem.costs);
    r.evaluations = opt.evaluations;
    if (c.timing) r.wall_seconds = std::chrono::duration<double>(stopped - started).count();

    const std::vector<double> before = objective.assemble(std::vector<double>(objective.dim(), 0.0));
    const std::vector<double> after = objective.assemble(opt.z);
    const auto& direct = problem.partition.direct();
    for (std::size_t q = 0; q < direct.size(); ++q) {
        const std::size_t j = direct[q];
        r.direct.push_back({model.feature_names[j], x[j], after[j], opt.z[q],
                            coordinate_cost(opt.z[q], problem.costs.increase[q], problem.costs.decrease[q],
                                            problem.costs.kind)});
    }
    for (std::size_t j : problem.partition.indirect())
        r.indirect.push_back({model.feature_names[j], before[j], after[j], after[j] - before[j], 0.0});

    emit(c.out, report_to_json(r).dump(2) + "\n");
    return 0;
}

int run_curve(const Common& c, const std::vector<std::string>& methods, const std::vector<double>& budgets,
              const std::string& selection, std::optional<std::size_t> max_instances) {
    Setup s = load_setup(c);
    if (!methods.empty()) {
        s.plan.methods.clear();
        for (const auto& m : methods) s.plan.methods.push_back(parse_method(m));
    }
    if (!budgets.empty()) s.plan.budgets = budgets;
    if (!selection.empty()) s.plan.selection = parse_selection_policy(selection);
    if (max_instances) s.plan.max_instances = *max_instances;
    if (c.out.empty()) throw ConfigError("--out directory is required");

    const CurveResult result = evaluate(s.loaded.data, s.loaded.problem, s.plan);
    write_text_file(c.out + "/results.json", curve_to_json(result, s.plan, c.timing).dump(2) + "\n");
    write_text_file(c.out + "/curve.csv", curve_table_csv(result));
    std::cerr << result.points.size() << " curve rows over " << result.instances.size() << " instances -> " << c.out
              << "\n";
    return 0;
}

void add_common(CLI::App* cmd, Common& c, bool needs_config = true) {
    auto* opt = cmd->add_option("--config", c.config, "experiment config (JSON)");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    cmd->add_option("--data", c.data, "dataset CSV, overriding the config path");
    cmd->add_option("--seed", c.seed, "plan seed, overriding the config");
    cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", c.out, "output path");
    cmd->add_flag("--timing", c.timing, "record wall-clock times in outputs");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized inverse classification"};
    app.require_subcommand(1);

    Common common;

    auto* train = app.add_subcommand("train", "fit the forest and H on the train half and write a model file");
    add_common(train, common);

    std::string model_path, method_name = "ga";
    double budget = 0.0;
    std::size_t instance = 0;
    auto* optimize = app.add_subcommand("optimize", "recommend changes for one instance");
    add_common(optimize, common);
    optimize->add_option("--model", model_path, "model file from `train` (trained in-process if omitted)");
    optimize->add_option("--method", method_name, "hc-ls, ga, ga-ls, lvp-fi or lvp-bi");
    optimize->add_option("--budget", budget, "budget B")->required()->check(CLI::NonNegativeNumber);
    optimize->add_option("--instance", instance, "0-based data row")->required();

    std::vector<std::string> methods;
    std::vector<double> budgets;
    std::string selection;
    std::optional<std::size_t> max_instances;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "run the evaluation harness for the given methods");
    add_common(evaluate_cmd, common);
    evaluate_cmd->add_option("--method", methods, "method(s) to evaluate")->required();
    evaluate_cmd->add_option("--budget", budgets, "budget grid, overriding the config");
    evaluate_cmd->add_option("--selection", selection, "predicted-positive, labeled-positive, all or balanced");
    evaluate_cmd->add_option("--max-instances", max_instances, "cap on scored instances");

    auto* sweep = app.add_subcommand("sweep", "full curve across methods and budgets");
    add_common(sweep, common);
    sweep->add_option("--method", methods, "restrict to these methods");
    sweep->add_option("--budget", budgets, "budget grid, overriding the config");
    sweep->add_option("--selection", selection, "predicted-positive, labeled-positive, all or balanced");
    sweep->add_option("--max-instances", max_instances, "cap on scored instances");

    std::size_t synth_rows = 400;
    std::uint64_t synth_seed = 1;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "write the synthetic dataset as CSV");
    synth->add_option("--rows", synth_rows, "rows")->check(CLI::PositiveNumber);
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--out", synth_out, "output CSV (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*train) return run_train(common);
        if (*optimize) return run_optimize(common, model_path, method_name, budget, instance);
        if (*evaluate_cmd) return run_curve(common, methods, budgets, selection, max_instances);
        if (*sweep) return run_curve(common, methods, budgets, selection, max_instances);
        if (*synth) {
            emit(synth_out, synthetic_csv(synth_rows, synth_seed));
            return 0;
        }
    } catch (const gic::Error& e) {
        std::cerr << "gic: error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "gic: internal error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
