#pragma once

// Experiment configuration and CSV ingestion. A config maps every dataset
// column to a role (or drops it), prices the direct features and carries the
// classifier, kernel-regression, method and evaluation settings.

#include "gic/evaluation.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gic {

struct LabelRule {
    std::string column;
    /// Numeric rule: positive (+1) when value <op> threshold.
    std::string op = "<=";
    double threshold = 0.0;
    /// String rule, used instead of the numeric one when non-empty: positive
    /// when the raw cell equals one of these.
    std::vector<std::string> positive_values;

    int apply(const std::string& cell) const;
};

struct FeatureConfig {
    std::string column;
    FeatureRole role = FeatureRole::Unchangeable;
    Direction direction = Direction::Both;
    double cost_increase = 0.0;
    double cost_decrease = 0.0;
    std::optional<double> lower;
    std::optional<double> upper;
    /// String levels. Ordinal columns map level k to k; one-hot columns expand
    /// to one 0/1 column per level named "column=level".
    std::vector<std::string> levels;
    bool one_hot = false;
    std::optional<double> sigma;  // pre-fit kernel bandwidth for indirect features
};

struct ExperimentConfig {
    std::string name;
    std::string dataset_path;
    std::string delimiter = ",";
    LabelRule label;
    std::vector<std::string> drop;
    std::vector<FeatureConfig> features;
    CostKind cost_kind = CostKind::Quadratic;

    ForestParams forest;
    std::vector<double> sigma_grid = default_sigma_grid();
    std::size_t sigma_folds = 5;
    MethodSettings methods;
    std::vector<Method> method_list = all_methods();
    std::vector<double> budgets;

    std::uint64_t seed = 0;  // split, CV and optimizer streams derive from this
    std::size_t folds = 10;
    SelectionPolicy selection = SelectionPolicy::PredictedPositive;
    std::size_t max_instances = 0;
    double tol = kDefaultProjectionTol;

    /// Resolved relative to the config file's directory when relative.
    std::string base_dir;

    void validate() const;
    std::string resolved_dataset_path() const;
    EvaluationPlan plan(std::size_t threads = 1) const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

struct LoadedData {
    LabeledDataset data;
    ProblemSpec problem;
    std::vector<std::string> direct_names;
    std::vector<std::string> indirect_names;
    std::vector<double> indirect_sigma;  // empty unless every indirect feature carries a sigma
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path, char delimiter);
CsvTable parse_csv(const std::string& text, char delimiter);

LoadedData load_dataset(const CsvTable& table, const ExperimentConfig& config);
LoadedData load_dataset(const std::string& csv_path, const ExperimentConfig& config);

/// Pre-fit bandwidths when every indirect feature carries one, otherwise the CV grid.
IndirectSettings indirect_settings(const ExperimentConfig& config, const LoadedData& loaded);

} // namespace gic
