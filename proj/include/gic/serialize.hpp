#pragma once

// Structured-text (JSON) artifacts: trained models, curve results and
// recommendation reports. Output is a pure function of the inputs so that
// reruns are byte-identical.

#include "gic/evaluation.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gic {

inline constexpr int kModelFormatVersion = 1;

nlohmann::json forest_to_json(const Forest& forest);
Forest forest_from_json(const nlohmann::json& j);

nlohmann::json indirect_to_json(const IndirectModel& model);
IndirectModel indirect_from_json(const nlohmann::json& j);

/// What `train` writes and `optimize` reads.
struct ModelBundle {
    std::vector<std::string> feature_names;
    std::vector<FeatureRole> roles;
    Forest forest;
    std::optional<IndirectModel> indirect;
    std::vector<double> direct_sd;
    std::uint64_t seed = 0;

    const IndirectModel* indirect_ptr() const { return indirect ? &*indirect : nullptr; }
};

nlohmann::json model_to_json(const ModelBundle& bundle);
ModelBundle model_from_json(const nlohmann::json& j);
void save_model(const std::string& path, const ModelBundle& bundle);
ModelBundle load_model(const std::string& path);

/// Full structured result: plan echo, curve points and per-instance records.
/// Wall times are included only when with_timing is set.
nlohmann::json curve_to_json(const CurveResult& result, const EvaluationPlan& plan, bool with_timing);

/// budget,method,mean,p5,p95,count,mean_evaluations; one row per curve point.
std::string curve_table_csv(const CurveResult& result);

struct FeatureChange {
    std::string name;
    double before = 0.0;
    double after = 0.0;
    double delta = 0.0;
    double cost = 0.0;
};

struct RecommendationReport {
    std::size_t instance = 0;
    std::string method;
    double budget = 0.0;
    std::uint64_t seed = 0;
    double initial_probability = 0.0;  // g(0)
    double final_probability = 0.0;    // g(z)
    double raw_probability = 0.0;      // f(x̄) with the observed indirect values
    double spent = 0.0;
    std::uint64_t evaluations = 0;
    std::vector<FeatureChange> direct;
    std::vector<FeatureChange> indirect;  // re-estimated by H
    std::optional<double> wall_seconds;
};

nlohmann::json report_to_json(const RecommendationReport& report);

/// Writes content to path, creating parent directories.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace gic
