#include "gic/serialize.hpp"

#include "gic/error.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace gic {

using nlohmann::json;

json forest_to_json(const Forest& forest) {
    json trees = json::array();
    for (const auto& tree : forest.trees()) {
        json nodes = json::array();
        for (const auto& n : tree.nodes()) {
            // leaves: [vote]; splits: [feature, threshold, left, right]
            if (n.feature < 0)
                nodes.push_back(json::array({n.vote}));
            else
                nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right}));
        }
        trees.push_back(std::move(nodes));
    }
    const auto& p = forest.params();
    return {{"format", "gic-forest"},
            {"version", kModelFormatVersion},
            {"p", forest.num_features()},
            {"n_trees", forest.size()},
            {"max_depth", p.max_depth},
            {"features_per_split", p.features_per_split},
            {"seed", p.seed},
            {"trees", trees}};
}

Forest forest_from_json(const json& j) {
    try {
        if (j.at("format").get<std::string>() != "gic-forest") throw ConfigError("model: not a forest");
        if (j.at("version").get<int>() != kModelFormatVersion) throw ConfigError("model: unsupported forest version");
        ForestParams params;
        params.max_depth = j.at("max_depth").get<std::size_t>();
        params.features_per_split = j.at("features_per_split").get<std::size_t>();
        params.seed = j.at("seed").get<std::uint64_t>();
        const std::size_t p = j.at("p").get<std::size_t>();
        std::vector<DecisionTree> trees;
        for (const auto& tj : j.at("trees")) {
            std::vector<TreeNode> nodes;
            for (const auto& nj : tj) {
                TreeNode n;
                if (nj.size() == 1) {
                    n.vote = nj[0].get<int>();
                } else if (nj.size() == 4) {
                    n.feature = nj[0].get<int>();
                    n.threshold = nj[1].get<double>();
                    n.left = nj[2].get<int>();
                    n.right = nj[3].get<int>();
                } else {
                    throw ConfigError("model: malformed tree node");
                }
                nodes.push_back(n);
            }
            trees.emplace_back(std::move(nodes));
        }
        if (trees.size() != j.at("n_trees").get<std::size_t>()) throw ConfigError("model: tree count mismatch");
        return Forest(p, std::move(trees), params);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("model: malformed forest: ") + e.what());
    }
}

json indirect_to_json(const IndirectModel& m) {
    return {{"format", "gic-kernel-regression"},
            {"version", kModelFormatVersion},
            {"n", m.size()},
            {"d", m.input_dim()},
            {"t", m.output_dim()},
            {"sigma", m.sigma()},
            {"mean", m.mean()},
            {"scale", m.scale()},
            {"inputs", m.raw_inputs()},
            {"targets", m.targets()}};
}

IndirectModel indirect_from_json(const json& j) {
    try {
        if (j.at("format").get<std::string>() != "gic-kernel-regression") throw ConfigError("model: not a kernel regression");
        if (j.at("version").get<int>() != kModelFormatVersion) throw ConfigError("model: unsupported H version");
        return IndirectModel(j.at("n").get<std::size_t>(), j.at("d").get<std::size_t>(),
                             j.at("inputs").get<std::vector<double>>(), j.at("t").get<std::size_t>(),
                             j.at("targets").get<std::vector<double>>(), j.at("sigma").get<std::vector<double>>(),
                             j.at("mean").get<std::vector<double>>(), j.at("scale").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("model: malformed kernel regression: ") + e.what());
    }
}

json model_to_json(const ModelBundle& b) {
    json roles = json::array();
    for (FeatureRole r : b.roles) roles.push_back(to_string(r));
    json j = {{"format", "gic-model"},
              {"version", kModelFormatVersion},
              {"seed", b.seed},
              {"feature_names", b.feature_names},
              {"roles", roles},
              {"direct_sd", b.direct_sd},
              {"forest", forest_to_json(b.forest)}};
    j["indirect"] = b.indirect ? indirect_to_json(*b.indirect) : json(nullptr);
    return j;
}

ModelBundle model_from_json(const json& j) {
    try {
        if (j.at("format").get<std::string>() != "gic-model") throw ConfigError("model: not a gic model file");
        if (j.at("version").get<int>() != kModelFormatVersion) throw ConfigError("model: unsupported version");
        ModelBundle b;
        b.seed = j.at("seed").get<std::uint64_t>();
        b.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        for (const auto& r : j.at("roles")) b.roles.push_back(parse_feature_role(r.get<std::string>()));
        b.direct_sd = j.at("direct_sd").get<std::vector<double>>();
        b.forest = forest_from_json(j.at("forest"));
        if (!j.at("indirect").is_null()) b.indirect = indirect_from_json(j.at("indirect"));
        if (b.roles.size() != b.forest.num_features() || b.feature_names.size() != b.roles.size())
            throw DimensionError("model: feature names, roles and forest width disagree");
        return b;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("model: malformed model file: ") + e.what());
    }
}

void save_model(const std::string& path, const ModelBundle& bundle) {
    write_text_file(path, model_to_json(bundle).dump() + "\n");
}

ModelBundle load_model(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw ConfigError("model: '" + path + "' is not valid JSON: " + e.what());
    }
    return model_from_json(j);
}

json curve_to_json(const CurveResult& result, const EvaluationPlan& plan, bool with_timing) {
    json methods = json::array();
    for (Method m : plan.methods) methods.push_back(to_string(m));
    json points = json::array();
    for (std::size_t k = 0; k < result.points.size(); ++k) {
        const CurvePoint& pt = result.points[k];
        json records = json::array();
        for (const InstanceRecord& r : result.records[k]) {
            json rj = {{"row", r.row},
                       {"fold", r.fold},
                       {"seed", r.seed},
                       {"initial_probability", r.initial_probability},
                       {"raw_initial_probability", r.raw_initial_probability},
                       {"final_probability", r.final_probability},
                       {"recommendation_initial", r.recommendation_initial},
                       {"recommendation_final", r.recommendation_final},
                       {"z", r.z},
                       {"evaluations", r.evaluations}};
            if (with_timing) rj["wall_seconds"] = r.wall_seconds;
            records.push_back(std::move(rj));
        }
        points.push_back({{"method", to_string(pt.method)},
                          {"budget", pt.budget},
                          {"mean", pt.mean},
                          {"p5", pt.p5},
                          {"p95", pt.p95},
                          {"count", pt.count},
                          {"mean_evaluations", pt.mean_evaluations},
                          {"records", records}});
    }
    return {{"format", "gic-curve"},
            {"version", kModelFormatVersion},
            {"seed", plan.seed},
            {"forest_seed", plan.forest.seed},
            {"folds", plan.folds},
            {"selection", to_string(plan.selection)},
            {"methods", methods},
            {"budgets", plan.budgets},
            {"train_rows", result.train_rows},
            {"holdout_rows", result.holdout_rows},
            {"instances", result.instances},
            {"baseline_mean", result.baseline_mean},
            {"points", points}};
}

namespace {

std::string fmt(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

} // namespace

std::string curve_table_csv(const CurveResult& result) {
    std::ostringstream out;
    out << "budget,method,mean,p5,p95,count,mean_evaluations\n";
    for (const CurvePoint& pt : result.points)
        out << fmt(pt.budget) << ',' << to_string(pt.method) << ',' << fmt(pt.mean) << ',' << fmt(pt.p5) << ','
            << fmt(pt.p95) << ',' << pt.count << ',' << fmt(pt.mean_evaluations) << '\n';
    return out.str();
}

json report_to_json(const RecommendationReport& r) {
    auto changes = [](const std::vector<FeatureChange>& list) {
        json a = json::array();
        for (const auto& c : list)
            a.push_back({{"feature", c.name}, {"before", c.before}, {"after", c.after}, {"delta", c.delta}, {"cost", c.cost}});
        return a;
    };
    json j = {{"format", "gic-recommendation"},
              {"version", kModelFormatVersion},
              {"instance", r.instance},
              {"method", r.method},
              {"budget", r.budget},
              {"seed", r.seed},
              {"initial_probability", r.initial_probability},
              {"final_probability", r.final_probability},
              {"raw_probability", r.raw_probability},
              {"spent", r.spent},
              {"evaluations", r.evaluations},
              {"direct", changes(r.direct)},
              {"indirect", changes(r.indirect)}};
    if (r.wall_seconds) j["wall_seconds"] = *r.wall_seconds;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IngestionError("cannot write '" + path + "'");
    out << content;
    if (!out) throw IngestionError("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace gic
