#include "gic/config.hpp"

#include "gic/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gic {

using nlohmann::json;

int LabelRule::apply(const std::string& cell) const {
    if (!positive_values.empty())
        return std::find(positive_values.begin(), positive_values.end(), cell) != positive_values.end() ? 1 : -1;
    double v = 0.0;
    const auto* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw IngestionError("label column '" + column + "': non-numeric value '" + cell + "'");
    bool positive = false;
    if (op == "<=") positive = v <= threshold;
    else if (op == "<") positive = v < threshold;
    else if (op == ">=") positive = v >= threshold;
    else if (op == ">") positive = v > threshold;
    else if (op == "==") positive = v == threshold;
    else throw ConfigError("label rule: unknown operator '" + op + "'");
    return positive ? 1 : -1;
}

void ExperimentConfig::validate() const {
    if (features.empty()) throw ConfigError("config: no features declared");
    if (label.column.empty()) throw ConfigError("config: label column missing");
    if (delimiter.size() != 1) throw ConfigError("config: delimiter must be a single character");
    std::set<std::string> seen;
    std::size_t direct = 0;
    for (const auto& f : features) {
        if (!seen.insert(f.column).second) throw ConfigError("config: feature '" + f.column + "' declared twice");
        if (f.column == label.column) throw ConfigError("config: label column '" + f.column + "' declared as a feature");
        if (f.role == FeatureRole::Direct) {
            ++direct;
            if (f.one_hot) throw ConfigError("config: direct feature '" + f.column + "' cannot be one-hot encoded");
            if (!(f.cost_increase >= 0.0) || !(f.cost_decrease >= 0.0))
                throw ConfigError("config: costs of '" + f.column + "' must be nonnegative");
            if (f.lower && f.upper && *f.lower > *f.upper)
                throw ConfigError("config: lower bound exceeds upper bound for '" + f.column + "'");
        }
        if (f.sigma && !(*f.sigma > 0.0)) throw ConfigError("config: sigma of '" + f.column + "' must be positive");
    }
    if (direct == 0) throw ConfigError("config: at least one direct feature required");
    for (std::size_t b = 0; b < budgets.size(); ++b)
        if (!(budgets[b] >= 0.0) || (b > 0 && !(budgets[b] > budgets[b - 1])))
            throw ConfigError("config: budgets must be nonnegative and strictly increasing");
    if (sigma_grid.empty()) throw ConfigError("config: sigma grid is empty");
}

std::string ExperimentConfig::resolved_dataset_path() const {
    std::filesystem::path p(dataset_path);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    return p.string();
}

EvaluationPlan ExperimentConfig::plan(std::size_t threads) const {
    EvaluationPlan p;
    p.seed = seed;
    p.folds = folds;
    p.budgets = budgets;
    p.methods = method_list;
    p.settings = methods;
    p.forest = forest;
    p.indirect.grid = sigma_grid;
    p.indirect.folds = sigma_folds;
    p.selection = selection;
    p.max_instances = max_instances;
    p.threads = threads;
    p.tol = tol;
    return p;
}

namespace {

HeuristicParams params_from_json(const json& j, HeuristicParams p) {
    p.max_iters = j.value("max_iters", p.max_iters);
    p.population = j.value("population", p.population);
    p.breed = j.value("beta", p.breed);
    p.carryover = j.value("gamma", p.carryover);
    p.mutation_gate = j.value("mutation_gate", p.mutation_gate);
    p.local_extent = j.value("xi", p.local_extent);
    if (j.contains("alpha")) p.alpha = j.at("alpha").get<double>();
    return p;
}

json params_to_json(const HeuristicParams& p) {
    json j = {{"max_iters", p.max_iters}, {"population", p.population}, {"beta", p.breed},
              {"gamma", p.carryover},     {"mutation_gate", p.mutation_gate}, {"xi", p.local_extent}};
    if (p.alpha) j["alpha"] = *p.alpha;
    return j;
}

} // namespace

ExperimentConfig config_from_json(const json& j) {
    try {
        ExperimentConfig c;
        c.name = j.value("name", std::string{});
        const json& ds = j.at("dataset");
        c.dataset_path = ds.value("path", std::string{});
        c.delimiter = ds.value("delimiter", std::string(","));
        c.drop = ds.value("drop", std::vector<std::string>{});

        const json& lab = j.at("label");
        c.label.column = lab.at("column").get<std::string>();
        c.label.op = lab.value("positive_if", std::string("<="));
        c.label.threshold = lab.value("threshold", 0.0);
        c.label.positive_values = lab.value("positive_values", std::vector<std::string>{});

        c.cost_kind = parse_cost_kind(j.value("cost_kind", std::string("quadratic")));
        for (const json& f : j.at("features")) {
            FeatureConfig fc;
            fc.column = f.at("column").get<std::string>();
            fc.role = parse_feature_role(f.value("role", std::string("unchangeable")));
            fc.direction = parse_direction(f.value("direction", std::string("both")));
            fc.cost_increase = f.value("cost_increase", 0.0);
            fc.cost_decrease = f.value("cost_decrease", 0.0);
            if (f.contains("lower")) fc.lower = f.at("lower").get<double>();
            if (f.contains("upper")) fc.upper = f.at("upper").get<double>();
            fc.levels = f.value("levels", std::vector<std::string>{});
            fc.one_hot = f.value("one_hot", false);
            if (f.contains("sigma")) fc.sigma = f.at("sigma").get<double>();
            c.features.push_back(std::move(fc));
        }

        if (j.contains("forest")) {
            const json& fo = j.at("forest");
            c.forest.n_trees = fo.value("n_trees", c.forest.n_trees);
            c.forest.max_depth = fo.value("max_depth", c.forest.max_depth);
            c.forest.features_per_split = fo.value("features_per_split", c.forest.features_per_split);
            c.forest.seed = fo.value("seed", c.forest.seed);
        }
        if (j.contains("indirect")) {
            const json& in = j.at("indirect");
            c.sigma_grid = in.value("sigma_grid", c.sigma_grid);
            c.sigma_folds = in.value("cv_folds", c.sigma_folds);
        }
        if (j.contains("methods")) {
            const json& m = j.at("methods");
            if (m.contains("enabled")) {
                c.method_list.clear();
                for (const auto& name : m.at("enabled")) c.method_list.push_back(parse_method(name.get<std::string>()));
            }
            if (m.contains("hc-ls")) c.methods.hill_climb = params_from_json(m.at("hc-ls"), c.methods.hill_climb);
            if (m.contains("ga")) c.methods.genetic = params_from_json(m.at("ga"), c.methods.genetic);
            if (m.contains("ga-ls")) c.methods.genetic_local = params_from_json(m.at("ga-ls"), c.methods.genetic_local);
        }
        if (j.contains("evaluation")) {
            const json& e = j.at("evaluation");
            c.seed = e.value("seed", c.seed);
            c.folds = e.value("folds", c.folds);
            c.budgets = e.value("budgets", c.budgets);
            c.selection = parse_selection_policy(e.value("selection", to_string(c.selection)));
            c.max_instances = e.value("max_instances", c.max_instances);
            c.tol = e.value("tolerance", c.tol);
        }
        c.validate();
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

json config_to_json(const ExperimentConfig& c) {
    json features = json::array();
    for (const auto& f : c.features) {
        json fj = {{"column", f.column}, {"role", to_string(f.role)}};
        if (f.role == FeatureRole::Direct) {
            fj["direction"] = to_string(f.direction);
            fj["cost_increase"] = f.cost_increase;
            fj["cost_decrease"] = f.cost_decrease;
        }
        if (f.lower) fj["lower"] = *f.lower;
        if (f.upper) fj["upper"] = *f.upper;
        if (!f.levels.empty()) fj["levels"] = f.levels;
        if (f.one_hot) fj["one_hot"] = true;
        if (f.sigma) fj["sigma"] = *f.sigma;
        features.push_back(std::move(fj));
    }
    json label = {{"column", c.label.column}};
    if (c.label.positive_values.empty()) {
        label["positive_if"] = c.label.op;
        label["threshold"] = c.label.threshold;
    } else {
        label["positive_values"] = c.label.positive_values;
    }
    json enabled = json::array();
    for (Method m : c.method_list) enabled.push_back(to_string(m));
    return {
        {"name", c.name},
        {"dataset", {{"path", c.dataset_path}, {"delimiter", c.delimiter}, {"drop", c.drop}}},
        {"label", label},
        {"cost_kind", to_string(c.cost_kind)},
        {"features", features},
        {"forest",
         {{"n_trees", c.forest.n_trees},
          {"max_depth", c.forest.max_depth},
          {"features_per_split", c.forest.features_per_split},
          {"seed", c.forest.seed}}},
        {"indirect", {{"sigma_grid", c.sigma_grid}, {"cv_folds", c.sigma_folds}}},
        {"methods",
         {{"enabled", enabled},
          {"hc-ls", params_to_json(c.methods.hill_climb)},
          {"ga", params_to_json(c.methods.genetic)},
          {"ga-ls", params_to_json(c.methods.genetic_local)}}},
        {"evaluation",
         {{"seed", c.seed},
          {"folds", c.folds},
          {"budgets", c.budgets},
          {"selection", to_string(c.selection)},
          {"max_instances", c.max_instances},
          {"tolerance", c.tol}}},
    };
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config: '" + path + "' is not valid JSON: " + e.what());
    }
    ExperimentConfig c = config_from_json(j);
    c.base_dir = std::filesystem::path(path).parent_path().string();
    return c;
}

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cell += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == delimiter) {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell += ch;
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "NA" || cell == "?" || cell == "nan"; }

std::optional<double> parse_number(const std::string& cell) {
    double v = 0.0;
    const auto* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

} // namespace

CsvTable parse_csv(const std::string& text, char delimiter) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto cells = split_line(line, delimiter);
        if (header) {
            table.header = std::move(cells);
            header = false;
            continue;
        }
        if (cells.size() != table.header.size())
            throw IngestionError("csv: line " + std::to_string(table.rows.size() + 2) + " has " +
                                 std::to_string(cells.size()) + " fields, header has " +
                                 std::to_string(table.header.size()));
        table.rows.push_back(std::move(cells));
    }
    if (table.header.empty()) throw IngestionError("csv: missing header row");
    return table;
}

CsvTable read_csv(const std::string& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError("csv: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), delimiter);
}

LoadedData load_dataset(const CsvTable& table, const ExperimentConfig& config) {
    config.validate();
    std::map<std::string, std::size_t> column_index;
    for (std::size_t c = 0; c < table.header.size(); ++c) column_index[table.header[c]] = c;
    if (!column_index.count(config.label.column))
        throw ConfigError("config: label column '" + config.label.column + "' not found in dataset");

    std::map<std::string, const FeatureConfig*> by_name;
    for (const auto& f : config.features) {
        if (!column_index.count(f.column)) throw ConfigError("config: feature column '" + f.column + "' not found in dataset");
        by_name[f.column] = &f;
    }
    const std::set<std::string> dropped(config.drop.begin(), config.drop.end());
    for (const auto& h : table.header) {
        if (h == config.label.column || dropped.count(h) || by_name.count(h)) continue;
        throw ConfigError("config: dataset column '" + h + "' is neither mapped to a role nor dropped");
    }

    const std::size_t n = table.rows.size();
    const std::size_t label_col = column_index.at(config.label.column);

    struct OutColumn {
        std::string name;
        const FeatureConfig* feature;
        std::vector<double> values;
    };
    std::vector<OutColumn> columns;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        auto it = by_name.find(table.header[c]);
        if (it == by_name.end()) continue;
        const FeatureConfig& f = *it->second;
        auto cell_at = [&](std::size_t r) -> const std::string& {
            const std::string& cell = table.rows[r][c];
            if (is_missing(cell))
                throw IngestionError("missing value at data row " + std::to_string(r + 1) + ", column '" + f.column + "'");
            return cell;
        };
        if (f.one_hot) {
            std::vector<std::string> levels = f.levels;
            if (levels.empty()) {
                std::set<std::string> uniq;
                for (std::size_t r = 0; r < n; ++r) uniq.insert(cell_at(r));
                levels.assign(uniq.begin(), uniq.end());
            }
            std::vector<OutColumn> dummies;
            for (const auto& level : levels) dummies.push_back({f.column + "=" + level, &f, std::vector<double>(n, 0.0)});
            for (std::size_t r = 0; r < n; ++r) {
                const std::string& cell = cell_at(r);
                auto pos = std::find(levels.begin(), levels.end(), cell);
                if (pos == levels.end())
                    throw IngestionError("unknown level '" + cell + "' at data row " + std::to_string(r + 1) + ", column '" +
                                         f.column + "'");
                dummies[static_cast<std::size_t>(pos - levels.begin())].values[r] = 1.0;
            }
            for (auto& d : dummies) columns.push_back(std::move(d));
            continue;
        }
        OutColumn col{f.column, &f, std::vector<double>(n)};
        for (std::size_t r = 0; r < n; ++r) {
            const std::string& cell = cell_at(r);
            if (auto v = parse_number(cell)) {
                col.values[r] = *v;
                continue;
            }
            auto pos = std::find(f.levels.begin(), f.levels.end(), cell);
            if (pos == f.levels.end())
                throw IngestionError("non-numeric value '" + cell + "' at data row " + std::to_string(r + 1) + ", column '" +
                                     f.column + "'");
            col.values[r] = static_cast<double>(pos - f.levels.begin());
        }
        columns.push_back(std::move(col));
    }

    const std::size_t p = columns.size();
    std::vector<double> values(n * p);
    std::vector<std::string> names;
    std::vector<FeatureRole> roles;
    for (std::size_t j = 0; j < p; ++j) {
        names.push_back(columns[j].name);
        roles.push_back(columns[j].feature->role);
        for (std::size_t r = 0; r < n; ++r) values[r * p + j] = columns[j].values[r];
    }
    std::vector<int> labels(n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::string& cell = table.rows[r][label_col];
        if (is_missing(cell))
            throw IngestionError("missing value at data row " + std::to_string(r + 1) + ", column '" + config.label.column + "'");
        labels[r] = config.label.apply(cell);
    }

    LoadedData out;
    out.data = LabeledDataset(n, p, std::move(values), std::move(labels), names);
    out.problem.partition = FeaturePartition(roles);
    out.problem.costs.kind = config.cost_kind;
    bool all_sigma = true;
    for (std::size_t j : out.problem.partition.direct()) {
        const FeatureConfig& f = *columns[j].feature;
        out.direct_names.push_back(names[j]);
        out.problem.costs.increase.push_back(f.cost_increase);
        out.problem.costs.decrease.push_back(f.cost_decrease);
        out.problem.directions.push_back(f.direction);
        const auto& v = columns[j].values;
        out.problem.raw_lower.push_back(f.lower.value_or(n ? *std::min_element(v.begin(), v.end()) : 0.0));
        out.problem.raw_upper.push_back(f.upper.value_or(n ? *std::max_element(v.begin(), v.end()) : 0.0));
    }
    for (std::size_t j : out.problem.partition.indirect()) {
        out.indirect_names.push_back(names[j]);
        const FeatureConfig& f = *columns[j].feature;
        if (f.sigma)
            out.indirect_sigma.push_back(*f.sigma);
        else
            all_sigma = false;
    }
    if (!all_sigma) out.indirect_sigma.clear();
    out.problem.validate();
    return out;
}

LoadedData load_dataset(const std::string& csv_path, const ExperimentConfig& config) {
    if (config.delimiter.size() != 1) throw ConfigError("config: delimiter must be a single character");
    return load_dataset(read_csv(csv_path, config.delimiter[0]), config);
}

IndirectSettings indirect_settings(const ExperimentConfig& config, const LoadedData& loaded) {
    IndirectSettings s;
    s.sigma = loaded.indirect_sigma;
    s.grid = config.sigma_grid;
    s.folds = config.sigma_folds;
    return s;
}

} // namespace gic
