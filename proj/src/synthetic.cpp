#include "gic/synthetic.hpp"

#include "gic/random.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace gic {

std::string synthetic_csv(std::size_t n, std::uint64_t seed) {
    Rng rng(derive_seed(seed, {0x5157}));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> box(0.0, 4.0);
    std::ostringstream out;
    out << std::setprecision(10);
    out << "u0,u1,d0,d1,d2,i0,i1,y\n";
    for (std::size_t r = 0; r < n; ++r) {
        const double u0 = normal(rng);
        const double u1 = normal(rng);
        const double d0 = box(rng);
        const double d1 = box(rng);
        const double d2 = box(rng);
        const double i0 = 0.5 * d0 + 0.3 * u0 + 0.2 * normal(rng);
        const double i1 = 1.0 - 0.4 * d1 + 0.2 * normal(rng);
        const double score = 0.6 * u0 + 0.3 * u1 - 0.5 * d0 + 0.5 * d1 + 0.3 * std::abs(d2 - 2.0) - 0.6 * i0 +
                             0.8 * i1 + 0.5 * normal(rng);
        out << u0 << ',' << u1 << ',' << d0 << ',' << d1 << ',' << d2 << ',' << i0 << ',' << i1 << ','
            << (score > 0.0 ? 1 : 0) << '\n';
    }
    return out.str();
}

ExperimentConfig synthetic_config() {
    ExperimentConfig c;
    c.name = "synthetic";
    c.label.column = "y";
    c.label.op = ">=";
    c.label.threshold = 1.0;
    auto direct = [](const char* name, Direction dir, double inc, double dec) {
        FeatureConfig f;
        f.column = name;
        f.role = FeatureRole::Direct;
        f.direction = dir;
        f.cost_increase = inc;
        f.cost_decrease = dec;
        f.lower = 0.0;
        f.upper = 4.0;
        return f;
    };
    auto plain = [](const char* name, FeatureRole role) {
        FeatureConfig f;
        f.column = name;
        f.role = role;
        return f;
    };
    c.features = {plain("u0", FeatureRole::Unchangeable),
                  plain("u1", FeatureRole::Unchangeable),
                  direct("d0", Direction::IncreaseOnly, 1.0, 0.0),
                  direct("d1", Direction::DecreaseOnly, 0.0, 1.0),
                  direct("d2", Direction::Both, 2.0, 2.0),
                  plain("i0", FeatureRole::Indirect),
                  plain("i1", FeatureRole::Indirect)};
    c.forest.n_trees = 50;
    c.forest.max_depth = 6;
    c.forest.seed = 7;
    c.budgets = {0.0, 0.5, 1.0, 2.0, 4.0};
    c.seed = 1;
    c.folds = 5;
    return c;
}

LoadedData synthetic_data(std::size_t n, std::uint64_t seed) {
    return load_dataset(parse_csv(synthetic_csv(n, seed), ','), synthetic_config());
}

} // namespace gic
