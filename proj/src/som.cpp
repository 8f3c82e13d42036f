#include "gonio/som.hpp"

#include "gonio/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>

namespace gonio {

namespace {

// Bit-reproducible draws: mt19937_64's output sequence is fixed by the
// standard, the distributions in <random> are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::size_t below(std::size_t n)
    {
        const std::uint64_t bound = n;
        const std::uint64_t threshold = (0 - bound) % bound;
        while (true) {
            const std::uint64_t r = engine_();
            if (r >= threshold)
                return static_cast<std::size_t>(r % bound);
        }
    }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent streams for initialization and presentation order, so
// initialize() reproduces train()'s starting point exactly.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kOrderStream = 2;

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream)
{
    return splitmix64(seed ^ splitmix64(stream));
}

double squared_distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

double distance(std::span<const double> a, std::span<const double> b) { return std::sqrt(squared_distance(a, b)); }

FeatureScaling resolve_scaling(FeatureScaling scaling, std::size_t dim)
{
    if (scaling.means.empty() && scaling.stds.empty())
        scaling = FeatureScaling::identity(dim);
    if (scaling.names.empty())
        scaling.names = FeatureScaling::identity(dim).names;
    if (scaling.means.size() != dim || scaling.stds.size() != dim || scaling.names.size() != dim)
        throw std::invalid_argument("feature scaling does not match data dimension");
    return scaling;
}

void check_training_data(const Dataset& data, std::size_t dim)
{
    if (data.empty())
        throw EmptyData("SOM training needs at least one data row");
    if (data.dim() != dim)
        throw std::invalid_argument("data dimension " + std::to_string(data.dim()) + " does not match model " +
                                    std::to_string(dim));
    for (double v : data.values())
        if (!std::isfinite(v))
            throw std::invalid_argument("SOM training data must be finite");
}

} // namespace

Dataset::Dataset(std::size_t dim, std::vector<double> values) : dim_(dim), values_(std::move(values))
{
    if (dim_ == 0 || values_.size() % dim_ != 0)
        throw std::invalid_argument("Dataset: value count is not a multiple of the dimension");
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows)
{
    if (rows.empty())
        return {};
    Dataset d(rows.front().size());
    for (const auto& r : rows)
        d.push_back(r);
    return d;
}

void Dataset::push_back(std::span<const double> point)
{
    if (dim_ == 0)
        dim_ = point.size();
    if (point.size() != dim_ || dim_ == 0)
        throw std::invalid_argument("Dataset: point dimension mismatch");
    values_.insert(values_.end(), point.begin(), point.end());
}

FeatureScaling FeatureScaling::identity(std::size_t dim)
{
    FeatureScaling s;
    s.means.assign(dim, 0.0);
    s.stds.assign(dim, 1.0);
    for (std::size_t k = 0; k < dim; ++k)
        s.names.push_back("f" + std::to_string(k));
    return s;
}

std::vector<double> FeatureScaling::to_normalized(std::span<const double> x) const
{
    if (x.size() != dim())
        throw std::invalid_argument("to_normalized: dimension mismatch");
    std::vector<double> z(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        z[k] = (x[k] - means[k]) / stds[k];
    return z;
}

Normalized normalize(const Dataset& data, std::vector<std::string> names)
{
    if (data.empty())
        throw EmptyData("normalize: no rows");
    const std::size_t n = data.rows();
    const std::size_t d = data.dim();
    if (!names.empty() && names.size() != d)
        throw std::invalid_argument("normalize: feature name count does not match dimension");

    Normalized out;
    out.scaling = FeatureScaling::identity(d);
    if (!names.empty())
        out.scaling.names = std::move(names);

    for (std::size_t k = 0; k < d; ++k) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            mean += data.row(i)[k];
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dev = data.row(i)[k] - mean;
            ss += dev * dev;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n));
        if (n < 2 || !(sd > 0.0))
            throw ZeroVariance(k);
        out.scaling.means[k] = mean;
        out.scaling.stds[k] = sd;
    }

    out.data = Dataset(d);
    for (std::size_t i = 0; i < n; ++i)
        out.data.push_back(out.scaling.to_normalized(data.row(i)));
    return out;
}

void SomConfig::validate() const
{
    if (grid_rows < 2 || grid_cols < 2)
        throw std::invalid_argument("SOM grid must be at least 2 x 2");
    if (iterations < 1)
        throw std::invalid_argument("SOM needs at least one iteration");
    // Zero is accepted: a frozen map is useful to inspect the initialization.
    if (!(learning_rate >= 0.0 && learning_rate <= 1.0))
        throw std::invalid_argument("learning rate must lie in [0, 1]");
    if (!(initial_neighborhood >= 1.0) || !std::isfinite(initial_neighborhood))
        throw std::invalid_argument("initial neighbourhood must be >= 1");
}

double neighborhood_radius(const SomConfig& config, std::size_t t)
{
    if (config.iterations <= 1)
        return config.initial_neighborhood;
    const double f = static_cast<double>(t) / static_cast<double>(config.iterations - 1);
    // Written so that f = 0 gives exactly nu and f = 1 gives exactly 1.
    return config.initial_neighborhood * (1.0 - f) + f;
}

void SomModel::validate() const
{
    if (dim == 0)
        throw SchemaMismatch("model dimension is zero");
    if (weights.size() != neurons() * dim)
        throw SchemaMismatch("weights hold " + std::to_string(weights.size()) + " values, expected " +
                             std::to_string(neurons() * dim));
    if (scaling.means.size() != dim || scaling.stds.size() != dim || scaling.names.size() != dim)
        throw SchemaMismatch("feature scaling does not match model dimension");
    for (double s : scaling.stds)
        if (!(s > 0.0) || !std::isfinite(s))
            throw SchemaMismatch("feature standard deviations must be positive");
    for (double w : weights)
        if (!std::isfinite(w))
            throw SchemaMismatch("non-finite weight");
}

SomModel initialize(const Dataset& data, const SomConfig& config, FeatureScaling scaling)
{
    config.validate();
    check_training_data(data, data.dim());
    const std::size_t d = data.dim();

    std::vector<double> lo(d, std::numeric_limits<double>::infinity());
    std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < data.rows(); ++i)
        for (std::size_t k = 0; k < d; ++k) {
            lo[k] = std::min(lo[k], data.row(i)[k]);
            hi[k] = std::max(hi[k], data.row(i)[k]);
        }

    SomModel model;
    model.config = config;
    model.dim = d;
    model.scaling = resolve_scaling(std::move(scaling), d);
    model.weights.resize(model.neurons() * d);

    Rng rng(stream_seed(config.rng_seed, kInitStream));
    for (std::size_t n = 0; n < model.neurons(); ++n)
        for (std::size_t k = 0; k < d; ++k) {
            const double w = lo[k] + rng.uniform01() * (hi[k] - lo[k]);
            model.weights[n * d + k] = std::clamp(w, lo[k], hi[k]);
        }
    return model;
}

SomModel train(SomModel model, const Dataset& data)
{
    const SomConfig& cfg = model.config;
    cfg.validate();
    check_training_data(data, model.dim);
    model.validate();

    const std::size_t rows = cfg.grid_rows;
    const std::size_t cols = cfg.grid_cols;
    const std::size_t d = model.dim;
    const std::size_t n = data.rows();

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    Rng rng(stream_seed(cfg.rng_seed, kOrderStream));

    // Step size for every |row offset|, |col offset| pair at the current width.
    std::vector<double> step(rows * cols);

    for (std::size_t t = 0; t < cfg.iterations; ++t) {
        const double sigma = neighborhood_radius(cfg, t);
        const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
        for (std::size_t dr = 0; dr < rows; ++dr)
            for (std::size_t dc = 0; dc < cols; ++dc) {
                const auto g2 = static_cast<double>(dr * dr + dc * dc);
                step[dr * cols + dc] = cfg.learning_rate * std::exp(-g2 * inv_two_sigma_sq);
            }

        for (std::size_t i = n; i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);

        for (std::size_t idx : order) {
            const auto x = data.row(idx);
            const GridCoord b = bmu(model, x);
            for (std::size_t r = 0; r < rows; ++r) {
                const std::size_t dr = r > b.row ? r - b.row : b.row - r;
                for (std::size_t c = 0; c < cols; ++c) {
                    const std::size_t dc = c > b.col ? c - b.col : b.col - c;
                    const double a = step[dr * cols + dc];
                    if (a == 0.0)
                        continue;
                    double* w = model.weights.data() + (r * cols + c) * d;
                    for (std::size_t k = 0; k < d; ++k) {
                        // A convex step; the clamp only absorbs rounding.
                        const double moved = w[k] + a * (x[k] - w[k]);
                        w[k] = std::clamp(moved, std::min(w[k], x[k]), std::max(w[k], x[k]));
                    }
                }
            }
        }
    }
    return model;
}

SomModel train(const Dataset& data, const SomConfig& config, FeatureScaling scaling)
{
    return train(initialize(data, config, std::move(scaling)), data);
}

GridCoord bmu(const SomModel& model, std::span<const double> x)
{
    if (x.size() != model.dim)
        throw std::invalid_argument("bmu: query dimension mismatch");
    const std::size_t cols = model.config.grid_cols;
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < model.neurons(); ++i) {
        const double dist = squared_distance(x, {model.weights.data() + i * model.dim, model.dim});
        if (dist < best_d) {
            best_d = dist;
            best = i;
        }
    }
    return {best / cols, best % cols};
}

std::vector<GridCoord> bmu_batch(const SomModel& model, const Dataset& data)
{
    if (!data.empty() && data.dim() != model.dim)
        throw std::invalid_argument("bmu_batch: data dimension mismatch");
    std::vector<GridCoord> out(data.rows());
    const auto n = static_cast<std::ptrdiff_t>(data.rows());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = bmu(model, data.row(static_cast<std::size_t>(i)));
    return out;
}

std::vector<GridCoord> bmu_batch_serial(const SomModel& model, const Dataset& data)
{
    std::vector<GridCoord> out;
    out.reserve(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i)
        out.push_back(bmu(model, data.row(i)));
    return out;
}

double quantization_error(const SomModel& model, const Dataset& data)
{
    if (data.empty())
        throw EmptyData("quantization_error: no data");
    const auto hits = bmu_batch(model, data);
    double sum = 0.0;
    for (std::size_t i = 0; i < hits.size(); ++i)
        sum += distance(data.row(i), model.weight(hits[i].row, hits[i].col));
    return sum / static_cast<double>(hits.size());
}

namespace {

double u_value(const SomModel& model, std::size_t r, std::size_t c)
{
    const std::size_t rows = model.config.grid_rows;
    const std::size_t cols = model.config.grid_cols;
    const auto w = model.weight(r, c);
    double sum = 0.0;
    int count = 0;
    if (r > 0) {
        sum += distance(w, model.weight(r - 1, c));
        ++count;
    }
    if (r + 1 < rows) {
        sum += distance(w, model.weight(r + 1, c));
        ++count;
    }
    if (c > 0) {
        sum += distance(w, model.weight(r, c - 1));
        ++count;
    }
    if (c + 1 < cols) {
        sum += distance(w, model.weight(r, c + 1));
        ++count;
    }
    return count == 0 ? 0.0 : sum / count;
}

} // namespace

UMatrix u_matrix(const SomModel& model)
{
    const std::size_t rows = model.config.grid_rows;
    const std::size_t cols = model.config.grid_cols;
    UMatrix u(rows, cols);
    const auto cells = static_cast<std::ptrdiff_t>(rows * cols);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < cells; ++i) {
        const auto cell = static_cast<std::size_t>(i);
        u.values[cell] = u_value(model, cell / cols, cell % cols);
    }
    return u;
}

UMatrix u_matrix_serial(const SomModel& model)
{
    UMatrix u(model.config.grid_rows, model.config.grid_cols);
    for (std::size_t r = 0; r < u.rows; ++r)
        for (std::size_t c = 0; c < u.cols; ++c)
            u.at(r, c) = u_value(model, r, c);
    return u;
}

Grid component_plane(const SomModel& model, std::size_t dim)
{
    if (dim >= model.dim)
        throw DimOutOfRange("component " + std::to_string(dim) + " requested from a " +
                            std::to_string(model.dim) + "-dimensional model");
    Grid g(model.config.grid_rows, model.config.grid_cols);
    for (std::size_t r = 0; r < g.rows; ++r)
        for (std::size_t c = 0; c < g.cols; ++c)
            g.at(r, c) = model.scaling.to_original(dim, model.weight(r, c)[dim]);
    return g;
}

std::string model_to_json(const SomModel& model)
{
    using nlohmann::json;
    json cfg = {
        {"grid_rows", model.config.grid_rows},
        {"grid_cols", model.config.grid_cols},
        {"iterations", model.config.iterations},
        {"learning_rate", model.config.learning_rate},
        {"initial_neighborhood", model.config.initial_neighborhood},
        {"rng_seed", model.config.rng_seed},
    };
    json weights = json::array();
    for (std::size_t r = 0; r < model.config.grid_rows; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < model.config.grid_cols; ++c) {
            const auto w = model.weight(r, c);
            row.push_back(json(std::vector<double>(w.begin(), w.end())));
        }
        weights.push_back(std::move(row));
    }
    json doc = {
        {"config", std::move(cfg)},
        {"feature_names", model.scaling.names},
        {"feature_means", model.scaling.means},
        {"feature_stds", model.scaling.stds},
        {"weights", std::move(weights)},
    };
    return doc.dump(2) + "\n";
}

SomModel model_from_json(const std::string& text)
{
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw CorruptFile(std::string("model file is not valid JSON: ") + e.what());
    }

    SomModel model;
    try {
        const json& cfg = doc.at("config");
        model.config.grid_rows = cfg.at("grid_rows").get<std::size_t>();
        model.config.grid_cols = cfg.at("grid_cols").get<std::size_t>();
        model.config.iterations = cfg.at("iterations").get<std::size_t>();
        model.config.learning_rate = cfg.at("learning_rate").get<double>();
        model.config.initial_neighborhood = cfg.at("initial_neighborhood").get<double>();
        model.config.rng_seed = cfg.at("rng_seed").get<std::uint64_t>();
        model.scaling.names = doc.at("feature_names").get<std::vector<std::string>>();
        model.scaling.means = doc.at("feature_means").get<std::vector<double>>();
        model.scaling.stds = doc.at("feature_stds").get<std::vector<double>>();
        model.dim = model.scaling.means.size();

        const json& weights = doc.at("weights");
        if (!weights.is_array() || weights.size() != model.config.grid_rows)
            throw SchemaMismatch("weights have " + std::to_string(weights.size()) + " rows, config declares " +
                                 std::to_string(model.config.grid_rows));
        for (const json& row : weights) {
            if (!row.is_array() || row.size() != model.config.grid_cols)
                throw SchemaMismatch("weight row length does not match declared grid_cols " +
                                     std::to_string(model.config.grid_cols));
            for (const json& w : row) {
                auto v = w.get<std::vector<double>>();
                if (v.size() != model.dim)
                    throw SchemaMismatch("weight vector of dimension " + std::to_string(v.size()) +
                                         ", expected " + std::to_string(model.dim));
                model.weights.insert(model.weights.end(), v.begin(), v.end());
            }
        }
    } catch (const json::exception& e) {
        throw SchemaMismatch(std::string("model file does not match the model schema: ") + e.what());
    }

    try {
        model.config.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaMismatch(std::string("invalid config: ") + e.what());
    }
    model.validate();
    return model;
}

void save_model(const std::filesystem::path& path, const SomModel& model)
{
    model.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    out << model_to_json(model);
}

SomModel load_model(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CorruptFile("cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return model_from_json(text.str());
}

} // namespace gonio
