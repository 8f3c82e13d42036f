#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace gonio {

/// Dense row-major table of d-dimensional points.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::size_t dim) : dim_(dim) {}
    Dataset(std::size_t dim, std::vector<double> values);

    static Dataset from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t rows() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
    bool empty() const noexcept { return rows() == 0; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
    std::span<double> row(std::size_t i) { return {values_.data() + i * dim_, dim_}; }
    const std::vector<double>& values() const noexcept { return values_; }

    void push_back(std::span<const double> point);

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> values_;
};

/// Per-dimension z-score parameters and names, stored with a model so its
/// weights can be mapped back to feature units.
struct FeatureScaling {
    std::vector<std::string> names;
    std::vector<double> means;
    std::vector<double> stds;

    static FeatureScaling identity(std::size_t dim);

    std::size_t dim() const noexcept { return means.size(); }
    std::vector<double> to_normalized(std::span<const double> x) const;
    double to_original(std::size_t dim, double z) const { return z * stds[dim] + means[dim]; }

    friend bool operator==(const FeatureScaling&, const FeatureScaling&) = default;
};

struct Normalized {
    Dataset data;
    FeatureScaling scaling;
};

/// Column-wise z-score with population standard deviation. Needs at least
/// two rows; throws ZeroVariance naming the first constant column.
Normalized normalize(const Dataset& data, std::vector<std::string> names = {});

struct SomConfig {
    std::size_t grid_rows = 23;
    std::size_t grid_cols = 23;
    std::size_t iterations = 500;
    double learning_rate = 0.025;
    double initial_neighborhood = 25.0;
    std::uint64_t rng_seed = 0;

    void validate() const;
    friend bool operator==(const SomConfig&, const SomConfig&) = default;
};

/// Gaussian neighbourhood width at iteration t: linear from
/// initial_neighborhood at t = 0 to 1 at t = iterations - 1.
double neighborhood_radius(const SomConfig& config, std::size_t t);

struct GridCoord {
    std::size_t row = 0;
    std::size_t col = 0;
    friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

/// Row-major grid of scalars (U-matrix, component planes).
struct Grid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Grid() = default;
    Grid(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    friend bool operator==(const Grid&, const Grid&) = default;
};

using UMatrix = Grid;

struct SomModel {
    SomConfig config;
    std::size_t dim = 0;
    /// grid_rows * grid_cols * dim, neuron-major in row-major grid order.
    std::vector<double> weights;
    FeatureScaling scaling;

    std::size_t neurons() const noexcept { return config.grid_rows * config.grid_cols; }
    std::span<const double> weight(std::size_t r, std::size_t c) const
    {
        return {weights.data() + (r * config.grid_cols + c) * dim, dim};
    }
    std::span<double> weight(std::size_t r, std::size_t c)
    {
        return {weights.data() + (r * config.grid_cols + c) * dim, dim};
    }

    /// Throws SchemaMismatch when the arrays disagree with config/dim or a
    /// weight is non-finite.
    void validate() const;

    friend bool operator==(const SomModel&, const SomModel&) = default;
};

/// Seeded uniform initialization inside the per-dimension bounding box of
/// `data`. This is the starting point train() uses for the same config.
SomModel initialize(const Dataset& data, const SomConfig& config, FeatureScaling scaling = {});

/// Online training from initialize(data, config): every iteration presents
/// each row once in a seeded shuffled order. Deterministic for a given seed.
/// Throws EmptyData.
SomModel train(const Dataset& data, const SomConfig& config, FeatureScaling scaling = {});

/// Runs the training schedule of `initial.config` starting from the given
/// weights instead of a fresh initialization.
SomModel train(SomModel initial, const Dataset& data);

/// Nearest weight by Euclidean distance; ties go to the lowest row, then the
/// lowest column.
GridCoord bmu(const SomModel& model, std::span<const double> x);

/// bmu() for every row, OpenMP-parallel across rows.
std::vector<GridCoord> bmu_batch(const SomModel& model, const Dataset& data);
std::vector<GridCoord> bmu_batch_serial(const SomModel& model, const Dataset& data);

/// Mean distance from each row to its BMU weight.
double quantization_error(const SomModel& model, const Dataset& data);

/// Mean distance from each neuron to its existing 4-neighbours.
/// OpenMP-parallel; u_matrix_serial is the reference.
UMatrix u_matrix(const SomModel& model);
UMatrix u_matrix_serial(const SomModel& model);

/// One weight dimension across the grid in original feature units.
/// Throws DimOutOfRange.
Grid component_plane(const SomModel& model, std::size_t dim);

std::string model_to_json(const SomModel& model);
/// Throws CorruptFile for unparsable text and SchemaMismatch for a document
/// that parses but does not describe a consistent model.
SomModel model_from_json(const std::string& text);

void save_model(const std::filesystem::path& path, const SomModel& model);
SomModel load_model(const std::filesystem::path& path);

} // namespace gonio
