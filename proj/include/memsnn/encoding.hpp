#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "memsnn/units.hpp"

namespace memsnn {

inline constexpr std::size_t kIrisFeatures = 4;
inline constexpr std::size_t kIrisClasses = 3;
inline constexpr std::size_t kCodingLevels = 4;
inline constexpr std::size_t kInputNeurons = kIrisFeatures * kCodingLevels;

struct IrisSample {
    std::array<double, kIrisFeatures> features{};
    int label = 0;
};

struct EncodedSample {
    std::array<NanoAmps, kInputNeurons> input_currents{};
    int label = 0;
};

/// Gaussian tuning-curve population coder: four equally spaced levels per
/// feature, neuron index 4*feature + level.
struct PopulationCoder {
    std::array<double, kIrisFeatures> min{};
    std::array<double, kIrisFeatures> max{};
    NanoAmps i_max = 20.0;

    double center(std::size_t feature, std::size_t level) const;
    double sigma(std::size_t feature) const;
};

/// Calibrates per-feature ranges. Throws std::invalid_argument on an empty
/// dataset or a constant feature column.
PopulationCoder fit_coder(const std::vector<IrisSample>& dataset, NanoAmps i_max = 20.0);

EncodedSample encode(const IrisSample& sample, const PopulationCoder& coder);

std::vector<EncodedSample> encode_all(const std::vector<IrisSample>& dataset,
                                      const PopulationCoder& coder);

/// Parses `sepal_length,sepal_width,petal_length,petal_width,class`. The
/// class column may be a species name or an integer id; a first line whose
/// first field is non-numeric is treated as a header.
///
/// Throws std::runtime_error (with the line number) on malformed rows or an
/// empty file. A sample count other than 150 only produces a warning on
/// stderr.
std::vector<IrisSample> load_iris(const std::filesystem::path& path);

/// Maps "Iris-setosa", "setosa", "0", ... to a class id; -1 if unknown.
int parse_iris_class(const std::string& token);

}  // namespace memsnn
