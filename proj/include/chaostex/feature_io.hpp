#pragma once

#include "chaostex/dataset.hpp"
#include "chaostex/descriptor.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace ctx {

/// Feature matrix of a dataset: one row per sample, columns in FeatureLayout order.
struct FeatureTable {
    DescriptorConfig config;
    std::vector<std::string> labels;   // class names, indexed by Sample::label
    std::vector<Sample> samples;
    Eigen::MatrixXd features;          // samples x feature_length
    std::vector<std::string> columns;  // layout names, one per feature
};

nlohmann::json to_json(const DescriptorConfig& config);
DescriptorConfig descriptor_config_from_json(const nlohmann::json& j);

/// CSV layout:
///   # chaostex-features v1 <json: config + labels>
///   path,label,group,<column names>
///   one row per sample, numbers printed with 17 significant digits.
void write_features_csv(const FeatureTable& table, const std::filesystem::path& path);
FeatureTable read_features_csv(const std::filesystem::path& path);

/// Binary layout (all integers and floats little-endian):
///   "CTXF" | u16 version (1) | u64 rows | u64 cols |
///   u32 metadata length | metadata json (config, labels, samples, columns) |
///   rows*cols f64, row-major.
void write_features_binary(const FeatureTable& table, const std::filesystem::path& path);
FeatureTable read_features_binary(const std::filesystem::path& path);

/// Picks CSV for a ".csv" extension, binary otherwise.
void save_features(const FeatureTable& table, const std::filesystem::path& path);
FeatureTable load_features(const std::filesystem::path& path);

}  // namespace ctx
