#pragma once

#include "chaostex/lda.hpp"
#include "chaostex/pca.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ctx {

/// PCA + LDA pipeline with class names, as produced by the `train` command.
struct TrainedModel {
    PcaModel pca;
    LdaModel lda;
    std::vector<std::string> labels;  // lda.class_labels index into this
};

/// Binary blob (little-endian):
///   "CTXM" | u16 version (1) | f64 lambda |
///   u64 pca rows | u64 pca cols | mean | components (column-major) | explained variance |
///   u64 lda rows | u64 lda dirs | u64 classes | projection (column-major) |
///   centroids (column-major) | classes x i64 class labels
/// plus a JSON sidecar `<path>.json` holding {"labels": [...], "lambda": ...}.
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace ctx
