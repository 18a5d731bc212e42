#pragma once

#include "chaostex/dataset.hpp"
#include "chaostex/descriptor.hpp"
#include "chaostex/feature_io.hpp"
#include "chaostex/lda.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ctx {

/// Runs fn(0..count-1) on up to `threads` workers. The first exception (by
/// index) is rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

struct ExtractOptions {
    unsigned threads = 1;
    std::optional<std::filesystem::path> cache_dir;
};

/// Extracts every image of the index. Rows follow DatasetIndex::samples().
FeatureTable extract_dataset(const DatasetIndex& index, const DescriptorConfig& config,
                             const ExtractOptions& options = {});

/// Plain riu2 LBP histograms of the original images, no chaotic transform.
FeatureTable extract_plain_lbp(const DatasetIndex& index, const std::vector<LbpParams>& params,
                               unsigned threads = 1);

using ClassifierFactory = std::function<std::unique_ptr<Classifier>(std::uint64_t seed)>;

struct EvalConfig {
    Protocol protocol = Protocol::RandomHalf;
    int rounds = 10;
    std::uint64_t seed = 1;
    PcaDims pca = PcaDims::automatic();
    std::vector<double> lambda_grid = default_lambda_grid();
    int cv_folds = 5;
};

struct RoundResult {
    std::string split_id;
    double accuracy = 0.0;
    std::size_t pca_dims = 0;
    std::string classifier;
    double lambda = 0.0;  // LDA only
    std::size_t test_count = 0;
};

struct ExperimentResult {
    std::vector<RoundResult> rounds;
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation over rounds
    std::vector<std::string> labels;
    std::vector<std::vector<std::int64_t>> confusion;  // [target][predicted], summed over rounds
    nlohmann::json config;

    std::vector<double> accuracies() const;
};

/// PCA and the classifier are fit on each split's training rows only.
/// Errors inside a round are rethrown with the split id prepended.
ExperimentResult run_experiment(const FeatureTable& table, const std::vector<Split>& splits,
                                const EvalConfig& eval, ClassifierFactory factory = {});

/// Extracts (with optional cache) and evaluates in one go.
ExperimentResult run_experiment(const DatasetIndex& index, const std::vector<Split>& splits,
                                const DescriptorConfig& config, const EvalConfig& eval,
                                const ExtractOptions& options = {});

nlohmann::json to_json(const ExperimentResult& result);
ExperimentResult experiment_from_json(const nlohmann::json& j);

/// Integer matrix with a header row of labels.
std::string confusion_csv(const ExperimentResult& result);

}  // namespace ctx
