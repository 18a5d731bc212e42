#include "chaostex/experiment.hpp"

#include "chaostex/errors.hpp"
#include "chaostex/feature_cache.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

using nlohmann::json;

namespace ctx {

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    std::vector<std::exception_ptr> errors(count);
    if (workers == 1) {
        for (std::size_t k = 0; k < count; ++k) {
            try {
                fn(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < count; k = next++) {
                    try {
                        fn(k);
                    } catch (...) {
                        errors[k] = std::current_exception();
                    }
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

namespace {

FeatureTable empty_table(const DatasetIndex& index, const DescriptorConfig& config) {
    FeatureTable table;
    table.config = config;
    table.labels = index.labels();
    table.samples = index.samples();
    return table;
}

}  // namespace

FeatureTable extract_dataset(const DatasetIndex& index, const DescriptorConfig& config,
                             const ExtractOptions& options) {
    config.validate();
    FeatureTable table = empty_table(index, config);
    const FeatureLayout layout = FeatureLayout::from(config);
    table.columns = layout.column_names(config);
    table.features.resize(static_cast<Eigen::Index>(table.samples.size()),
                          static_cast<Eigen::Index>(layout.length));

    std::optional<FeatureCache> cache;
    if (options.cache_dir) cache.emplace(*options.cache_dir);
    const std::string canonical = config.canonical();

    parallel_for(table.samples.size(), options.threads, [&](std::size_t s) {
        const auto& path = table.samples[s].path;
        std::vector<double> values;
        std::string key;
        if (cache) {
            key = FeatureCache::key(sha256_file(path), canonical);
            if (auto hit = cache->get(key); hit && hit->size() == layout.length) values = std::move(*hit);
        }
        if (values.empty()) {
            try {
                values = extract(load_gray(path), config).values;
            } catch (const ContractViolation& e) {
                throw DataError(path + ": " + e.what());
            }
            if (cache) cache->put(key, values);
        }
        table.features.row(static_cast<Eigen::Index>(s)) =
            Eigen::Map<const Eigen::RowVectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    });
    return table;
}

FeatureTable extract_plain_lbp(const DatasetIndex& index, const std::vector<LbpParams>& params,
                               unsigned threads) {
    DescriptorConfig config;
    config.map = ChaoticMapSpec::defaults(MapFamily::Identity);
    config.n_iter = 1;
    config.delta = 1.0;
    config.lbp = params;
    FeatureTable table = empty_table(index, config);

    std::size_t length = 0;
    for (const auto& p : params) {
        p.validate();
        for (std::size_t b = 0; b < p.bins(); ++b) {
            table.columns.push_back("P" + std::to_string(p.points) + "R" +
                                    std::to_string(p.radius) + "_b" + std::to_string(b));
        }
        length += p.bins();
    }
    table.features.resize(static_cast<Eigen::Index>(table.samples.size()),
                          static_cast<Eigen::Index>(length));
    parallel_for(table.samples.size(), threads, [&](std::size_t s) {
        const GrayImage image = load_gray(table.samples[s].path);
        Eigen::Index col = 0;
        for (const auto& p : params) {
            for (double v : lbp_histogram(image, p).bins) {
                table.features(static_cast<Eigen::Index>(s), col++) = v;
            }
        }
    });
    return table;
}

std::vector<double> ExperimentResult::accuracies() const {
    std::vector<double> out;
    for (const auto& r : rounds) out.push_back(r.accuracy);
    return out;
}

namespace {

json eval_json(const EvalConfig& eval) {
    return {{"protocol", to_string(eval.protocol)},
            {"rounds", eval.rounds},
            {"seed", eval.seed},
            {"pca", eval.pca.to_string()},
            {"lambda_grid", eval.lambda_grid},
            {"cv_folds", eval.cv_folds}};
}

template <typename E>
[[noreturn]] void rethrow_with_split(const std::string& split_id, const E& e) {
    throw E("split " + split_id + ": " + e.what());
}

RoundResult run_round(const FeatureTable& table, const Split& split, const EvalConfig& eval,
                      const ClassifierFactory& factory, std::uint64_t round_seed,
                      std::vector<std::vector<std::int64_t>>& confusion) {
    check_no_leakage(table.samples, split);
    if (split.train.empty() || split.test.empty()) {
        throw DataError("empty train or test side");
    }
    std::vector<Eigen::Index> train_rows(split.train.begin(), split.train.end());
    std::vector<int> train_labels;
    for (auto s : split.train) train_labels.push_back(table.samples[s].label);

    const Eigen::MatrixXd train = table.features(train_rows, Eigen::all);
    std::size_t classes = 0;
    {
        std::vector<int> distinct = train_labels;
        std::sort(distinct.begin(), distinct.end());
        classes = static_cast<std::size_t>(std::unique(distinct.begin(), distinct.end()) - distinct.begin());
    }
    const PcaModel pca = fit_pca(train, eval.pca, classes);
    const Eigen::MatrixXd reduced = pca.apply_rows(train);

    auto classifier = factory(round_seed);
    classifier->fit(reduced, train_labels);

    RoundResult round;
    round.split_id = split.id;
    round.pca_dims = pca.output_dim();
    round.classifier = classifier->name();
    if (const auto* lda = dynamic_cast<const LdaClassifier*>(classifier.get())) {
        round.lambda = lda->model().lambda;
    }
    std::size_t correct = 0;
    for (auto s : split.test) {
        const int target = table.samples[s].label;
        const int predicted =
            classifier->predict(pca.apply(table.features.row(static_cast<Eigen::Index>(s)).transpose()));
        correct += predicted == target;
        ++confusion[static_cast<std::size_t>(target)][static_cast<std::size_t>(predicted)];
    }
    round.test_count = split.test.size();
    round.accuracy = static_cast<double>(correct) / static_cast<double>(split.test.size());
    return round;
}

}  // namespace

ExperimentResult run_experiment(const FeatureTable& table, const std::vector<Split>& splits,
                                const EvalConfig& eval, ClassifierFactory factory) {
    if (splits.empty()) throw ContractViolation("run_experiment: no splits");
    if (static_cast<std::size_t>(table.features.rows()) != table.samples.size()) {
        throw DataError("feature rows do not match samples");
    }
    if (!factory) {
        factory = [&eval](std::uint64_t seed) {
            return std::make_unique<LdaClassifier>(eval.lambda_grid, seed, eval.cv_folds);
        };
    }

    ExperimentResult result;
    result.labels = table.labels;
    const std::size_t classes = table.labels.size();
    result.confusion.assign(classes, std::vector<std::int64_t>(classes, 0));
    result.config = {{"descriptor", to_json(table.config)}, {"evaluation", eval_json(eval)}};

    for (std::size_t r = 0; r < splits.size(); ++r) {
        const Split& split = splits[r];
        const std::uint64_t round_seed = eval.seed * 1000003ULL + r;
        auto confusion = result.confusion;
        try {
            result.rounds.push_back(run_round(table, split, eval, factory, round_seed, confusion));
        } catch (const NumericalError& e) {
            rethrow_with_split(split.id, e);
        } catch (const DataError& e) {
            rethrow_with_split(split.id, e);
        } catch (const ContractViolation& e) {
            rethrow_with_split(split.id, e);
        } catch (const DomainError& e) {
            rethrow_with_split(split.id, e);
        }
        result.confusion = std::move(confusion);
    }

    const auto acc = result.accuracies();
    const double n = static_cast<double>(acc.size());
    result.mean = std::accumulate(acc.begin(), acc.end(), 0.0) / n;
    double ss = 0.0;
    for (double a : acc) ss += (a - result.mean) * (a - result.mean);
    result.std = acc.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return result;
}

ExperimentResult run_experiment(const DatasetIndex& index, const std::vector<Split>& splits,
                                const DescriptorConfig& config, const EvalConfig& eval,
                                const ExtractOptions& options) {
    return run_experiment(extract_dataset(index, config, options), splits, eval);
}

json to_json(const ExperimentResult& result) {
    json rounds = json::array();
    for (const auto& r : result.rounds) {
        rounds.push_back({{"split", r.split_id},
                          {"accuracy", r.accuracy},
                          {"pca_dims", r.pca_dims},
                          {"classifier", r.classifier},
                          {"lambda", r.lambda},
                          {"test_count", r.test_count}});
    }
    return {{"accuracies", result.accuracies()},
            {"mean", result.mean},
            {"std", result.std},
            {"rounds", rounds},
            {"labels", result.labels},
            {"confusion", result.confusion},
            {"config", result.config}};
}

ExperimentResult experiment_from_json(const json& j) {
    try {
        ExperimentResult result;
        for (const auto& r : j.at("rounds")) {
            RoundResult round;
            round.split_id = r.at("split").get<std::string>();
            round.accuracy = r.at("accuracy").get<double>();
            round.pca_dims = r.at("pca_dims").get<std::size_t>();
            round.classifier = r.at("classifier").get<std::string>();
            round.lambda = r.at("lambda").get<double>();
            round.test_count = r.at("test_count").get<std::size_t>();
            result.rounds.push_back(std::move(round));
        }
        result.mean = j.at("mean").get<double>();
        result.std = j.at("std").get<double>();
        result.labels = j.at("labels").get<std::vector<std::string>>();
        result.confusion = j.at("confusion").get<std::vector<std::vector<std::int64_t>>>();
        result.config = j.at("config");
        return result;
    } catch (const json::exception& e) {
        throw DataError(std::string("bad results file: ") + e.what());
    }
}

std::string confusion_csv(const ExperimentResult& result) {
    std::ostringstream os;
    for (std::size_t k = 0; k < result.labels.size(); ++k) {
        if (k) os << ',';
        os << result.labels[k];
    }
    os << '\n';
    for (const auto& row : result.confusion) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) os << ',';
            os << row[k];
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace ctx
