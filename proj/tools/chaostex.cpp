// chaostex: chaotic-map LBP texture descriptors from the command line.

#include "chaostex/dataset.hpp"
#include "chaostex/descriptor.hpp"
#include "chaostex/errors.hpp"
#include "chaostex/experiment.hpp"
#include "chaostex/feature_io.hpp"
#include "chaostex/logistic_analysis.hpp"
#include "chaostex/model_io.hpp"
#include "chaostex/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4 };

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ctx::ContractViolation("bad number '" + item + "' in list '" + text + "'");
        }
    }
    return out;
}

ctx::LbpParams parse_lbp(const std::string& text) {
    const auto v = parse_list(text);
    if (v.size() != 2) throw ctx::ContractViolation("--lbp expects P,R, got '" + text + "'");
    ctx::LbpParams p{static_cast<int>(v[0]), v[1]};
    p.validate();
    return p;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    os << text;
    if (!os) throw ctx::DataError("cannot write " + path.string());
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct ExtractArgs {
    std::string data, map = "logistic", out, cache;
    int n_iter = 10;
    double delta = 0.1;
    std::vector<std::string> lbp{"8,1"};
    std::string scales = "1.0";
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool no_cache = false, skip_bad = false, plain = false;
};

int run_extract(const ExtractArgs& a) {
    ctx::DescriptorConfig config;
    config.map = ctx::ChaoticMapSpec::parse(a.map);
    config.n_iter = a.n_iter;
    config.delta = a.delta;
    config.lbp.clear();
    for (const auto& l : a.lbp) config.lbp.push_back(parse_lbp(l));
    config.scales = parse_list(a.scales);
    config.validate();

    const auto index = ctx::ingest(a.data, a.skip_bad);
    for (const auto& bad : index.bad_files) std::cerr << "skipped unreadable " << bad << '\n';

    ctx::FeatureTable table;
    if (a.plain) {
        table = ctx::extract_plain_lbp(index, config.lbp, a.threads);
    } else {
        ctx::ExtractOptions options;
        options.threads = a.threads;
        if (!a.no_cache) {
            options.cache_dir = a.cache.empty() ? fs::path(a.data) / ".chaostex-cache" : fs::path(a.cache);
        }
        table = ctx::extract_dataset(index, config, options);
    }
    ctx::save_features(table, a.out);
    std::cerr << "extracted " << table.features.rows() << " x " << table.features.cols()
              << " features from " << table.labels.size() << " classes\n";
    return kOk;
}

struct EvaluateArgs {
    std::string features, protocol = "half", pca = "auto", out, lambdas;
    int rounds = 10, folds = 5;
    std::uint64_t seed = 1;
};

ctx::EvalConfig eval_config(const EvaluateArgs& a) {
    ctx::EvalConfig eval;
    eval.protocol = ctx::parse_protocol(a.protocol);
    eval.rounds = a.rounds;
    eval.seed = a.seed;
    eval.pca = ctx::PcaDims::parse(a.pca);
    eval.cv_folds = a.folds;
    if (!a.lambdas.empty()) eval.lambda_grid = parse_list(a.lambdas);
    return eval;
}

int run_evaluate(const EvaluateArgs& a) {
    const auto eval = eval_config(a);
    const auto table = ctx::load_features(a.features);
    const auto splits = ctx::make_splits(table.samples, eval.protocol, eval.rounds, eval.seed);
    const auto result = ctx::run_experiment(table, splits, eval);
    write_text(a.out, ctx::to_json(result).dump(2) + "\n");
    std::cerr << "accuracy " << result.mean * 100.0 << " +- " << result.std * 100.0 << " % over "
              << result.rounds.size() << " rounds\n";
    return kOk;
}

int run_confusion(const std::string& results, const std::string& out) {
    std::ifstream is(results);
    if (!is) throw ctx::DataError("cannot open " + results);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw ctx::DataError(results + ": " + e.what());
    }
    write_text(out, ctx::confusion_csv(ctx::experiment_from_json(j)));
    return kOk;
}

struct AnalyzeArgs {
    double mu = 3.8;
    int order = 4, steps = 5;
    std::string x0, out, branch = "minus", quasi_out;
};

int run_analyze(const AnalyzeArgs& a) {
    if (a.branch != "minus" && a.branch != "plus") {
        throw ctx::ContractViolation("--branch must be plus or minus");
    }
    const auto branch = a.branch == "plus" ? ctx::Branch::Plus : ctx::Branch::Minus;
    std::vector<double> starts;
    if (a.x0.empty()) {
        const double limit = std::min(1.0, (a.mu - 1.0) / 4.0);
        for (int k = 1; 0.05 * k <= limit + 1e-12; ++k) starts.push_back(std::min(0.05 * k, limit));
    } else {
        starts = parse_list(a.x0);
    }
    std::ostringstream os;
    os << "x0,n,direct,series,closed_approx,abs_error\n";
    for (double x0 : starts) {
        const auto report = ctx::series_orbit_check(x0, a.mu, a.steps, a.order, branch);
        for (const auto& row : report.steps) {
            os << fmt(x0) << ',' << row.n << ',' << fmt(row.direct) << ',' << fmt(row.series) << ','
               << fmt(row.closed_approx) << ',' << fmt(row.abs_error) << '\n';
        }
    }
    write_text(a.out, os.str());

    if (!a.quasi_out.empty()) {
        const auto q = ctx::quasi_linearity_probe(a.mu, 10, 0.0, (a.mu - 1.0) / 4.0, 1001, branch);
        std::ostringstream qs;
        qs << "k,r_squared\n";
        for (std::size_t k = 0; k < q.r_squared.size(); ++k) qs << k + 1 << ',' << fmt(q.r_squared[k]) << '\n';
        write_text(a.quasi_out, qs.str());
    }
    if (a.order == 4) {
        std::cerr << "4th-order truncation bound at x=1: " << ctx::truncation_bound(a.mu, 1.0, 4) << '\n';
    }
    return kOk;
}

int run_train(const EvaluateArgs& a) {
    const auto eval = eval_config(a);
    const auto table = ctx::load_features(a.features);
    std::vector<int> labels;
    for (const auto& s : table.samples) labels.push_back(s.label);
    ctx::TrainedModel model;
    model.pca = ctx::fit_pca(table.features, eval.pca, table.labels.size());
    const Eigen::MatrixXd reduced = model.pca.apply_rows(table.features);
    const auto cv = ctx::cross_validate_lambda(reduced, labels, eval.lambda_grid, eval.seed, eval.cv_folds);
    model.lda = ctx::fit_lda(reduced, labels, cv.lambda);
    model.labels = table.labels;
    ctx::save_model(model, a.out);
    std::cerr << "trained LDA on " << table.samples.size() << " samples, " << model.pca.output_dim()
              << " PCA dims, lambda " << cv.lambda << '\n';
    return kOk;
}

int run_predict(const std::string& model_path, const std::string& features, const std::string& out) {
    const auto model = ctx::load_model(model_path);
    const auto table = ctx::load_features(features);
    std::ostringstream os;
    os << "path,predicted\n";
    for (Eigen::Index r = 0; r < table.features.rows(); ++r) {
        const int label = ctx::predict(model.lda, model.pca.apply(table.features.row(r).transpose()));
        os << table.samples[static_cast<std::size_t>(r)].path << ','
           << model.labels.at(static_cast<std::size_t>(label)) << '\n';
    }
    write_text(out, os.str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chaotic-map LBP texture descriptors"};
    app.require_subcommand(1);

    ExtractArgs ex;
    auto* extract = app.add_subcommand("extract", "Extract descriptors for a directory-per-class dataset");
    extract->add_option("--data", ex.data, "Dataset root")->required()->check(CLI::ExistingDirectory);
    extract->add_option("--map", ex.map, "Chaotic map, e.g. logistic:mu=3.8 or circle:mu=0.2,nu=0.5");
    extract->add_option("--n-iter", ex.n_iter, "Map iterations")->check(CLI::PositiveNumber);
    extract->add_option("--delta", ex.delta, "Blend step (1/delta must be an integer)");
    extract->add_option("--lbp", ex.lbp, "LBP P,R pair (repeatable)");
    extract->add_option("--scales", ex.scales, "Comma-separated scale factors in (0,1]");
    extract->add_option("--out", ex.out, "Output features (.csv or binary)")->required();
    extract->add_option("--threads", ex.threads, "Worker threads");
    extract->add_option("--cache", ex.cache, "Feature cache directory (default DATA/.chaostex-cache)");
    extract->add_flag("--no-cache", ex.no_cache, "Disable the feature cache");
    extract->add_flag("--skip-bad", ex.skip_bad, "Skip unreadable images instead of aborting");
    extract->add_flag("--plain", ex.plain, "Plain LBP histograms of the original images (baseline)");

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "Train/test PCA + LDA over split protocols");
    evaluate->add_option("--features", ev.features, "Features file")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--protocol", ev.protocol, "grouped | half")
        ->check(CLI::IsMember({"grouped", "half"}));
    evaluate->add_option("--rounds", ev.rounds, "Rounds for the half protocol")->check(CLI::PositiveNumber);
    evaluate->add_option("--seed", ev.seed, "Random seed");
    evaluate->add_option("--pca", ev.pca, "PCA dimensions: auto or N");
    evaluate->add_option("--lambda-grid", ev.lambdas, "Comma-separated LDA regularization grid");
    evaluate->add_option("--folds", ev.folds, "Cross-validation folds")->check(CLI::Range(2, 100));
    evaluate->add_option("--out", ev.out, "results.json")->required();

    std::string results_path, cm_out;
    auto* confusion = app.add_subcommand("confusion", "Confusion matrix CSV from results.json");
    confusion->add_option("--results", results_path, "results.json")->required()->check(CLI::ExistingFile);
    confusion->add_option("--out", cm_out, "Output CSV")->required();

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze-logistic", "Power-series analysis of the logistic map");
    analyze->add_option("--mu", an.mu, "Logistic parameter (> 1)");
    analyze->add_option("--order", an.order, "Series order (even)");
    analyze->add_option("--steps", an.steps, "Iterations per starting point");
    analyze->add_option("--x0", an.x0, "Comma-separated starting points (default grid up to (mu-1)/4)");
    analyze->add_option("--branch", an.branch, "plus | minus");
    analyze->add_option("--quasi-linear", an.quasi_out, "Also write the quasi-linearity R^2 report");
    analyze->add_option("--out", an.out, "Output CSV")->required();

    std::string synth_out;
    ctx::SynthConfig synth_cfg;
    auto* synth = app.add_subcommand("synth", "Generate the synthetic grating dataset");
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--seed", synth_cfg.seed, "Random seed");
    synth->add_option("--per-class", synth_cfg.per_class, "Images per class");
    synth->add_option("--size", synth_cfg.size, "Image side in pixels");
    synth->add_option("--noise", synth_cfg.noise, "Uniform noise fraction");

    EvaluateArgs tr;
    auto* train = app.add_subcommand("train", "Fit PCA + LDA on a whole features file");
    train->add_option("--features", tr.features, "Features file")->required()->check(CLI::ExistingFile);
    train->add_option("--pca", tr.pca, "PCA dimensions: auto or N");
    train->add_option("--seed", tr.seed, "Cross-validation seed");
    train->add_option("--lambda-grid", tr.lambdas, "Comma-separated LDA regularization grid");
    train->add_option("--folds", tr.folds, "Cross-validation folds")->check(CLI::Range(2, 100));
    train->add_option("--out", tr.out, "Model path (.ctxm, sidecar .ctxm.json)")->required();

    std::string model_path, pred_features, pred_out;
    auto* predict = app.add_subcommand("predict", "Classify a features file with a trained model");
    predict->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
    predict->add_option("--features", pred_features, "Features file")->required()->check(CLI::ExistingFile);
    predict->add_option("--out", pred_out, "Predictions CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*extract) return run_extract(ex);
        if (*evaluate) return run_evaluate(ev);
        if (*confusion) return run_confusion(results_path, cm_out);
        if (*analyze) return run_analyze(an);
        if (*synth) {
            const auto n = ctx::write_synthetic_dataset(synth_out, synth_cfg);
            std::cerr << "wrote " << n << " images to " << synth_out << '\n';
            return kOk;
        }
        if (*train) return run_train(tr);
        if (*predict) return run_predict(model_path, pred_features, pred_out);
    } catch (const ctx::ContractViolation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ctx::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const ctx::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const ctx::DomainError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    }
    return kUsage;
}
