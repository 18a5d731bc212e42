#include "chaostex/lda.hpp"

#include "chaostex/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <iostream>
#include <map>
#include <random>

namespace ctx {

namespace {

constexpr double kSingularRatio = 1e-12;

std::vector<int> sorted_labels(std::span<const int> labels) {
    std::vector<int> out(labels.begin(), labels.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::vector<double> default_lambda_grid() { return {1e-6, 1e-4, 1e-2, 1.0}; }

Eigen::VectorXd LdaModel::project(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != projection.rows()) {
        throw ContractViolation("LDA: vector length " + std::to_string(x.size()) +
                                " != model input " + std::to_string(projection.rows()));
    }
    return projection.transpose() * x;
}

LdaModel fit_lda(const Eigen::Ref<const Eigen::MatrixXd>& features, std::span<const int> labels,
                 double lambda) {
    if (static_cast<std::size_t>(features.rows()) != labels.size()) {
        throw ContractViolation("LDA: " + std::to_string(features.rows()) + " rows but " +
                                std::to_string(labels.size()) + " labels");
    }
    if (!(lambda >= 0.0)) throw ContractViolation("LDA: lambda must be >= 0");

    LdaModel model;
    model.lambda = lambda;
    model.class_labels = sorted_labels(labels);
    const auto classes = static_cast<Eigen::Index>(model.class_labels.size());
    if (classes < 2) throw ContractViolation("LDA: need at least 2 classes");
    const Eigen::Index dim = features.cols();

    Eigen::MatrixXd means = Eigen::MatrixXd::Zero(classes, dim);
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(classes), 0);
    std::vector<Eigen::Index> class_of(labels.size());
    for (std::size_t s = 0; s < labels.size(); ++s) {
        const auto c = std::lower_bound(model.class_labels.begin(), model.class_labels.end(),
                                        labels[s]) - model.class_labels.begin();
        class_of[s] = c;
        means.row(c) += features.row(static_cast<Eigen::Index>(s));
        ++counts[static_cast<std::size_t>(c)];
    }
    for (Eigen::Index c = 0; c < classes; ++c) {
        if (counts[static_cast<std::size_t>(c)] < 2) {
            throw ContractViolation("LDA: class " +
                                    std::to_string(model.class_labels[static_cast<std::size_t>(c)]) +
                                    " has fewer than 2 samples");
        }
        means.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    }
    const Eigen::RowVectorXd overall = features.colwise().mean();

    Eigen::MatrixXd within = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd centered(features.rows(), dim);
    for (std::size_t s = 0; s < labels.size(); ++s) {
        const auto r = static_cast<Eigen::Index>(s);
        centered.row(r) = features.row(r) - means.row(class_of[s]);
    }
    within.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
    within = within.selfadjointView<Eigen::Lower>();
    within.diagonal().array() += lambda;

    Eigen::MatrixXd between = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index c = 0; c < classes; ++c) {
        const Eigen::VectorXd d = (means.row(c) - overall).transpose();
        between.noalias() += static_cast<double>(counts[static_cast<std::size_t>(c)]) * d * d.transpose();
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> within_eig(within, Eigen::EigenvaluesOnly);
    const double wmax = within_eig.eigenvalues().cwiseAbs().maxCoeff();
    if (!(within_eig.eigenvalues().minCoeff() > kSingularRatio * std::max(wmax, 1e-300))) {
        throw NumericalError("LDA: within-class scatter is singular; use lambda > 0");
    }

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        between, within, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("LDA: generalized eigenproblem failed");
    }
    const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
    const double top = values(values.size() - 1);
    const double bscale = between.diagonal().sum() / within.diagonal().sum();
    if (!(top > kSingularRatio * std::max(bscale, 1e-300)) || !(top > 0.0)) {
        throw NumericalError("LDA: between-class scatter has rank 0 (class means coincide)");
    }

    const Eigen::Index keep = std::min<Eigen::Index>(classes - 1, dim);
    model.projection = solver.eigenvectors().rightCols(keep).rowwise().reverse();
    for (Eigen::Index c = 0; c < keep; ++c) {
        Eigen::Index arg = 0;
        model.projection.col(c).cwiseAbs().maxCoeff(&arg);
        if (model.projection(arg, c) < 0.0) model.projection.col(c) *= -1.0;
    }
    model.centroids = means * model.projection;
    return model;
}

int predict(const LdaModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    const Eigen::VectorXd y = model.project(x);
    Eigen::Index best = 0;
    double best_dist = (model.centroids.row(0).transpose() - y).squaredNorm();
    for (Eigen::Index c = 1; c < model.centroids.rows(); ++c) {
        const double d = (model.centroids.row(c).transpose() - y).squaredNorm();
        if (d < best_dist) {
            best = c;
            best_dist = d;
        }
    }
    return model.class_labels[static_cast<std::size_t>(best)];
}

std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed) {
    // Classes in order of first appearance: fold assignment is independent of
    // the label values themselves.
    std::map<int, std::size_t> slot;
    std::vector<std::vector<std::size_t>> by_class;
    for (std::size_t s = 0; s < labels.size(); ++s) {
        auto [it, inserted] = slot.try_emplace(labels[s], by_class.size());
        if (inserted) by_class.emplace_back();
        by_class[it->second].push_back(s);
    }
    std::mt19937_64 rng(seed);
    std::vector<int> fold(labels.size(), 0);
    for (auto& members : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t r = 0; r < members.size(); ++r) {
            fold[members[r]] = static_cast<int>(r % static_cast<std::size_t>(folds));
        }
    }
    return fold;
}

CrossValidation cross_validate_lambda(const Eigen::Ref<const Eigen::MatrixXd>& features,
                                      std::span<const int> labels,
                                      std::span<const double> grid, std::uint64_t seed,
                                      int folds) {
    if (grid.empty()) throw ContractViolation("cross-validation: empty lambda grid");
    if (folds < 2) throw ContractViolation("cross-validation: need at least 2 folds");

    CrossValidation cv;
    if (grid.size() == 1) {
        cv.lambda = grid[0];
        cv.accuracy = {-1.0};
        return cv;
    }

    std::map<int, int> sizes;
    for (int l : labels) ++sizes[l];
    int smallest = folds;
    for (const auto& [label, n] : sizes) smallest = std::min(smallest, n);
    if (smallest < folds) {
        std::cerr << "warning: smallest class has " << smallest << " samples; using "
                  << smallest << " folds instead of " << folds << '\n';
        folds = smallest;
    }
    cv.folds = folds;
    if (folds < 2) {
        // Not enough data to hold anything out: prefer the most regularized model.
        cv.lambda = *std::max_element(grid.begin(), grid.end());
        cv.accuracy.assign(grid.size(), -1.0);
        return cv;
    }

    const auto fold_of = stratified_folds(labels, folds, seed);
    cv.accuracy.assign(grid.size(), 0.0);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        std::size_t correct = 0;
        bool any_fit = false;
        for (int f = 0; f < folds; ++f) {
            std::vector<Eigen::Index> train, test;
            for (std::size_t s = 0; s < labels.size(); ++s) {
                (fold_of[s] == f ? test : train).push_back(static_cast<Eigen::Index>(s));
            }
            std::vector<int> train_labels;
            for (auto s : train) train_labels.push_back(labels[static_cast<std::size_t>(s)]);
            try {
                const LdaModel model = fit_lda(features(train, Eigen::all),
                                               train_labels, grid[g]);
                any_fit = true;
                for (auto s : test) {
                    correct += predict(model, features.row(s).transpose()) ==
                               labels[static_cast<std::size_t>(s)];
                }
            } catch (const NumericalError&) {
                // an unfittable fold scores zero
            } catch (const ContractViolation&) {
            }
        }
        cv.accuracy[g] = any_fit ? static_cast<double>(correct) / static_cast<double>(labels.size())
                                 : -1.0;
    }

    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g) {
        const bool better = cv.accuracy[g] > cv.accuracy[best] ||
                            (cv.accuracy[g] == cv.accuracy[best] && grid[g] > grid[best]);
        if (better) best = g;
    }
    cv.lambda = grid[best];
    return cv;
}

void LdaClassifier::fit(const Eigen::Ref<const Eigen::MatrixXd>& features,
                        std::span<const int> labels) {
    const auto cv = cross_validate_lambda(features, labels, grid_, seed_, folds_);
    model_ = fit_lda(features, labels, cv.lambda);
}

int LdaClassifier::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return ctx::predict(model_, x);
}

}  // namespace ctx
