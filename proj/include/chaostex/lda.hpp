#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ctx {

/// Fisher discriminant projection with nearest-centroid decision.
struct LdaModel {
    Eigen::MatrixXd projection;    // features x directions, directions <= classes-1
    Eigen::MatrixXd centroids;     // classes x directions, projected class means
    std::vector<int> class_labels; // ascending; row r of centroids belongs to class_labels[r]
    double lambda = 0.0;

    std::size_t input_dim() const noexcept { return static_cast<std::size_t>(projection.rows()); }
    std::size_t directions() const noexcept { return static_cast<std::size_t>(projection.cols()); }

    Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

/// Rows of `features` are samples. Solves S_b v = l (S_w + lambda I) v and
/// keeps the top classes-1 directions.
///
/// Throws ContractViolation for < 2 classes, a class with < 2 samples or a
/// label/row count mismatch; NumericalError when S_w + lambda I is singular
/// (pass lambda > 0) or the class means coincide.
LdaModel fit_lda(const Eigen::Ref<const Eigen::MatrixXd>& features, std::span<const int> labels,
                 double lambda);

/// Label of the nearest projected centroid; ties go to the smallest label.
/// Throws ContractViolation on a length mismatch.
int predict(const LdaModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

struct CrossValidation {
    double lambda = 0.0;
    std::vector<double> accuracy;  // per grid entry; -1 when every fold failed to fit
    int folds = 0;
};

/// Stratified k-fold accuracy for each lambda in `grid`; the best lambda wins,
/// ties going to the larger one. Folds shrink to the smallest class size (with
/// a warning on stderr) when a class has fewer than `folds` samples.
CrossValidation cross_validate_lambda(const Eigen::Ref<const Eigen::MatrixXd>& features,
                                      std::span<const int> labels,
                                      std::span<const double> grid, std::uint64_t seed,
                                      int folds = 5);

/// Fold id for every sample (stratified, seeded).
std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed);

/// {1e-6, 1e-4, 1e-2, 1}
std::vector<double> default_lambda_grid();

/// Pluggable classifier stage of the experiment pipeline.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual std::string name() const = 0;
    virtual void fit(const Eigen::Ref<const Eigen::MatrixXd>& features,
                     std::span<const int> labels) = 0;
    virtual int predict(const Eigen::Ref<const Eigen::VectorXd>& x) const = 0;
};

/// LDA with lambda chosen by cross-validation on the training data.
class LdaClassifier final : public Classifier {
public:
    LdaClassifier(std::vector<double> grid, std::uint64_t seed, int folds = 5)
        : grid_(std::move(grid)), seed_(seed), folds_(folds) {}

    std::string name() const override { return "lda"; }
    void fit(const Eigen::Ref<const Eigen::MatrixXd>& features,
             std::span<const int> labels) override;
    int predict(const Eigen::Ref<const Eigen::VectorXd>& x) const override;

    const LdaModel& model() const noexcept { return model_; }

private:
    std::vector<double> grid_;
    std::uint64_t seed_;
    int folds_;
    LdaModel model_;
};

}  // namespace ctx
