#include "chaostex/errors.hpp"
#include "chaostex/lda.hpp"

#include <gtest/gtest.h>

#include <random>

namespace ctx {
namespace {

struct Labeled {
    Eigen::MatrixXd x;
    std::vector<int> y;
};

// Gaussian blobs around `centers` (one row per class).
Labeled blobs(const Eigen::MatrixXd& centers, int per_class, double spread, std::uint64_t seed,
              std::vector<int> labels = {}) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, spread);
    const auto classes = centers.rows();
    if (labels.empty()) {
        for (Eigen::Index c = 0; c < classes; ++c) labels.push_back(static_cast<int>(c));
    }
    Labeled out{Eigen::MatrixXd(classes * per_class, centers.cols()), {}};
    Eigen::Index row = 0;
    for (int s = 0; s < per_class; ++s) {
        for (Eigen::Index c = 0; c < classes; ++c) {
            for (Eigen::Index d = 0; d < centers.cols(); ++d) out.x(row, d) = centers(c, d) + n(rng);
            out.y.push_back(labels[static_cast<std::size_t>(c)]);
            ++row;
        }
    }
    return out;
}

double accuracy(const LdaModel& m, const Labeled& data) {
    int ok = 0;
    for (Eigen::Index r = 0; r < data.x.rows(); ++r) {
        ok += predict(m, data.x.row(r).transpose()) == data.y[static_cast<std::size_t>(r)];
    }
    return static_cast<double>(ok) / static_cast<double>(data.x.rows());
}

TEST(Lda, SeparableOneDimensional) {
    Eigen::MatrixXd x(6, 1);
    x << 0.0, 0.1, 0.2, 1.0, 1.1, 1.2;
    const std::vector<int> y = {0, 0, 0, 1, 1, 1};
    const auto model = fit_lda(x, y, 0.0);
    ASSERT_EQ(model.directions(), 1u);
    EXPECT_EQ(predict(model, Eigen::VectorXd::Constant(1, 0.15)), 0);
    EXPECT_EQ(predict(model, Eigen::VectorXd::Constant(1, 1.05)), 1);
    EXPECT_EQ(predict(model, Eigen::VectorXd::Constant(1, 0.4)), 0);
    EXPECT_EQ(predict(model, Eigen::VectorXd::Constant(1, 0.8)), 1);
}

TEST(Lda, MidpointTieGoesToSmallestLabel) {
    Eigen::MatrixXd x(4, 1);
    x << -1.5, -0.5, 0.5, 1.5;
    const std::vector<int> y = {7, 7, 3, 3};
    const auto model = fit_lda(x, y, 0.0);
    EXPECT_EQ(model.class_labels, (std::vector<int>{3, 7}));
    EXPECT_EQ(predict(model, Eigen::VectorXd::Zero(1)), 3);
}

TEST(Lda, IdenticalMeansAreNumericalError) {
    Eigen::MatrixXd x(4, 2);
    x << 1, 0, -1, 0, 1, 0, -1, 0;
    const std::vector<int> y = {0, 0, 1, 1};
    EXPECT_THROW(fit_lda(x, y, 1e-3), NumericalError);
}

TEST(Lda, SingularWithinScatter) {
    Eigen::MatrixXd x(4, 2);
    x << 0, 1, 1, 1, 3, 2, 4, 2;  // second feature constant within class
    const std::vector<int> y = {0, 0, 1, 1};
    EXPECT_THROW(fit_lda(x, y, 0.0), NumericalError);
    EXPECT_NO_THROW(fit_lda(x, y, 1e-3));
}

TEST(Lda, ContractErrors) {
    Eigen::MatrixXd x(3, 1);
    x << 0, 1, 2;
    EXPECT_THROW(fit_lda(x, std::vector<int>{0, 0, 0}, 0.1), ContractViolation);
    EXPECT_THROW(fit_lda(x, std::vector<int>{0, 0, 1}, 0.1), ContractViolation);
    EXPECT_THROW(fit_lda(x, std::vector<int>{0, 1}, 0.1), ContractViolation);
    const auto model = fit_lda(x.replicate(2, 1), std::vector<int>{0, 0, 1, 1, 0, 1}, 0.1);
    EXPECT_THROW(predict(model, Eigen::VectorXd::Zero(2)), ContractViolation);
}

TEST(Lda, ThreeClassesInFiveDimensions) {
    Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(3, 5);
    centers(1, 0) = 4.0;
    centers(2, 3) = 4.0;
    const auto data = blobs(centers, 30, 0.5, 31);
    const auto model = fit_lda(data.x, data.y, 1e-6);
    EXPECT_EQ(model.directions(), 2u);
    EXPECT_EQ(model.centroids.rows(), 3);
    EXPECT_GE(accuracy(model, data), 0.99);
    for (Eigen::Index c = 0; c < 2; ++c) {
        Eigen::Index idx = 0;
        model.projection.col(c).cwiseAbs().maxCoeff(&idx);
        EXPECT_GT(model.projection(idx, c), 0.0);
    }
}

TEST(Lda, AffineInvarianceOfPredictions) {
    Eigen::MatrixXd centers(3, 3);
    centers << 0, 0, 0, 1.5, 0, 0, 0, 1.5, 0.5;
    const auto data = blobs(centers, 25, 0.6, 32);
    std::mt19937_64 rng(33);
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Matrix3d a;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) a(r, c) = n(rng);
    }
    a += 3.0 * Eigen::Matrix3d::Identity();
    const Eigen::RowVector3d b(5.0, -2.0, 0.5);
    const Eigen::MatrixXd moved = (data.x * a.transpose()).rowwise() + b;
    const auto m1 = fit_lda(data.x, data.y, 0.0);
    const auto m2 = fit_lda(moved, data.y, 0.0);
    for (Eigen::Index r = 0; r < data.x.rows(); ++r) {
        EXPECT_EQ(predict(m1, data.x.row(r).transpose()), predict(m2, moved.row(r).transpose()));
    }
}

TEST(CrossValidationTest, SingleLambdaSkipsSearch) {
    Eigen::MatrixXd centers(2, 2);
    centers << 0, 0, 3, 3;
    const auto data = blobs(centers, 10, 0.5, 34);
    const std::vector<double> grid = {0.25};
    const auto cv = cross_validate_lambda(data.x, data.y, grid, 1);
    EXPECT_EQ(cv.lambda, 0.25);
}

TEST(CrossValidationTest, SeparableDataPrefersLargestLambda) {
    Eigen::MatrixXd centers(2, 2);
    centers << 0, 0, 10, 10;
    const auto data = blobs(centers, 20, 0.5, 35);
    const auto grid = default_lambda_grid();
    const auto cv = cross_validate_lambda(data.x, data.y, grid, 2);
    EXPECT_EQ(cv.lambda, 1.0);
    for (double a : cv.accuracy) EXPECT_EQ(a, 1.0);
}

TEST(CrossValidationTest, PicksTheBestRecomputedScore) {
    Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(3, 6);
    centers(1, 0) = 1.0;
    centers(2, 1) = 1.0;
    const auto data = blobs(centers, 12, 1.0, 36);
    const std::vector<double> grid = {1e-6, 1e-2, 1.0, 100.0};
    const auto cv = cross_validate_lambda(data.x, data.y, grid, 3);
    ASSERT_EQ(cv.folds, 5);

    const auto folds = stratified_folds(data.y, 5, 3);
    std::vector<double> scores;
    for (double lambda : grid) {
        int ok = 0;
        for (int f = 0; f < 5; ++f) {
            std::vector<Eigen::Index> tr, te;
            for (std::size_t s = 0; s < data.y.size(); ++s) {
                (folds[s] == f ? te : tr).push_back(static_cast<Eigen::Index>(s));
            }
            std::vector<int> ytr;
            for (auto s : tr) ytr.push_back(data.y[static_cast<std::size_t>(s)]);
            const auto m = fit_lda(data.x(tr, Eigen::all), ytr, lambda);
            for (auto s : te) ok += predict(m, data.x.row(s).transpose()) == data.y[static_cast<std::size_t>(s)];
        }
        scores.push_back(ok / static_cast<double>(data.y.size()));
    }
    EXPECT_EQ(cv.accuracy, scores);
    double best = -1.0;
    double chosen = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (scores[g] >= best) {
            best = scores[g];
            chosen = grid[g];
        }
    }
    EXPECT_EQ(cv.lambda, chosen);
}

TEST(CrossValidationTest, FoldsShrinkToSmallestClass) {
    Eigen::MatrixXd centers(2, 2);
    centers << 0, 0, 3, 3;
    auto data = blobs(centers, 3, 0.5, 37);
    const auto cv = cross_validate_lambda(data.x, data.y, default_lambda_grid(), 4);
    EXPECT_EQ(cv.folds, 3);
}

TEST(StratifiedFolds, BalancedAndLabelValueIndependent) {
    std::vector<int> a, b;
    for (int s = 0; s < 40; ++s) {
        a.push_back(s % 4);
        b.push_back(100 - 7 * (s % 4));
    }
    const auto fa = stratified_folds(a, 5, 9);
    EXPECT_EQ(fa, stratified_folds(b, 5, 9));
    for (int c = 0; c < 4; ++c) {
        std::vector<int> per_fold(5, 0);
        for (std::size_t s = 0; s < a.size(); ++s) {
            if (a[s] == c) ++per_fold[static_cast<std::size_t>(fa[s])];
        }
        for (int n : per_fold) EXPECT_EQ(n, 2);
    }
}

TEST(LdaClassifierTest, FitsAndPredicts) {
    Eigen::MatrixXd centers(2, 3);
    centers << 0, 0, 0, 2, 2, 2;
    const auto data = blobs(centers, 15, 0.4, 38, {5, 9});
    LdaClassifier clf(default_lambda_grid(), 1);
    clf.fit(data.x, data.y);
    EXPECT_EQ(clf.name(), "lda");
    EXPECT_GE(accuracy(clf.model(), data), 0.95);
    EXPECT_EQ(clf.predict(data.x.row(0).transpose()), 5);
}

}  // namespace
}  // namespace ctx
