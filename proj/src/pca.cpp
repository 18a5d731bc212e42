#include "chaostex/pca.hpp"

#include "chaostex/errors.hpp"

#include <algorithm>
#include <charconv>

namespace ctx {

PcaDims PcaDims::parse(std::string_view text) {
    if (text == "auto") return automatic();
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc{} || ptr != text.data() + text.size() || n == 0) {
        throw ContractViolation("PCA dims must be 'auto' or a positive integer, got '" +
                                std::string(text) + "'");
    }
    return fixed(n);
}

std::string PcaDims::to_string() const {
    return count ? std::to_string(*count) : std::string("auto");
}

Eigen::VectorXd PcaModel::apply(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != mean.size()) {
        throw ContractViolation("PCA: vector length " + std::to_string(x.size()) +
                                " != model input " + std::to_string(mean.size()));
    }
    return components.transpose() * (x - mean);
}

Eigen::MatrixXd PcaModel::apply_rows(const Eigen::Ref<const Eigen::MatrixXd>& samples) const {
    if (samples.cols() != mean.size()) {
        throw ContractViolation("PCA: feature length " + std::to_string(samples.cols()) +
                                " != model input " + std::to_string(mean.size()));
    }
    return (samples.rowwise() - mean.transpose()) * components;
}

Eigen::VectorXd PcaModel::inverse(const Eigen::Ref<const Eigen::VectorXd>& y) const {
    return mean + components * y;
}

PcaModel fit_pca(const Eigen::Ref<const Eigen::MatrixXd>& samples, const PcaDims& dims,
                 std::size_t class_count) {
    const auto n = static_cast<std::size_t>(samples.rows());
    const auto features = static_cast<std::size_t>(samples.cols());
    if (n < 2) throw ContractViolation("PCA: need at least 2 samples, got " + std::to_string(n));
    if (features == 0) throw ContractViolation("PCA: empty feature vectors");

    PcaModel model;
    model.mean = samples.colwise().mean().transpose();
    const Eigen::MatrixXd centered = samples.rowwise() - model.mean.transpose();

    // Thin SVD of the centred data: right singular vectors are the covariance
    // eigenvectors, squared singular values / (n-1) its eigenvalues.
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const Eigen::VectorXd variance = svd.singularValues().array().square() /
                                     static_cast<double>(n - 1);
    model.total_variance = variance.sum();

    std::size_t d = std::min({n - 1, features, static_cast<std::size_t>(variance.size())});
    if (dims.count) {
        d = std::min(d, *dims.count);
    } else {
        if (model.total_variance > 0.0) {
            double acc = 0.0;
            std::size_t keep = 0;
            while (keep < d && acc < 0.99 * model.total_variance) acc += variance(keep++);
            d = std::max<std::size_t>(1, keep);
        } else {
            d = 1;
        }
        if (class_count > 0 && n > class_count) d = std::min(d, n - class_count);
    }

    model.components = svd.matrixV().leftCols(static_cast<Eigen::Index>(d));
    model.explained_variance = variance.head(static_cast<Eigen::Index>(d));
    for (Eigen::Index c = 0; c < model.components.cols(); ++c) {
        Eigen::Index arg = 0;
        model.components.col(c).cwiseAbs().maxCoeff(&arg);
        if (model.components(arg, c) < 0.0) model.components.col(c) *= -1.0;
    }
    return model;
}

}  // namespace ctx
