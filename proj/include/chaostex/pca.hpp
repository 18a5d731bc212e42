#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace ctx {

/// Requested output dimension: a fixed count, or "auto" (99% explained
/// variance, capped by samples minus classes).
struct PcaDims {
    std::optional<std::size_t> count;  // nullopt == auto

    static PcaDims automatic() { return {}; }
    static PcaDims fixed(std::size_t n) { return {n}; }
    /// "auto" or a positive integer.
    static PcaDims parse(std::string_view text);
    std::string to_string() const;
};

struct PcaModel {
    Eigen::VectorXd mean;                 // feature-length
    Eigen::MatrixXd components;           // feature-length x d, orthonormal columns
    Eigen::VectorXd explained_variance;   // d, descending
    double total_variance = 0.0;

    std::size_t input_dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
    std::size_t output_dim() const noexcept { return static_cast<std::size_t>(components.cols()); }

    /// Centers and projects one vector. Throws ContractViolation on a length mismatch.
    Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    /// Row-wise apply() for a samples x features matrix.
    Eigen::MatrixXd apply_rows(const Eigen::Ref<const Eigen::MatrixXd>& samples) const;
    /// Maps projected coordinates back to feature space.
    Eigen::VectorXd inverse(const Eigen::Ref<const Eigen::VectorXd>& y) const;
};

/// Fits on the rows of `samples`. d = min(requested, samples-1, features);
/// for automatic dims the smallest d reaching 99% of the variance, further
/// capped at samples - class_count when class_count > 0.
/// Component signs are fixed so each column's largest-magnitude entry is positive.
/// Throws ContractViolation with fewer than 2 samples.
PcaModel fit_pca(const Eigen::Ref<const Eigen::MatrixXd>& samples, const PcaDims& dims,
                 std::size_t class_count = 0);

}  // namespace ctx
