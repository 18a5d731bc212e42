#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ctx {

/// mn x 3 matrix of (row, col, intensity) coordinates in [0,1], row-major,
/// together with the m x n dimensions of the image it came from.
class PointCloud {
public:
    static constexpr std::size_t kColumns = 3;

    PointCloud() = default;

    /// `values` holds source_height * source_width rows of `columns` entries.
    /// Throws ContractViolation unless columns == 3, the size matches and every
    /// entry is a finite value in [0,1].
    PointCloud(std::size_t source_height, std::size_t source_width,
               std::vector<double> values, std::size_t columns = kColumns);

    std::size_t rows() const noexcept { return values_.size() / kColumns; }
    std::size_t source_height() const noexcept { return height_; }
    std::size_t source_width() const noexcept { return width_; }

    /// 0-based point index and coordinate d in {0,1,2}.
    double operator()(std::size_t p, std::size_t d) const noexcept {
        return values_[p * kColumns + d];
    }
    std::span<const double> values() const noexcept { return values_; }

    friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::vector<double> values_;
};

}  // namespace ctx
