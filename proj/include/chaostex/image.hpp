#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ctx {

/// Grayscale image with intensities normalized to [0,1], stored row-major.
class GrayImage {
public:
    GrayImage() = default;

    /// Throws ContractViolation when the grid is empty, `pixels` has the wrong
    /// size, or an intensity is non-finite or outside [0,1].
    GrayImage(std::size_t height, std::size_t width, std::vector<double> pixels);

    /// Constant image.
    static GrayImage filled(std::size_t height, std::size_t width, double value);

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    bool empty() const noexcept { return pixels_.empty(); }

    double operator()(std::size_t row, std::size_t col) const noexcept {
        return pixels_[row * width_ + col];
    }
    std::span<const double> pixels() const noexcept { return pixels_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::vector<double> pixels_;
};

/// Area-averaging reduction by `scale` in (0,1]. Output size is
/// round(scale * dim), at least 1. scale == 1 returns a copy.
GrayImage downsample(const GrayImage& image, double scale);

/// Mirror left/right.
GrayImage flip_horizontal(const GrayImage& image);

}  // namespace ctx
