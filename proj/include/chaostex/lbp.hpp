#pragma once

#include "chaostex/image.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ctx {

/// Circular neighbourhood: `points` samples on a circle of `radius` pixels.
struct LbpParams {
    int points = 8;
    double radius = 1.0;

    /// Requires points >= 4 (and <= 64) and radius >= 1.
    void validate() const;
    std::size_t bins() const noexcept { return static_cast<std::size_t>(points) + 2; }

    friend bool operator==(const LbpParams&, const LbpParams&) = default;
};

/// Normalized riu2 histogram: bins 0..P hold uniform patterns by their number
/// of ones, bin P+1 collects every non-uniform pattern.
struct LbpHistogram {
    std::vector<double> bins;
    LbpParams params;
};

/// Circular 0/1 transitions of the thresholded neighbourhood.
int uniformity(std::span<const double> neighborhood, double center);

/// riu2 code of one pixel: number of neighbours with g_p - g_c >= 0 when the
/// pattern has at most two transitions, P+1 otherwise.
/// Throws ContractViolation when the neighbourhood has fewer than 4 values.
int code_pixel(std::span<const double> neighborhood, double center);

/// Same as above with the expected neighbourhood size checked.
int code_pixel(std::span<const double> neighborhood, double center, const LbpParams& params);

/// Histogram over every pixel whose whole circular neighbourhood lies inside
/// the image. Off-grid samples are bilinearly interpolated.
/// Throws ContractViolation("image too small for radius ...") when a side is
/// shorter than 2*ceil(R)+1.
LbpHistogram lbp_histogram(const GrayImage& image, const LbpParams& params);

/// Per-pixel riu2 codes of the interior pixels, row-major over the interior.
std::vector<int> lbp_codes(const GrayImage& image, const LbpParams& params);

}  // namespace ctx
