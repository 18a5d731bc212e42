#include "chaostex/lbp.hpp"

#include "chaostex/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ctx {

void LbpParams::validate() const {
    if (points < 4 || points > 64) {
        throw ContractViolation("LBP: points must be in [4,64], got " + std::to_string(points));
    }
    if (!(radius >= 1.0) || !std::isfinite(radius)) {
        throw ContractViolation("LBP: radius must be >= 1, got " + std::to_string(radius));
    }
}

int uniformity(std::span<const double> neighborhood, double center) {
    const std::size_t count = neighborhood.size();
    int transitions = 0;
    bool prev = neighborhood[count - 1] - center >= 0.0;
    for (double g : neighborhood) {
        const bool bit = g - center >= 0.0;
        transitions += bit != prev;
        prev = bit;
    }
    return transitions;
}

int code_pixel(std::span<const double> neighborhood, double center) {
    const auto count = static_cast<int>(neighborhood.size());
    if (count < 4) {
        throw ContractViolation("code_pixel: need at least 4 neighbours, got " +
                                std::to_string(count));
    }
    if (uniformity(neighborhood, center) > 2) return count + 1;
    int ones = 0;
    for (double g : neighborhood) ones += g - center >= 0.0;
    return ones;
}

int code_pixel(std::span<const double> neighborhood, double center, const LbpParams& params) {
    if (neighborhood.size() != static_cast<std::size_t>(params.points)) {
        throw ContractViolation("code_pixel: expected " + std::to_string(params.points) +
                                " neighbours, got " + std::to_string(neighborhood.size()));
    }
    return code_pixel(neighborhood, center);
}

namespace {

constexpr double kGridSnap = 1e-9;

// Bilinear sampling recipe for one neighbour, relative to the centre pixel.
struct Sample {
    long dy = 0;
    long dx = 0;
    double fy = 0.0;
    double fx = 0.0;
    bool on_grid = false;
};

std::vector<Sample> sampling_pattern(const LbpParams& params) {
    using std::numbers::pi;
    std::vector<Sample> pattern(static_cast<std::size_t>(params.points));
    for (int p = 0; p < params.points; ++p) {
        const double angle = 2.0 * pi * p / params.points;
        double y = -params.radius * std::sin(angle);
        double x = params.radius * std::cos(angle);
        if (std::abs(y - std::round(y)) < kGridSnap) y = std::round(y);
        if (std::abs(x - std::round(x)) < kGridSnap) x = std::round(x);
        Sample& s = pattern[static_cast<std::size_t>(p)];
        s.dy = static_cast<long>(std::floor(y));
        s.dx = static_cast<long>(std::floor(x));
        s.fy = y - static_cast<double>(s.dy);
        s.fx = x - static_cast<double>(s.dx);
        s.on_grid = s.fy == 0.0 && s.fx == 0.0;
    }
    return pattern;
}

template <typename Visit>
void for_each_code(const GrayImage& image, const LbpParams& params, Visit&& visit) {
    params.validate();
    const auto margin = static_cast<std::size_t>(std::ceil(params.radius));
    if (image.height() < 2 * margin + 1 || image.width() < 2 * margin + 1) {
        throw ContractViolation("image too small for radius " + std::to_string(params.radius) +
                                ": " + std::to_string(image.height()) + "x" +
                                std::to_string(image.width()));
    }
    const auto pattern = sampling_pattern(params);
    const long h = static_cast<long>(image.height());
    const long w = static_cast<long>(image.width());
    const auto at = [&](long r, long c) {
        // Indices beyond the border only occur with zero weight.
        r = std::min(r, h - 1);
        c = std::min(c, w - 1);
        return image(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    };

    std::vector<double> neighbours(pattern.size());
    const long lo = static_cast<long>(margin);
    for (long r = lo; r < h - lo; ++r) {
        for (long c = lo; c < w - lo; ++c) {
            for (std::size_t p = 0; p < pattern.size(); ++p) {
                const Sample& s = pattern[p];
                const long y = r + s.dy;
                const long x = c + s.dx;
                if (s.on_grid) {
                    neighbours[p] = at(y, x);
                    continue;
                }
                // Nested lerps reproduce equal corner values exactly.
                const double top = at(y, x) + s.fx * (at(y, x + 1) - at(y, x));
                const double bottom = at(y + 1, x) + s.fx * (at(y + 1, x + 1) - at(y + 1, x));
                neighbours[p] = top + s.fy * (bottom - top);
            }
            visit(code_pixel(neighbours, image(static_cast<std::size_t>(r),
                                               static_cast<std::size_t>(c))));
        }
    }
}

}  // namespace

LbpHistogram lbp_histogram(const GrayImage& image, const LbpParams& params) {
    std::vector<std::size_t> counts(params.bins(), 0);
    std::size_t total = 0;
    for_each_code(image, params, [&](int code) {
        ++counts[static_cast<std::size_t>(code)];
        ++total;
    });
    LbpHistogram hist{std::vector<double>(counts.size(), 0.0), params};
    for (std::size_t b = 0; b < counts.size(); ++b) {
        hist.bins[b] = static_cast<double>(counts[b]) / static_cast<double>(total);
    }
    return hist;
}

std::vector<int> lbp_codes(const GrayImage& image, const LbpParams& params) {
    std::vector<int> codes;
    for_each_code(image, params, [&](int code) { codes.push_back(code); });
    return codes;
}

}  // namespace ctx
