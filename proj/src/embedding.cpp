#include "chaostex/embedding.hpp"

#include "chaostex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>

namespace ctx {

PointCloud::PointCloud(std::size_t source_height, std::size_t source_width,
                       std::vector<double> values, std::size_t columns)
    : height_(source_height), width_(source_width), values_(std::move(values)) {
    if (columns != kColumns) {
        throw ContractViolation("PointCloud: expected 3 columns, got " + std::to_string(columns));
    }
    if (height_ == 0 || width_ == 0) {
        throw ContractViolation("PointCloud: empty source image");
    }
    if (values_.size() != height_ * width_ * kColumns) {
        throw ContractViolation("PointCloud: expected " + std::to_string(height_ * width_) +
                                " rows, got " + std::to_string(values_.size() / kColumns));
    }
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw ContractViolation("PointCloud: entry " + std::to_string(v) + " outside [0,1]");
        }
    }
}

PointCloud embed(const GrayImage& image) {
    if (image.empty()) throw ContractViolation("embed: empty image");
    const std::size_t m = image.height();
    const std::size_t n = image.width();
    std::vector<double> values;
    values.reserve(m * n * PointCloud::kColumns);
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            values.push_back(static_cast<double>(i) / static_cast<double>(m));
            values.push_back(static_cast<double>(j) / static_cast<double>(n));
            values.push_back(image(i - 1, j - 1));
        }
    }
    return PointCloud(m, n, std::move(values));
}

namespace {

// Coordinates are compared after rounding to 12 decimal digits.
std::int64_t unique_key(double v) { return std::llround(v * 1e12); }

// 0-based target cell along one axis of `extent` cells, for every point.
std::vector<std::size_t> rank_cells(const PointCloud& cloud, std::size_t column,
                                    std::size_t extent) {
    const std::size_t count = cloud.rows();
    std::vector<std::int64_t> keys(count);
    for (std::size_t p = 0; p < count; ++p) keys[p] = unique_key(cloud(p, column));

    std::vector<std::int64_t> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const std::size_t unique = sorted.size();

    std::vector<std::size_t> cells(count);
    for (std::size_t p = 0; p < count; ++p) {
        const auto rank = static_cast<std::size_t>(
                              std::lower_bound(sorted.begin(), sorted.end(), keys[p]) -
                              sorted.begin()) + 1;
        // ceil(rank * extent / unique), 1-based
        cells[p] = (rank * extent + unique - 1) / unique - 1;
    }
    return cells;
}

}  // namespace

GrayImage reconstruct(const PointCloud& cloud) {
    const std::size_t m = cloud.source_height();
    const std::size_t n = cloud.source_width();
    const std::size_t count = cloud.rows();
    if (count == 0) throw ContractViolation("reconstruct: empty cloud");

    const auto rows = rank_cells(cloud, 0, m);
    const auto cols = rank_cells(cloud, 1, n);

    // Sorting by (cell, value) fixes the summation order independently of the
    // order of the cloud's rows.
    std::vector<std::pair<std::size_t, double>> placed(count);
    for (std::size_t p = 0; p < count; ++p) {
        placed[p] = {rows[p] * n + cols[p], cloud(p, 2)};
    }
    std::sort(placed.begin(), placed.end());

    std::vector<double> pixels(m * n, 0.0);
    std::vector<bool> assigned(m * n, false);
    for (std::size_t a = 0; a < count;) {
        std::size_t b = a;
        double sum = 0.0;
        while (b < count && placed[b].first == placed[a].first) sum += placed[b++].second;
        pixels[placed[a].first] = std::clamp(sum / static_cast<double>(b - a), 0.0, 1.0);
        assigned[placed[a].first] = true;
        a = b;
    }

    if (!assigned[0]) {
        std::vector<double> intensities(count);
        for (std::size_t p = 0; p < count; ++p) intensities[p] = placed[p].second;
        std::sort(intensities.begin(), intensities.end());
        const double mean = std::accumulate(intensities.begin(), intensities.end(), 0.0) /
                            static_cast<double>(count);
        pixels[0] = std::clamp(mean, 0.0, 1.0);
    }
    for (std::size_t c = 1; c < m * n; ++c) {
        if (!assigned[c]) pixels[c] = pixels[c - 1];
    }
    return GrayImage(m, n, std::move(pixels));
}

GrayImage blend(const GrayImage& a, const GrayImage& b, double w) {
    if (a.height() != b.height() || a.width() != b.width()) {
        throw ContractViolation("blend: images differ in size");
    }
    if (!(w >= 0.0 && w <= 1.0)) {
        throw ContractViolation("blend: weight " + std::to_string(w) + " outside [0,1]");
    }
    std::vector<double> out(a.size());
    const auto pa = a.pixels();
    const auto pb = b.pixels();
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = std::clamp((1.0 - w) * pa[k] + w * pb[k], 0.0, 1.0);
    }
    return GrayImage(a.height(), a.width(), std::move(out));
}

}  // namespace ctx
