#include "chaostex/image.hpp"

#include "chaostex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ctx {

GrayImage::GrayImage(std::size_t height, std::size_t width, std::vector<double> pixels)
    : height_(height), width_(width), pixels_(std::move(pixels)) {
    if (height_ == 0 || width_ == 0) {
        throw ContractViolation("GrayImage: empty image");
    }
    if (pixels_.size() != height_ * width_) {
        throw ContractViolation("GrayImage: expected " + std::to_string(height_ * width_) +
                                " pixels, got " + std::to_string(pixels_.size()));
    }
    for (double v : pixels_) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw ContractViolation("GrayImage: intensity " + std::to_string(v) +
                                    " outside [0,1]");
        }
    }
}

GrayImage GrayImage::filled(std::size_t height, std::size_t width, double value) {
    return GrayImage(height, width, std::vector<double>(height * width, value));
}

namespace {

struct Tap {
    std::size_t index;
    double weight;
};

// Source taps for each output sample of a 1-D box reduction from `in` to `out`.
std::vector<std::vector<Tap>> area_taps(std::size_t in, std::size_t out) {
    std::vector<std::vector<Tap>> taps(out);
    const double ratio = static_cast<double>(in) / static_cast<double>(out);
    for (std::size_t o = 0; o < out; ++o) {
        const double lo = static_cast<double>(o) * ratio;
        const double hi = static_cast<double>(o + 1) * ratio;
        auto first = static_cast<std::size_t>(std::floor(lo));
        auto last = std::min(in, static_cast<std::size_t>(std::ceil(hi)));
        for (std::size_t s = first; s < last; ++s) {
            const double cover = std::min(hi, static_cast<double>(s + 1)) -
                                 std::max(lo, static_cast<double>(s));
            if (cover > 0.0) taps[o].push_back({s, cover / ratio});
        }
    }
    return taps;
}

}  // namespace

GrayImage downsample(const GrayImage& image, double scale) {
    if (!(scale > 0.0 && scale <= 1.0)) {
        throw ContractViolation("downsample: scale " + std::to_string(scale) +
                                " outside (0,1]");
    }
    if (scale == 1.0) return image;

    const auto reduce = [scale](std::size_t n) {
        return std::max<std::size_t>(1, static_cast<std::size_t>(
                                            std::lround(scale * static_cast<double>(n))));
    };
    const std::size_t out_h = reduce(image.height());
    const std::size_t out_w = reduce(image.width());
    const auto row_taps = area_taps(image.height(), out_h);
    const auto col_taps = area_taps(image.width(), out_w);

    // Columns first, then rows.
    std::vector<double> tmp(image.height() * out_w, 0.0);
    for (std::size_t r = 0; r < image.height(); ++r) {
        for (std::size_t c = 0; c < out_w; ++c) {
            double acc = 0.0;
            for (const Tap& t : col_taps[c]) acc += t.weight * image(r, t.index);
            tmp[r * out_w + c] = acc;
        }
    }
    std::vector<double> out(out_h * out_w, 0.0);
    for (std::size_t r = 0; r < out_h; ++r) {
        for (std::size_t c = 0; c < out_w; ++c) {
            double acc = 0.0;
            for (const Tap& t : row_taps[r]) acc += t.weight * tmp[t.index * out_w + c];
            out[r * out_w + c] = std::clamp(acc, 0.0, 1.0);
        }
    }
    return GrayImage(out_h, out_w, std::move(out));
}

GrayImage flip_horizontal(const GrayImage& image) {
    std::vector<double> out(image.size());
    const std::size_t w = image.width();
    for (std::size_t r = 0; r < image.height(); ++r) {
        for (std::size_t c = 0; c < w; ++c) out[r * w + c] = image(r, w - 1 - c);
    }
    return GrayImage(image.height(), w, std::move(out));
}

}  // namespace ctx
