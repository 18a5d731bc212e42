#include "chaostex/descriptor.hpp"

#include "chaostex/embedding.hpp"
#include "chaostex/errors.hpp"

#include <cmath>
#include <sstream>

namespace ctx {

void DescriptorConfig::validate() const {
    map.validate();
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw ContractViolation("delta must be in (0,1], got " + std::to_string(delta));
    }
    const double steps = 1.0 / delta;
    if (std::abs(steps - std::round(steps)) > 1e-9) {
        throw ContractViolation("1/delta must be an integer, got delta=" + std::to_string(delta));
    }
    if (n_iter < 1) throw ContractViolation("n_iter must be >= 1");
    if (scales.empty()) throw ContractViolation("at least one scale is required");
    for (double s : scales) {
        if (!(s > 0.0 && s <= 1.0)) {
            throw ContractViolation("scale " + std::to_string(s) + " outside (0,1]");
        }
    }
    if (lbp.empty()) throw ContractViolation("at least one LBP (P,R) pair is required");
    for (const auto& p : lbp) p.validate();
}

int DescriptorConfig::blend_steps() const {
    return static_cast<int>(std::lround(1.0 / delta));
}

std::size_t DescriptorConfig::feature_length() const {
    std::size_t per_blend = 0;
    for (const auto& p : lbp) per_blend += p.bins();
    return scales.size() * static_cast<std::size_t>(n_iter) *
           static_cast<std::size_t>(blend_steps() + 1) * per_blend;
}

std::string DescriptorConfig::canonical() const {
    std::ostringstream os;
    os.precision(17);
    os << "map=" << map.to_string() << ";n_iter=" << n_iter << ";delta=" << delta << ";lbp=";
    for (const auto& p : lbp) os << p.points << ',' << p.radius << ';';
    os << "scales=";
    for (double s : scales) os << s << ',';
    return os.str();
}

FeatureLayout FeatureLayout::from(const DescriptorConfig& config) {
    FeatureLayout layout;
    const int steps = config.blend_steps();
    for (std::size_t s = 0; s < config.scales.size(); ++s) {
        for (int k = 1; k <= config.n_iter; ++k) {
            for (int i = 0; i <= steps; ++i) {
                for (std::size_t q = 0; q < config.lbp.size(); ++q) {
                    const std::size_t len = config.lbp[q].bins();
                    layout.blocks.push_back({s, k, i, q, layout.length, len});
                    layout.length += len;
                }
            }
        }
    }
    return layout;
}

std::vector<std::string> FeatureLayout::column_names(const DescriptorConfig& config) const {
    std::vector<std::string> names;
    names.reserve(length);
    for (const auto& b : blocks) {
        const auto& p = config.lbp[b.param_index];
        std::ostringstream prefix;
        prefix << 's' << b.scale_index << "_k" << b.k << "_i" << b.i << "_P" << p.points << 'R'
               << p.radius << "_b";
        for (std::size_t bin = 0; bin < b.length; ++bin) names.push_back(prefix.str() + std::to_string(bin));
    }
    return names;
}

std::vector<GrayImage> iterate_images(const GrayImage& image, const ChaoticMapSpec& map,
                                      int n_iter) {
    if (n_iter < 0) throw ContractViolation("n_iter must be >= 0");
    std::vector<GrayImage> images;
    images.reserve(static_cast<std::size_t>(n_iter) + 1);
    images.push_back(image);
    PointCloud cloud = embed(image);
    for (int k = 1; k <= n_iter; ++k) {
        cloud = step_cloud(cloud, map);
        images.push_back(reconstruct(cloud));
    }
    return images;
}

FeatureVector extract(const GrayImage& image, const DescriptorConfig& config) {
    config.validate();
    FeatureVector out;
    out.layout = FeatureLayout::from(config);
    out.values.reserve(out.layout.length);
    const int steps = config.blend_steps();

    for (double scale : config.scales) {
        const GrayImage scaled = downsample(image, scale);
        for (const auto& p : config.lbp) {
            const auto need = 2 * static_cast<std::size_t>(std::ceil(p.radius)) + 1;
            if (scaled.height() < need || scaled.width() < need) {
                std::ostringstream msg;
                msg << "image too small at scale " << scale << " (" << scaled.height() << 'x'
                    << scaled.width() << ") for LBP radius " << p.radius;
                throw ContractViolation(msg.str());
            }
        }
        const auto images = iterate_images(scaled, config.map, config.n_iter);
        for (int k = 1; k <= config.n_iter; ++k) {
            const auto& prev = images[static_cast<std::size_t>(k - 1)];
            const auto& curr = images[static_cast<std::size_t>(k)];
            for (int i = 0; i <= steps; ++i) {
                const GrayImage mixed = blend(prev, curr, static_cast<double>(i) / steps);
                for (const auto& p : config.lbp) {
                    const auto hist = lbp_histogram(mixed, p);
                    out.values.insert(out.values.end(), hist.bins.begin(), hist.bins.end());
                }
            }
        }
    }
    return out;
}

}  // namespace ctx
