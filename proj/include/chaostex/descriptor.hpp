#pragma once

#include "chaostex/chaotic_maps.hpp"
#include "chaostex/image.hpp"
#include "chaostex/lbp.hpp"
#include "chaostex/pca.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ctx {

struct DescriptorConfig {
    ChaoticMapSpec map = ChaoticMapSpec::defaults(MapFamily::Logistic);
    int n_iter = 10;
    double delta = 0.1;
    std::vector<LbpParams> lbp{LbpParams{}};
    std::vector<double> scales{1.0};
    PcaDims pca_dims = PcaDims::automatic();

    /// Throws ContractViolation unless delta in (0,1] with integral 1/delta,
    /// n_iter >= 1, scales non-empty within (0,1], and every LbpParams valid.
    void validate() const;

    /// 1/delta; blend weights are i/blend_steps() for i = 0..blend_steps().
    int blend_steps() const;

    /// |scales| * n_iter * (1/delta + 1) * sum(P+2).
    std::size_t feature_length() const;

    /// Stable textual form of everything that influences extract().
    std::string canonical() const;
};

/// Offsets of one LBP histogram inside a feature vector. alpha = k + i*delta.
struct FeatureBlock {
    std::size_t scale_index = 0;
    int k = 0;
    int i = 0;
    std::size_t param_index = 0;
    std::size_t offset = 0;
    std::size_t length = 0;
};

struct FeatureLayout {
    std::vector<FeatureBlock> blocks;  // in (scale, k, i, param) order
    std::size_t length = 0;

    static FeatureLayout from(const DescriptorConfig& config);
    /// "s{scale}_k{k}_i{i}_P{P}R{R}_b{bin}" for every feature.
    std::vector<std::string> column_names(const DescriptorConfig& config) const;
};

struct FeatureVector {
    std::vector<double> values;
    FeatureLayout layout;
};

/// [I0, I1, ..., I_n]: I0 is the input, I_k the reconstruction of the cloud
/// after k map applications. The cloud itself is carried between iterations.
std::vector<GrayImage> iterate_images(const GrayImage& image, const ChaoticMapSpec& map,
                                      int n_iter);

/// Concatenated LBP histograms of blend(I_{k-1}, I_k, i*delta) for every scale,
/// k = 1..n_iter, i = 0..1/delta and LBP parameter set, in that nesting order.
/// Throws ContractViolation naming the scale when a resized image is too
/// small for an LBP radius.
FeatureVector extract(const GrayImage& image, const DescriptorConfig& config);

}  // namespace ctx
