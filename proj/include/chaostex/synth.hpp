#pragma once

#include "chaostex/image.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace ctx {

/// Sinusoidal gratings at a random orientation and phase, mixed with uniform
/// noise: I = (1 - noise) * (0.5 + 0.5 sin(2 pi t / period + phase)) + noise * U(0,1).
/// Class c uses grating period periods[c] (pixels), jittered by +-5% per image.
struct SynthConfig {
    std::vector<double> periods{3.0, 5.0, 8.0, 13.0};
    int per_class = 40;
    std::size_t size = 64;
    double noise = 0.1;
    std::uint64_t seed = 2024;
};

struct SynthSample {
    int label = 0;
    GrayImage image;
};

std::vector<SynthSample> make_gratings(const SynthConfig& config);

/// Writes dir/class<c>/img<k>.png (8-bit) and returns the number of files.
std::size_t write_synthetic_dataset(const std::filesystem::path& dir, const SynthConfig& config);

}  // namespace ctx
