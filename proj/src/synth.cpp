#include "chaostex/synth.hpp"

#include "chaostex/dataset.hpp"
#include "chaostex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

namespace ctx {

std::vector<SynthSample> make_gratings(const SynthConfig& config) {
    using std::numbers::pi;
    if (config.periods.size() < 2 || config.per_class < 1 || config.size < 3) {
        throw ContractViolation("synthetic dataset needs >= 2 classes, >= 1 image, size >= 3");
    }
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<SynthSample> out;
    for (std::size_t c = 0; c < config.periods.size(); ++c) {
        for (int k = 0; k < config.per_class; ++k) {
            const double theta = pi * unit(rng);
            const double phase = 2.0 * pi * unit(rng);
            const double period = config.periods[c] * (0.95 + 0.1 * unit(rng));
            const double cx = std::cos(theta);
            const double sy = std::sin(theta);
            std::vector<double> pixels(config.size * config.size);
            for (std::size_t r = 0; r < config.size; ++r) {
                for (std::size_t col = 0; col < config.size; ++col) {
                    const double t = static_cast<double>(col) * cx + static_cast<double>(r) * sy;
                    const double wave = 0.5 + 0.5 * std::sin(2.0 * pi * t / period + phase);
                    pixels[r * config.size + col] =
                        std::clamp((1.0 - config.noise) * wave + config.noise * unit(rng), 0.0, 1.0);
                }
            }
            out.push_back({static_cast<int>(c), GrayImage(config.size, config.size, std::move(pixels))});
        }
    }
    return out;
}

std::size_t write_synthetic_dataset(const std::filesystem::path& dir, const SynthConfig& config) {
    const auto samples = make_gratings(config);
    std::vector<int> counter(config.periods.size(), 0);
    for (const auto& s : samples) {
        const auto class_dir = dir / ("class" + std::to_string(s.label));
        std::filesystem::create_directories(class_dir);
        std::ostringstream name;
        name << "img" << std::setw(3) << std::setfill('0') << counter[static_cast<std::size_t>(s.label)]++
             << ".png";
        save_gray_png(s.image, class_dir / name.str());
    }
    return samples.size();
}

}  // namespace ctx
