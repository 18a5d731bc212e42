// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "chaostex/chaotic_maps.hpp"
#include "chaostex/dataset.hpp"
#include "chaostex/descriptor.hpp"
#include "chaostex/embedding.hpp"
#include "chaostex/experiment.hpp"
#include "chaostex/lbp.hpp"
#include "chaostex/logistic_analysis.hpp"
#include "chaostex/synth.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace fs = std::filesystem;
using namespace ctx;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Outcome map_oracles() {
    struct Case {
        MapFamily family;
        double mu;
        double nu;
        double x;
        double expected;
    };
    const Case cases[] = {
        {MapFamily::Circle, 0.2, 0.5, 0.0, 0.2},
        {MapFamily::Gauss, 0.0, 0.0, 0.0, 0.0},
        {MapFamily::Sine, 4.0, 0.0, 0.5, 1.0},
        {MapFamily::Tent, 0.0, 0.0, 0.7, 1.0},
        {MapFamily::Logistic, 3.8, 0.0, 0.3, 0.798},
        {MapFamily::Singer, 1.07, 0.0, 0.5, 0.925357734375},
    };
    double worst = 0.0;
    for (const auto& c : cases) {
        worst = std::max(worst, std::abs(step(c.x, {c.family, c.mu, c.nu}) - c.expected));
    }
    const auto gauss_cloud = step_cloud(PointCloud(1, 1, {0.0, 0.0, 0.0}),
                                        ChaoticMapSpec::defaults(MapFamily::Gauss));
    for (double v : gauss_cloud.values()) worst = std::max(worst, std::abs(v));

    const auto logistic = ChaoticMapSpec::defaults(MapFamily::Logistic);
    const PointCloud two(1, 2, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
    const auto stepped = step_cloud(two, logistic);
    for (std::size_t k = 0; k < 6; ++k) {
        worst = std::max(worst, std::abs(stepped.values()[k] - step(two.values()[k], logistic)));
    }

    const auto o1 = orbit(0.5, {MapFamily::Logistic, 4.0, 0.0}, 2);
    const auto o2 = orbit(0.2, ChaoticMapSpec::defaults(MapFamily::Tent), 1);
    const auto o3 = orbit(0.37, logistic, 0);
    worst = std::max({worst, std::abs(o1[0] - 0.5), std::abs(o1[1] - 1.0), std::abs(o1[2]),
                      std::abs(o2[1] - 0.2 / 0.7), std::abs(o3[0] - 0.37)});
    const bool shapes = o1.size() == 3 && o2.size() == 2 && o3.size() == 1;
    return {shapes && worst <= 1e-12, "max |err| = " + fmt("%.3g", worst)};
}

Outcome exact_mu4() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const ChaoticMapSpec spec{MapFamily::Logistic, 4.0, 0.0};
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const double x0 = unit(rng);
        const auto path = orbit(x0, spec, 8);
        for (int n = 0; n <= 8; ++n) {
            worst = std::max(worst, std::abs(path[static_cast<std::size_t>(n)] -
                                             exact_logistic_mu4(x0, n)));
        }
    }
    return {worst <= 1e-5, "max |err| = " + fmt("%.3g", worst) + " over 100 x0, n <= 8"};
}

Outcome sensitivity() {
    std::mt19937_64 rng(38);
    std::uniform_real_distribution<double> start(0.05, 0.95);
    const auto spec = ChaoticMapSpec::defaults(MapFamily::Logistic);
    int diverged = 0;
    for (int t = 0; t < 1000; ++t) {
        const double x0 = start(rng);
        const auto a = orbit(x0, spec, 40);
        const auto b = orbit(x0 + 1e-8, spec, 40);
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (std::abs(a[k] - b[k]) > 1e-2) {
                ++diverged;
                break;
            }
        }
    }
    return {diverged >= 950, std::to_string(diverged) + "/1000 pairs diverged"};
}

// Reference riu2 class of an 8-bit pattern from its bit string.
int reference_riu2(unsigned pattern) {
    int transitions = 0;
    for (int b = 0; b < 8; ++b) {
        transitions += ((pattern >> b) & 1u) != ((pattern >> ((b + 1) % 8)) & 1u);
    }
    int minimal = 256;
    for (int r = 0; r < 8; ++r) {
        minimal = std::min<int>(minimal, ((pattern >> r) | (pattern << (8 - r))) & 0xFFu);
    }
    return transitions <= 2 ? std::popcount(static_cast<unsigned>(minimal)) : 9;
}

Outcome lbp_oracle() {
    int mismatches = 0;
    for (unsigned p = 0; p < 256; ++p) {
        std::vector<double> nb(8);
        for (int b = 0; b < 8; ++b) nb[static_cast<std::size_t>(b)] = (p >> b) & 1u ? 0.75 : 0.25;
        mismatches += code_pixel(nb, 0.5) != reference_riu2(p);
    }
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (const LbpParams params : {LbpParams{8, 1.0}, LbpParams{16, 2.0}, LbpParams{24, 3.0}}) {
        std::vector<double> px(48 * 48);
        for (auto& v : px) v = unit(rng);
        const auto h = lbp_histogram(GrayImage(48, 48, px), params);
        worst = std::max(worst, std::abs(std::accumulate(h.bins.begin(), h.bins.end(), 0.0) - 1.0));
    }
    return {mismatches == 0 && worst <= 1e-9,
            std::to_string(mismatches) + " pattern mismatches, |sum - 1| <= " + fmt("%.3g", worst)};
}

Outcome roundtrip() {
    std::mt19937_64 rng(50);
    std::uniform_int_distribution<std::size_t> side(1, 128);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int exact = 0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t h = t == 0 ? 128 : side(rng);
        const std::size_t w = t == 0 ? 128 : side(rng);
        std::vector<double> px(h * w);
        for (auto& v : px) v = unit(rng);
        const GrayImage img(h, w, px);
        exact += reconstruct(embed(img)) == img;
    }
    return {exact == 50, std::to_string(exact) + "/50 images reconstructed bit-exactly"};
}

Outcome series_bound() {
    const auto f4 = series_coefficients(3.8, 4);
    const auto f6 = series_coefficients(3.8, 6);
    double worst = 0.0;
    for (int g = 0; g < 10000; ++g) {
        const double x = g / 9999.0;
        worst = std::max(worst, std::abs(f4(x) - f6(x)));
    }
    const double bound = truncation_bound(3.8, 1.0, 4);
    return {worst <= 0.0532 && bound <= 0.0532,
            "max |F4 - F6| = " + fmt("%.6f", worst) + ", bound = " + fmt("%.6f", bound)};
}

Outcome feature_shape() {
    DescriptorConfig single;
    DescriptorConfig three;
    three.scales = {1.0, 0.75, 0.5};
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> px(32 * 32);
    for (auto& v : px) v = unit(rng);
    const GrayImage img(32, 32, px);
    const auto a = extract(img, single);
    const auto b = extract(img, three);
    const bool ok = single.feature_length() == 1100 && three.feature_length() == 3300 &&
                    a.values.size() == 1100 && b.values.size() == 3300 &&
                    a.layout.length == 1100 && b.layout.length == 3300;
    return {ok, std::to_string(a.values.size()) + " / " + std::to_string(b.values.size()) +
                    " features"};
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("chaostex-accept-" + std::to_string(::getpid()))) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

struct EndToEnd {
    double baseline = 0.0;
    double chaos = 0.0;
    std::string first_json;
    std::string second_json;
    bool ran = false;
};

EndToEnd& e2e() {
    static EndToEnd state;
    return state;
}

Outcome end_to_end() {
    TempDir tmp;
    const SynthConfig synth;
    write_synthetic_dataset(tmp.path() / "data", synth);
    const auto index = ingest(tmp.path() / "data");
    const auto samples = index.samples();
    const EvalConfig eval;  // half protocol, 10 rounds, PCA auto, LDA grid
    const auto splits = make_splits(samples, eval.protocol, eval.rounds, eval.seed);
    for (const auto& s : splits) check_no_leakage(samples, s);

    const auto plain = extract_plain_lbp(index, {LbpParams{}});
    const auto base = run_experiment(plain, splits, eval);

    DescriptorConfig cfg;
    cfg.map = ChaoticMapSpec::defaults(MapFamily::Circle);
    cfg.n_iter = 2;  // alpha = k + i*delta up to 2.0
    const auto table = extract_dataset(index, cfg);
    const auto chaos = run_experiment(table, splits, eval);
    const auto again = run_experiment(table, splits, eval);

    auto& st = e2e();
    st.baseline = base.mean;
    st.chaos = chaos.mean;
    st.first_json = to_json(chaos).dump(2);
    st.second_json = to_json(again).dump(2);
    st.ran = true;

    const bool ok = chaos.mean >= 0.90 && chaos.mean >= base.mean - 0.02;
    std::ostringstream os;
    os << samples.size() << " images, " << splits.size() << " rounds; baseline "
       << fmt("%.4f", base.mean) << ", circle map " << fmt("%.4f", chaos.mean) << " +- "
       << fmt("%.4f", chaos.std);
    return {ok, os.str()};
}

Outcome determinism() {
    const auto& st = e2e();
    if (!st.ran) return {false, "end-to-end run did not complete"};
    const bool same = st.first_json == st.second_json;
    return {same, same ? "results JSON identical across runs (" +
                             std::to_string(st.first_json.size()) + " bytes)"
                       : "results JSON differs"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"map unit oracles", 1.0, map_oracles},
        {"exact logistic closed form at mu=4", 1.0, exact_mu4},
        {"sensitivity to initial conditions", 5.0, sensitivity},
        {"LBP 256-pattern oracle and normalization", 1.0, lbp_oracle},
        {"embedding roundtrip", 5.0, roundtrip},
        {"series truncation bound", 1.0, series_bound},
        {"feature shape", 60.0, feature_shape},
        {"desk-scale end-to-end", 300.0, end_to_end},
        {"evaluation determinism", 1.0, determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = out.pass && in_time;
        failures += !pass;
        std::printf("%s  %-42s %s [%.2fs / %.0fs%s]\n", pass ? "PASS" : "FAIL", c.name.c_str(),
                    out.detail.c_str(), secs, c.budget_s, in_time ? "" : " over budget");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
