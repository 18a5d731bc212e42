#include "chaostex/dataset.hpp"

#include "chaostex/errors.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace fs = std::filesystem;

namespace ctx {

namespace {

bool is_image(const fs::path& p) {
    static const std::set<std::string> kExt = {".png", ".jpg", ".jpeg", ".bmp",
                                               ".tif", ".tiff", ".pgm", ".ppm"};
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return kExt.count(ext) > 0;
}

std::vector<fs::path> sorted_entries(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().filename().string().starts_with('.')) continue;
        out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<std::string> DatasetIndex::labels() const {
    std::vector<std::string> out;
    for (const auto& c : classes) out.push_back(c.label);
    return out;
}

std::vector<Sample> DatasetIndex::samples() const {
    std::vector<Sample> out;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        for (const auto& img : classes[c].images) {
            out.push_back({img.path.string(), static_cast<int>(c), img.group});
        }
    }
    return out;
}

GrayImage load_gray(const fs::path& path) {
    cv::Mat raw = cv::imread(path.string(), cv::IMREAD_ANYDEPTH | cv::IMREAD_ANYCOLOR);
    if (raw.empty()) throw DataError("cannot decode image " + path.string());

    double max_value = 0.0;
    switch (raw.depth()) {
        case CV_8U: max_value = 255.0; break;
        case CV_16U: max_value = 65535.0; break;
        default: throw DataError("unsupported pixel depth in " + path.string());
    }
    cv::Mat gray;
    if (raw.channels() == 1) {
        gray = raw;
    } else if (raw.channels() == 3) {
        cv::cvtColor(raw, gray, cv::COLOR_BGR2GRAY);
    } else if (raw.channels() == 4) {
        cv::cvtColor(raw, gray, cv::COLOR_BGRA2GRAY);
    } else {
        throw DataError("unsupported channel count in " + path.string());
    }
    cv::Mat normalized;
    gray.convertTo(normalized, CV_64F, 1.0 / max_value);

    std::vector<double> pixels(static_cast<std::size_t>(normalized.rows * normalized.cols));
    for (int r = 0; r < normalized.rows; ++r) {
        const auto* row = normalized.ptr<double>(r);
        for (int c = 0; c < normalized.cols; ++c) {
            pixels[static_cast<std::size_t>(r * normalized.cols + c)] = std::clamp(row[c], 0.0, 1.0);
        }
    }
    return GrayImage(static_cast<std::size_t>(normalized.rows),
                     static_cast<std::size_t>(normalized.cols), std::move(pixels));
}

void save_gray_png(const GrayImage& image, const fs::path& path) {
    cv::Mat out(static_cast<int>(image.height()), static_cast<int>(image.width()), CV_8UC1);
    for (std::size_t r = 0; r < image.height(); ++r) {
        for (std::size_t c = 0; c < image.width(); ++c) {
            out.at<unsigned char>(static_cast<int>(r), static_cast<int>(c)) =
                static_cast<unsigned char>(std::lround(image(r, c) * 255.0));
        }
    }
    if (!cv::imwrite(path.string(), out)) throw DataError("cannot write " + path.string());
}

DatasetIndex ingest(const fs::path& root, bool skip_bad) {
    if (!fs::is_directory(root)) throw DataError("dataset root is not a directory: " + root.string());

    DatasetIndex index;
    index.root = root;
    std::vector<std::string> bad;
    for (const auto& class_dir : sorted_entries(root)) {
        if (!fs::is_directory(class_dir)) continue;
        ClassEntry entry{class_dir.filename().string(), {}};
        for (const auto& item : sorted_entries(class_dir)) {
            if (fs::is_directory(item)) {
                for (const auto& file : sorted_entries(item)) {
                    if (fs::is_regular_file(file) && is_image(file)) {
                        entry.images.push_back({file, item.filename().string()});
                    }
                }
            } else if (fs::is_regular_file(item) && is_image(item)) {
                entry.images.push_back({item, ""});
            }
        }
        std::erase_if(entry.images, [&](const ImageEntry& img) {
            try {
                load_gray(img.path);
                return false;
            } catch (const std::exception&) {
                bad.push_back(img.path.string());
                return true;
            }
        });
        if (!entry.images.empty()) index.classes.push_back(std::move(entry));
    }

    if (!bad.empty() && !skip_bad) {
        std::string msg = "unreadable images (use --skip-bad to ignore):";
        for (const auto& b : bad) msg += "\n  " + b;
        throw DataError(msg);
    }
    index.bad_files = std::move(bad);
    if (index.classes.empty()) throw DataError("no images found under " + root.string());
    if (index.classes.size() < 2) {
        throw DataError("dataset needs at least 2 classes, found 1 under " + root.string());
    }
    return index;
}

Protocol parse_protocol(const std::string& text) {
    if (text == "grouped") return Protocol::GroupedOneTrain;
    if (text == "half") return Protocol::RandomHalf;
    throw ContractViolation("unknown protocol '" + text + "' (expected grouped|half)");
}

std::string to_string(Protocol protocol) {
    return protocol == Protocol::GroupedOneTrain ? "grouped" : "half";
}

namespace {

// Class members in order of first appearance, so results do not depend on the
// numeric value of the labels.
std::vector<std::vector<std::size_t>> members_by_class(const std::vector<Sample>& samples) {
    std::map<int, std::size_t> slot;
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        auto [it, inserted] = slot.try_emplace(samples[s].label, out.size());
        if (inserted) out.emplace_back();
        out[it->second].push_back(s);
    }
    return out;
}

}  // namespace

std::vector<Split> make_splits(const std::vector<Sample>& samples, Protocol protocol, int rounds,
                               std::uint64_t seed) {
    const auto by_class = members_by_class(samples);
    if (by_class.size() < 2) throw DataError("splits need at least 2 classes");

    std::vector<Split> splits;
    if (protocol == Protocol::GroupedOneTrain) {
        std::vector<std::vector<std::string>> groups;
        std::size_t count = SIZE_MAX;
        for (const auto& members : by_class) {
            std::set<std::string> g;
            for (auto s : members) {
                if (samples[s].group.empty()) {
                    throw DataError("grouped protocol needs group ids; " + samples[s].path +
                                    " has none");
                }
                g.insert(samples[s].group);
            }
            groups.emplace_back(g.begin(), g.end());
            count = std::min(count, g.size());
        }
        if (count < 2) throw DataError("grouped protocol needs at least 2 groups per class");
        for (std::size_t r = 0; r < count; ++r) {
            Split split;
            split.id = "group" + std::to_string(r);
            for (std::size_t c = 0; c < by_class.size(); ++c) {
                for (auto s : by_class[c]) {
                    (samples[s].group == groups[c][r] ? split.train : split.test).push_back(s);
                }
            }
            std::sort(split.train.begin(), split.train.end());
            std::sort(split.test.begin(), split.test.end());
            splits.push_back(std::move(split));
        }
        return splits;
    }

    if (rounds < 1) throw ContractViolation("random_half needs rounds >= 1");
    for (const auto& members : by_class) {
        if (members.size() < 2) {
            throw DataError("random_half needs at least 2 images per class; class " +
                            std::to_string(samples[members[0]].label) + " has " +
                            std::to_string(members.size()));
        }
    }
    std::mt19937_64 rng(seed);
    for (int r = 0; r < rounds; ++r) {
        Split split;
        split.id = "round" + std::to_string(r);
        for (const auto& members : by_class) {
            auto order = members;
            std::shuffle(order.begin(), order.end(), rng);
            const auto half = static_cast<long>(order.size() / 2);
            split.train.insert(split.train.end(), order.begin(), order.begin() + half);
            split.test.insert(split.test.end(), order.begin() + half, order.end());
        }
        std::sort(split.train.begin(), split.train.end());
        std::sort(split.test.begin(), split.test.end());
        splits.push_back(std::move(split));
    }
    return splits;
}

void check_no_leakage(const std::vector<Sample>& samples, const Split& split) {
    std::set<std::string> train;
    for (auto s : split.train) train.insert(samples.at(s).path);
    for (auto s : split.test) {
        if (train.count(samples.at(s).path)) {
            throw DataError("split " + split.id + " leaks " + samples[s].path + " into both sides");
        }
    }
}

}  // namespace ctx
