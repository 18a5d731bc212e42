#pragma once

#include "chaostex/image.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ctx {

struct ImageEntry {
    std::filesystem::path path;
    std::string group;  // empty when the class has no group subdirectories
};

struct ClassEntry {
    std::string label;
    std::vector<ImageEntry> images;
};

/// One image with its class index (into DatasetIndex::classes / labels).
struct Sample {
    std::string path;
    int label = 0;
    std::string group;
};

struct DatasetIndex {
    std::filesystem::path root;
    std::vector<ClassEntry> classes;  // sorted by label, images sorted by path
    std::vector<std::string> bad_files;  // skipped with skip_bad

    std::vector<std::string> labels() const;
    std::vector<Sample> samples() const;
};

/// Scans root/<class>/*.{png,jpg,jpeg,...} and root/<class>/<group>/*.
/// Every file is decoded once to validate it. Throws DataError for a missing
/// or empty root, fewer than 2 classes, or an unreadable image (unless
/// skip_bad, in which case it is recorded in bad_files).
DatasetIndex ingest(const std::filesystem::path& root, bool skip_bad = false);

/// Decodes an 8/16-bit gray or colour image to luminance in [0,1] (divided by
/// the maximum representable value). Throws DataError on failure.
GrayImage load_gray(const std::filesystem::path& path);

/// Writes an 8-bit grayscale PNG. Throws DataError on failure.
void save_gray_png(const GrayImage& image, const std::filesystem::path& path);

enum class Protocol { GroupedOneTrain, RandomHalf };

/// "grouped" or "half".
Protocol parse_protocol(const std::string& text);
std::string to_string(Protocol protocol);

struct Split {
    std::string id;
    std::vector<std::size_t> train;  // indices into the sample list
    std::vector<std::size_t> test;
};

/// GroupedOneTrain: split r trains on the r-th group (sorted) of every class
/// and tests on the rest; one split per group, `rounds` is ignored.
/// RandomHalf: `rounds` seeded stratified splits with floor(n/2) training
/// images per class.
/// Throws DataError when the samples lack the metadata the protocol needs.
std::vector<Split> make_splits(const std::vector<Sample>& samples, Protocol protocol,
                               int rounds, std::uint64_t seed);

/// Throws DataError when a sample path is on both sides of a split.
void check_no_leakage(const std::vector<Sample>& samples, const Split& split);

}  // namespace ctx
