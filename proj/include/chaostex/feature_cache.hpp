#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ctx {

/// Hex SHA-256 of a file's bytes / of a string.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_text(const std::string& text);

/// Feature vectors on disk, keyed by (image content hash, config hash). Values
/// are stored bit-exactly, so a hit returns exactly what was computed.
class FeatureCache {
public:
    explicit FeatureCache(std::filesystem::path dir);

    static std::string key(const std::string& content_hash, const std::string& config_canonical);

    std::optional<std::vector<double>> get(const std::string& key) const;
    void put(const std::string& key, const std::vector<double>& values) const;

    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    std::filesystem::path dir_;
};

}  // namespace ctx
