#include "chaostex/feature_cache.hpp"

#include "chaostex/binary_io.hpp"
#include "chaostex/errors.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>
#include <thread>

namespace fs = std::filesystem;

namespace ctx {

namespace {

std::string sha256_bytes(const void* data, std::size_t size) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data, size, digest, &len, EVP_sha256(), nullptr) != 1) {
        throw DataError("SHA-256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out += kHex[digest[k] >> 4];
        out += kHex[digest[k] & 0xF];
    }
    return out;
}

}  // namespace

std::string sha256_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot read " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return sha256_bytes(bytes.data(), bytes.size());
}

std::string sha256_text(const std::string& text) { return sha256_bytes(text.data(), text.size()); }

FeatureCache::FeatureCache(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw DataError("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::string FeatureCache::key(const std::string& content_hash, const std::string& config_canonical) {
    return content_hash + "-" + sha256_text(config_canonical).substr(0, 16);
}

std::optional<std::vector<double>> FeatureCache::get(const std::string& key) const {
    std::ifstream is(dir_ / (key + ".bin"), std::ios::binary);
    if (!is) return std::nullopt;
    try {
        const auto count = binary::read_uint<std::uint64_t>(is);
        std::vector<double> values(count);
        for (auto& v : values) v = binary::read_f64(is);
        return values;
    } catch (const DataError&) {
        return std::nullopt;  // truncated entry, recompute
    }
}

void FeatureCache::put(const std::string& key, const std::vector<double>& values) const {
    // Readers never observe a partially written entry.
    const fs::path final_path = dir_ / (key + ".bin");
    const fs::path tmp = dir_ / (key + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())));
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw DataError("cannot write cache entry " + tmp.string());
        binary::write_uint<std::uint64_t>(os, values.size());
        for (double v : values) binary::write_f64(os, v);
    }
    std::error_code ec;
    fs::rename(tmp, final_path, ec);
    if (ec) fs::remove(tmp, ec);
}

}  // namespace ctx
