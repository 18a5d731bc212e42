#include "chaostex/feature_io.hpp"

#include "chaostex/binary_io.hpp"
#include "chaostex/errors.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace ctx {

namespace {

constexpr std::uint16_t kBinaryVersion = 1;
constexpr const char* kCsvTag = "# chaostex-features v1 ";

std::string format_double(double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
                cur += '"';
                ++k;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

double parse_double(const std::string& s) {
    // strtod rather than stod: subnormal values set ERANGE but parse correctly.
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    const bool overflow = errno == ERANGE && std::isinf(v);
    if (s.empty() || end != s.c_str() + s.size() || overflow) {
        throw DataError("bad number in feature file: '" + s + "'");
    }
    return v;
}

json metadata(const FeatureTable& table, bool with_samples) {
    json meta;
    meta["config"] = to_json(table.config);
    meta["labels"] = table.labels;
    if (with_samples) {
        json samples = json::array();
        for (const auto& s : table.samples) {
            samples.push_back({{"path", s.path}, {"label", s.label}, {"group", s.group}});
        }
        meta["samples"] = std::move(samples);
        meta["columns"] = table.columns;
    }
    return meta;
}

int label_index(const std::vector<std::string>& labels, const std::string& name) {
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] == name) return static_cast<int>(k);
    }
    throw DataError("feature file references unknown label '" + name + "'");
}

}  // namespace

json to_json(const DescriptorConfig& config) {
    json lbp = json::array();
    for (const auto& p : config.lbp) lbp.push_back({{"points", p.points}, {"radius", p.radius}});
    return {{"map", config.map.to_string()},
            {"n_iter", config.n_iter},
            {"delta", config.delta},
            {"lbp", lbp},
            {"scales", config.scales},
            {"pca_dims", config.pca_dims.to_string()}};
}

DescriptorConfig descriptor_config_from_json(const json& j) {
    try {
        DescriptorConfig config;
        config.map = ChaoticMapSpec::parse(j.at("map").get<std::string>());
        config.n_iter = j.at("n_iter").get<int>();
        config.delta = j.at("delta").get<double>();
        config.lbp.clear();
        for (const auto& p : j.at("lbp")) {
            config.lbp.push_back({p.at("points").get<int>(), p.at("radius").get<double>()});
        }
        config.scales = j.at("scales").get<std::vector<double>>();
        if (j.contains("pca_dims")) config.pca_dims = PcaDims::parse(j["pca_dims"].get<std::string>());
        return config;
    } catch (const json::exception& e) {
        throw DataError(std::string("bad descriptor config: ") + e.what());
    }
}

void write_features_csv(const FeatureTable& table, const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write " + path.string());
    os << kCsvTag << metadata(table, false).dump() << '\n';
    os << "path,label,group";
    for (const auto& c : table.columns) os << ',' << csv_quote(c);
    os << '\n';
    for (std::size_t r = 0; r < table.samples.size(); ++r) {
        const auto& s = table.samples[r];
        os << csv_quote(s.path) << ',' << csv_quote(table.labels.at(static_cast<std::size_t>(s.label)))
           << ',' << csv_quote(s.group);
        for (Eigen::Index c = 0; c < table.features.cols(); ++c) {
            os << ',' << format_double(table.features(static_cast<Eigen::Index>(r), c));
        }
        os << '\n';
    }
    if (!os) throw DataError("write failed: " + path.string());
}

FeatureTable read_features_csv(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open " + path.string());
    std::string line;
    if (!std::getline(is, line) || !line.starts_with(kCsvTag)) {
        throw DataError(path.string() + " is not a chaostex feature CSV");
    }
    FeatureTable table;
    try {
        const json meta = json::parse(line.substr(std::string(kCsvTag).size()));
        table.config = descriptor_config_from_json(meta.at("config"));
        table.labels = meta.at("labels").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": bad metadata line: " + e.what());
    }
    if (!std::getline(is, line)) throw DataError(path.string() + ": missing header row");
    auto header = csv_split(line);
    if (header.size() < 3) throw DataError(path.string() + ": header too short");
    table.columns.assign(header.begin() + 3, header.end());

    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto fields = csv_split(line);
        if (fields.size() != header.size()) {
            throw DataError(path.string() + ": row " + std::to_string(rows.size() + 1) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(header.size()));
        }
        table.samples.push_back({fields[0], label_index(table.labels, fields[1]), fields[2]});
        std::vector<double> values;
        values.reserve(fields.size() - 3);
        for (std::size_t k = 3; k < fields.size(); ++k) values.push_back(parse_double(fields[k]));
        rows.push_back(std::move(values));
    }
    table.features.resize(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(table.columns.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            table.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return table;
}

void write_features_binary(const FeatureTable& table, const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write " + path.string());
    binary::write_magic(os, "CTXF", kBinaryVersion);
    binary::write_uint<std::uint64_t>(os, static_cast<std::uint64_t>(table.features.rows()));
    binary::write_uint<std::uint64_t>(os, static_cast<std::uint64_t>(table.features.cols()));
    binary::write_blob(os, metadata(table, true).dump());
    for (Eigen::Index r = 0; r < table.features.rows(); ++r) {
        for (Eigen::Index c = 0; c < table.features.cols(); ++c) {
            binary::write_f64(os, table.features(r, c));
        }
    }
    if (!os) throw DataError("write failed: " + path.string());
}

FeatureTable read_features_binary(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open " + path.string());
    const auto version = binary::read_magic(is, "CTXF");
    if (version != kBinaryVersion) {
        throw DataError("unsupported CTXF version " + std::to_string(version));
    }
    const auto rows = binary::read_uint<std::uint64_t>(is);
    const auto cols = binary::read_uint<std::uint64_t>(is);

    FeatureTable table;
    try {
        const json meta = json::parse(binary::read_blob(is));
        table.config = descriptor_config_from_json(meta.at("config"));
        table.labels = meta.at("labels").get<std::vector<std::string>>();
        table.columns = meta.at("columns").get<std::vector<std::string>>();
        for (const auto& s : meta.at("samples")) {
            table.samples.push_back({s.at("path").get<std::string>(), s.at("label").get<int>(),
                                     s.at("group").get<std::string>()});
        }
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": bad metadata: " + e.what());
    }
    if (table.samples.size() != rows || table.columns.size() != cols) {
        throw DataError(path.string() + ": metadata does not match dimensions");
    }
    table.features.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < table.features.rows(); ++r) {
        for (Eigen::Index c = 0; c < table.features.cols(); ++c) {
            table.features(r, c) = binary::read_f64(is);
        }
    }
    return table;
}

void save_features(const FeatureTable& table, const fs::path& path) {
    if (path.extension() == ".csv") {
        write_features_csv(table, path);
    } else {
        write_features_binary(table, path);
    }
}

FeatureTable load_features(const fs::path& path) {
    return path.extension() == ".csv" ? read_features_csv(path) : read_features_binary(path);
}

}  // namespace ctx
