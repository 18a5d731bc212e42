#include "chaostex/model_io.hpp"

#include "chaostex/binary_io.hpp"
#include "chaostex/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace fs = std::filesystem;

namespace ctx {

namespace {

constexpr std::uint16_t kVersion = 1;

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) binary::write_f64(os, m(r, c));
    }
}

Eigen::MatrixXd read_matrix(std::istream& is, std::uint64_t rows, std::uint64_t cols) {
    if (rows * cols > (1ULL << 32)) throw DataError("model matrix too large");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = binary::read_f64(is);
    }
    return m;
}

fs::path sidecar(const fs::path& path) { return fs::path(path.string() + ".json"); }

}  // namespace

void save_model(const TrainedModel& model, const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write " + path.string());
    binary::write_magic(os, "CTXM", kVersion);
    binary::write_f64(os, model.lda.lambda);

    const auto& pca = model.pca;
    binary::write_uint<std::uint64_t>(os, static_cast<std::uint64_t>(pca.components.rows()));
    binary::write_uint<std::uint64_t>(os, static_cast<std::uint64_t>(pca.components.cols()));
    write_matrix(os, pca.mean);
    write_matrix(os, pca.components);
    write_matrix(os, pca.explained_variance);
    binary::write_f64(os, pca.total_variance);

    const auto& lda = model.lda;
    binary::write_uint<std::uint64_t>(os, static_cast<std::uint64_t>(lda.projection.rows()));
    binary::write_uint<std::uint64_t>(os, static_cast<std::uint64_t>(lda.projection.cols()));
    binary::write_uint<std::uint64_t>(os, lda.class_labels.size());
    write_matrix(os, lda.projection);
    write_matrix(os, lda.centroids);
    for (int label : lda.class_labels) {
        binary::write_uint<std::uint64_t>(os, static_cast<std::uint64_t>(static_cast<std::int64_t>(label)));
    }
    if (!os) throw DataError("write failed: " + path.string());

    std::ofstream js(sidecar(path));
    js << nlohmann::json{{"labels", model.labels}, {"lambda", lda.lambda}}.dump(2) << '\n';
    if (!js) throw DataError("cannot write " + sidecar(path).string());
}

TrainedModel load_model(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open " + path.string());
    const auto version = binary::read_magic(is, "CTXM");
    if (version != kVersion) throw DataError("unsupported CTXM version " + std::to_string(version));

    TrainedModel model;
    model.lda.lambda = binary::read_f64(is);

    const auto prows = binary::read_uint<std::uint64_t>(is);
    const auto pcols = binary::read_uint<std::uint64_t>(is);
    model.pca.mean = read_matrix(is, prows, 1);
    model.pca.components = read_matrix(is, prows, pcols);
    model.pca.explained_variance = read_matrix(is, pcols, 1);
    model.pca.total_variance = binary::read_f64(is);

    const auto lrows = binary::read_uint<std::uint64_t>(is);
    const auto ldirs = binary::read_uint<std::uint64_t>(is);
    const auto classes = binary::read_uint<std::uint64_t>(is);
    model.lda.projection = read_matrix(is, lrows, ldirs);
    model.lda.centroids = read_matrix(is, classes, ldirs);
    for (std::uint64_t c = 0; c < classes; ++c) {
        model.lda.class_labels.push_back(
            static_cast<int>(static_cast<std::int64_t>(binary::read_uint<std::uint64_t>(is))));
    }

    std::ifstream js(sidecar(path));
    if (!js) throw DataError("missing model sidecar " + sidecar(path).string());
    try {
        const auto meta = nlohmann::json::parse(js);
        model.labels = meta.at("labels").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad model sidecar: ") + e.what());
    }
    return model;
}

}  // namespace ctx
