#include "widthlab/net/mlp.hpp"

#include <cstring>
#include <fstream>

namespace widthlab::net {

Activation activation_from_string(const std::string& s) {
    if (s == "linear") return Activation::linear;
    if (s == "relu") return Activation::relu;
    if (s == "tanh") return Activation::tanh_;
    throw Error("unknown activation '" + s + "'");
}

std::string to_string(Activation a) {
    switch (a) {
        case Activation::linear: return "linear";
        case Activation::relu: return "relu";
        case Activation::tanh_: return "tanh";
    }
    return "?";
}

InitKind init_from_string(const std::string& s) {
    if (s == "gaussian" || s == "gaussian_unit") return InitKind::gaussian_unit;
    if (s == "rademacher") return InitKind::rademacher;
    throw Error("unknown init kind '" + s + "'");
}

std::string to_string(InitKind k) {
    return k == InitKind::gaussian_unit ? "gaussian_unit" : "rademacher";
}

Eigen::VectorXd ParamSet::flatten() const {
    Eigen::VectorXd theta(param_count());
    double* ptr = theta.data();
    std::memcpy(ptr, U.data(), sizeof(double) * U.size());
    ptr += U.size();
    for (const auto& w : W) {
        std::memcpy(ptr, w.data(), sizeof(double) * w.size());
        ptr += w.size();
    }
    std::memcpy(ptr, V.data(), sizeof(double) * V.size());
    return theta;
}

void ParamSet::unflatten(const Eigen::VectorXd& theta) {
    const double* ptr = theta.data();
    std::memcpy(U.data(), ptr, sizeof(double) * U.size());
    ptr += U.size();
    for (auto& w : W) {
        std::memcpy(w.data(), ptr, sizeof(double) * w.size());
        ptr += w.size();
    }
    std::memcpy(V.data(), ptr, sizeof(double) * V.size());
}

void ParamSet::add_scaled(const Eigen::VectorXd& direction, double alpha) {
    const double* ptr = direction.data();
    U += alpha * Eigen::Map<const Eigen::MatrixXd>(ptr, U.rows(), U.cols());
    ptr += U.size();
    for (auto& w : W) {
        w += alpha * Eigen::Map<const Eigen::MatrixXd>(ptr, w.rows(), w.cols());
        ptr += w.size();
    }
    V += alpha * Eigen::Map<const Eigen::VectorXd>(ptr, V.size());
}

ParamSet init(const MLPConfig& cfg) {
    if (cfg.width < 1 || cfg.hidden_layers < 1 || cfg.input_dim < 1)
        throw Error("invalid network configuration");
    ParamSet p;
    p.cfg = cfg;
    SplitMix64 rng(cfg.seed);
    auto draw = [&] {
        return cfg.init == InitKind::gaussian_unit ? rng.next_gaussian() : rng.next_rademacher();
    };
    p.U.resize(cfg.width, cfg.input_dim);
    for (Eigen::Index i = 0; i < p.U.size(); ++i) p.U.data()[i] = draw();
    p.W.resize(cfg.hidden_layers - 1);
    for (auto& w : p.W) {
        w.resize(cfg.width, cfg.width);
        for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = draw();
    }
    p.V.resize(cfg.width);
    for (Eigen::Index i = 0; i < p.V.size(); ++i) p.V.data()[i] = draw();
    return p;
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
}

}  // namespace

void save_params(const ParamSet& p, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os.write("WLP1", 4);
    put_u32(os, static_cast<std::uint32_t>(p.cfg.input_dim));
    put_u32(os, static_cast<std::uint32_t>(p.cfg.width));
    put_u32(os, static_cast<std::uint32_t>(p.cfg.hidden_layers));
    const Eigen::VectorXd theta = p.flatten();
    // note: assumes a little-endian host, like everything else around here
    os.write(reinterpret_cast<const char*>(theta.data()),
             static_cast<std::streamsize>(sizeof(double) * theta.size()));
    if (!os) throw IoError("short write to '" + path + "'");
}

ParamSet load_params(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "'");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "WLP1", 4) != 0)
        throw FormatError("bad magic in '" + path + "'", 0);
    MLPConfig cfg;
    cfg.input_dim = static_cast<int>(get_u32(is));
    cfg.width = static_cast<int>(get_u32(is));
    cfg.hidden_layers = static_cast<int>(get_u32(is));
    ParamSet p;
    p.cfg = cfg;
    p.U.resize(cfg.width, cfg.input_dim);
    p.W.assign(cfg.hidden_layers - 1, Eigen::MatrixXd(cfg.width, cfg.width));
    p.V.resize(cfg.width);
    Eigen::VectorXd theta(cfg.param_count());
    is.read(reinterpret_cast<char*>(theta.data()),
            static_cast<std::streamsize>(sizeof(double) * theta.size()));
    if (!is) throw FormatError("truncated parameter dump '" + path + "'", 16);
    p.unflatten(theta);
    return p;
}

}  // namespace widthlab::net
