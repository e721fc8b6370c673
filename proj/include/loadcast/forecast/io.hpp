#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "loadcast/common.hpp"
#include "loadcast/forecast/model.hpp"

namespace loadcast::forecast {

/// Versioned binary model bundle: magic, config block, then every parameter
/// array in visit order as a u64 length plus raw doubles. Native-endian;
/// round trips are bit-exact on the writing platform.
inline constexpr char kModelMagic[8] = {'L', 'C', 'F', 'M', '0', '0', '0', '1'};

namespace detail {

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
void read_pod(std::istream& in, T& v, const std::string& what) {
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw DataError("model bundle truncated while reading " + what);
}

}  // namespace detail

inline void save_model(const ForecastModel& m, std::ostream& out) {
    out.write(kModelMagic, sizeof kModelMagic);
    const ModelConfig& c = m.cfg;
    for (std::uint64_t v : {static_cast<std::uint64_t>(c.lookback_steps),
                            static_cast<std::uint64_t>(c.feature_count),
                            static_cast<std::uint64_t>(c.td_dense_units),
                            static_cast<std::uint64_t>(c.heads),
                            static_cast<std::uint64_t>(c.head_dim),
                            static_cast<std::uint64_t>(c.dense_units),
                            static_cast<std::uint64_t>(c.dense_layers),
                            static_cast<std::uint64_t>(c.horizon)})
        detail::write_pod(out, v);
    detail::write_pod(out, c.attn_dropout);
    detail::write_pod(out, m.norm.epsilon);
    detail::write_pod(out, static_cast<std::uint8_t>(c.residual ? 1 : 0));
    visit_param_arrays(m, [&](const std::vector<double>& arr) {
        detail::write_pod(out, static_cast<std::uint64_t>(arr.size()));
        out.write(reinterpret_cast<const char*>(arr.data()),
                  static_cast<std::streamsize>(arr.size() * sizeof(double)));
    });
    if (!out) throw DataError("model bundle write failed");
}

inline void save_model(const ForecastModel& m, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot open '" + tmp + "' for writing");
        save_model(m, out);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw DataError("cannot rename '" + tmp + "' to '" + path + "'");
}

inline ForecastModel load_model(std::istream& in) {
    char magic[sizeof kModelMagic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kModelMagic, sizeof magic) != 0)
        throw DataError("not a model bundle (bad magic)");

    std::uint64_t dims[8];
    for (auto& d : dims) detail::read_pod(in, d, "config");
    ModelConfig cfg;
    cfg.lookback_steps = dims[0];
    cfg.feature_count = dims[1];
    cfg.td_dense_units = dims[2];
    cfg.heads = dims[3];
    cfg.head_dim = dims[4];
    cfg.dense_units = dims[5];
    cfg.dense_layers = dims[6];
    cfg.horizon = dims[7];
    double epsilon = 0.0;
    detail::read_pod(in, cfg.attn_dropout, "config");
    detail::read_pod(in, epsilon, "config");
    std::uint8_t residual = 0;
    detail::read_pod(in, residual, "config");
    cfg.residual = residual != 0;
    cfg.validate();
    if (!(epsilon > 0.0)) throw DataError("model bundle: non-positive layer norm epsilon");

    ForecastModel m = build_model(cfg, 0);
    m.norm.epsilon = epsilon;
    visit_param_arrays(m, [&](std::vector<double>& arr) {
        std::uint64_t n = 0;
        detail::read_pod(in, n, "array length");
        if (n != arr.size())
            throw DataError("model bundle: array length " + std::to_string(n) +
                            " does not match config-derived size " + std::to_string(arr.size()));
        in.read(reinterpret_cast<char*>(arr.data()),
                static_cast<std::streamsize>(arr.size() * sizeof(double)));
        if (!in) throw DataError("model bundle truncated inside a parameter array");
    });
    return m;
}

inline ForecastModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    return load_model(in);
}

}  // namespace loadcast::forecast
