#include "bosim/bitstream.hpp"
#include "bosim/error.hpp"
#include "bosim/log.hpp"
#include "bosim/sha256.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace bosim {

BitMatrix encode_occupancy(const std::vector<SampleRecord>& samples, int m) {
    require(m >= 1, ErrorCode::invalid_shape, "encode_occupancy: m must be positive");
    BitMatrix mat;
    mat.trials = static_cast<int64_t>(samples.size());
    mat.m = m;
    mat.bits.assign(static_cast<size_t>(mat.trials) * m, 0);
    for (int64_t t = 0; t < mat.trials; ++t) {
        const FockState& s = samples[t].output;
        require(s.modes() == m, ErrorCode::shape_mismatch,
                "encode_occupancy: sample mode count mismatch");
        for (int j = 0; j < m; ++j)
            mat.bits[static_cast<size_t>(t) * m + j] = s.occ[j] >= 1 ? 1 : 0;
    }
    return mat;
}

BitStream column_stream(const BitMatrix& mat, int mode) {
    require(mode >= 0 && mode < mat.m, ErrorCode::invalid_shape,
            "column_stream: mode out of range");
    BitStream s;
    s.stage = "raw";
    s.source_mode = mode;
    s.bits.resize(mat.trials);
    for (int64_t t = 0; t < mat.trials; ++t) s.bits[t] = mat.at(t, mode);
    return s;
}

BitStream von_neumann(const BitStream& raw) {
    BitStream out;
    out.stage = "vn";
    out.source_mode = raw.source_mode;
    out.bits.reserve(raw.bits.size() / 4);
    for (size_t i = 0; i + 1 < raw.bits.size(); i += 2) {
        const uint8_t a = raw.bits[i], b = raw.bits[i + 1];
        if (a == 0 && b == 1) out.bits.push_back(0);
        else if (a == 1 && b == 0) out.bits.push_back(1);
    }
    return out;
}

double min_entropy(const BitStream& stream, int block_size) {
    require(!stream.bits.empty(), ErrorCode::insufficient_data, "min_entropy: empty stream");
    require(block_size >= 1 && block_size <= 16, ErrorCode::invalid_shape,
            "min_entropy: block_size must be 1..16");
    const size_t n_blocks = stream.bits.size() / block_size;
    require(n_blocks >= 1, ErrorCode::insufficient_data,
            "min_entropy: stream shorter than one block");
    const double recommended = 100.0 * std::pow(2.0, block_size);
    if (static_cast<double>(stream.bits.size()) < recommended)
        log_warn("min_entropy: stream length ", stream.bits.size(),
                 " below recommended 100 * 2^block_size = ", recommended);
    std::vector<size_t> counts(1ull << block_size, 0);
    for (size_t b = 0; b < n_blocks; ++b) {
        uint32_t v = 0;
        for (int k = 0; k < block_size; ++k)
            v = (v << 1) | stream.bits[b * block_size + k];
        ++counts[v];
    }
    size_t max_count = 0;
    for (size_t c : counts) max_count = std::max(max_count, c);
    const double p_max = static_cast<double>(max_count) / static_cast<double>(n_blocks);
    return -std::log2(p_max) / block_size;
}

std::vector<uint8_t> pack_bits(const std::vector<uint8_t>& bits) {
    std::vector<uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bytes[i / 8] |= static_cast<uint8_t>(0x80u >> (i % 8));
    return bytes;
}

BitStream condition_hash(const BitStream& vn, double h_min) {
    require(h_min > 0.0 && h_min <= 1.0, ErrorCode::invalid_entropy,
            "condition_hash: h_min must be in (0, 1]");
    const size_t block_l = static_cast<size_t>(std::ceil(256.0 / h_min));
    BitStream out;
    out.stage = "hashed";
    out.h_min = h_min;
    const size_t n_blocks = vn.bits.size() / block_l;
    out.bits.reserve(n_blocks * 256);
    std::vector<uint8_t> block_bits(block_l);
    for (size_t b = 0; b < n_blocks; ++b) {
        std::copy(vn.bits.begin() + static_cast<ptrdiff_t>(b * block_l),
                  vn.bits.begin() + static_cast<ptrdiff_t>((b + 1) * block_l),
                  block_bits.begin());
        const auto digest = sha256(pack_bits(block_bits));
        for (uint8_t byte : digest)
            for (int k = 7; k >= 0; --k) out.bits.push_back((byte >> k) & 1);
    }
    return out;
}

void save_bitstream(const std::string& path, const BitStream& stream) {
    {
        std::ofstream f(path, std::ios::binary);
        require(f.good(), ErrorCode::io_error, "save_bitstream: cannot open " + path);
        const auto bytes = pack_bits(stream.bits);
        f.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
        require(f.good(), ErrorCode::io_error, "save_bitstream: write failed");
    }
    nlohmann::json side;
    side["stage"] = stream.stage;
    side["length"] = stream.bits.size();
    side["h_min"] = stream.h_min;
    side["block_size"] = stream.h_min_block;
    std::ofstream s(path + ".json");
    require(s.good(), ErrorCode::io_error, "save_bitstream: cannot open sidecar for " + path);
    s << side.dump(2) << "\n";
    require(s.good(), ErrorCode::io_error, "save_bitstream: sidecar write failed");
}

BitStream load_bitstream(const std::string& path) {
    nlohmann::json side;
    {
        std::ifstream s(path + ".json");
        require(s.good(), ErrorCode::io_error, "load_bitstream: cannot open sidecar for " + path);
        try {
            s >> side;
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::io_error,
                        std::string("load_bitstream: sidecar parse failure: ") + e.what());
        }
    }
    BitStream out;
    out.stage = side.at("stage").get<std::string>();
    out.h_min = side.at("h_min").get<double>();
    out.h_min_block = side.at("block_size").get<int>();
    const size_t length = side.at("length").get<size_t>();
    std::ifstream f(path, std::ios::binary);
    require(f.good(), ErrorCode::io_error, "load_bitstream: cannot open " + path);
    std::vector<uint8_t> bytes((length + 7) / 8);
    f.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    require(f.gcount() == static_cast<std::streamsize>(bytes.size()), ErrorCode::io_error,
            "load_bitstream: truncated bit file " + path);
    out.bits.resize(length);
    for (size_t i = 0; i < length; ++i) out.bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
    return out;
}

} // namespace bosim
