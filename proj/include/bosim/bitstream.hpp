#ifndef BOSIM_BITSTREAM_HPP
#define BOSIM_BITSTREAM_HPP

#include "bosim/fock.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bosim {

// T trials x m modes of raw occupancy bits.
struct BitMatrix {
    int64_t trials = 0;
    int m = 0;
    std::vector<uint8_t> bits; // row-major, one byte per bit

    uint8_t at(int64_t t, int j) const { return bits[static_cast<size_t>(t) * m + j]; }
};

// b_j^(t) = 1 iff mode j clicked in trial t (threshold semantics).
BitMatrix encode_occupancy(const std::vector<SampleRecord>& samples, int m);

struct BitStream {
    std::vector<uint8_t> bits;  // values 0/1
    std::string stage = "raw";  // raw | vn | hashed
    int source_mode = -1;       // mode index for per-mode streams
    double h_min = -1.0;        // measured min-entropy annotation (-1 = unset)
    int h_min_block = 0;        // block size the annotation was measured at

    size_t size() const { return bits.size(); }
};

// Time-ordered column of the occupancy matrix as a raw per-mode stream.
BitStream column_stream(const BitMatrix& mat, int mode);

// Von Neumann unbiasing over non-overlapping pairs: (0,1) -> 0, (1,0) -> 1,
// equal pairs discarded, odd trailing bit dropped.
BitStream von_neumann(const BitStream& raw);

// Plug-in min-entropy per bit over non-overlapping blocks:
// -log2(max block frequency) / block_size, in [0, 1].
double min_entropy(const BitStream& stream, int block_size);

// SHA-256 conditioning: input blocks of L = ceil(256 / h_min) bits map to
// 256-bit digests, concatenated in block order; trailing partial block dropped.
BitStream condition_hash(const BitStream& vn, double h_min);

// Pack bits MSB-first into bytes (final partial byte zero-padded low).
std::vector<uint8_t> pack_bits(const std::vector<uint8_t>& bits);

// Raw .bin (packed bits) plus JSON sidecar path + ".json" with
// {stage, length, h_min, block_size}.
void save_bitstream(const std::string& path, const BitStream& stream);
BitStream load_bitstream(const std::string& path);

} // namespace bosim

#endif
