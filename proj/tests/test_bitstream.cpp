#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bosim/bitstream.hpp>
#include <bosim/error.hpp>
#include <bosim/nist.hpp>
#include <bosim/rng.hpp>
#include <bosim/sha256.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace bosim;

namespace {

BitStream make_stream(std::vector<uint8_t> bits, const char* stage = "raw") {
    BitStream s;
    s.bits = std::move(bits);
    s.stage = stage;
    return s;
}

BitStream bernoulli_stream(double p, size_t n, uint64_t seed) {
    Rng rng = Rng::substream(seed, StreamId::test, 0);
    BitStream s;
    s.bits.resize(n);
    for (size_t i = 0; i < n; ++i) s.bits[i] = rng.bernoulli(p) ? 1 : 0;
    return s;
}

} // namespace

TEST_SUITE("occupancy encoding") {

TEST_CASE("threshold bits per trial and mode") {
    std::vector<SampleRecord> recs(3);
    recs[0].output = FockState::from_modes(4, {0, 2});
    recs[1].output = FockState::from_modes(4, {1, 1}); // double occupation
    recs[2].output = FockState::from_modes(4, {3});
    BitMatrix mat = encode_occupancy(recs, 4);
    CHECK(mat.trials == 3);
    CHECK(mat.m == 4);
    CHECK(mat.at(0, 0) == 1);
    CHECK(mat.at(0, 1) == 0);
    CHECK(mat.at(0, 2) == 1);
    CHECK(mat.at(0, 3) == 0);
    CHECK(mat.at(1, 1) == 1); // threshold: two photons still one bit
    CHECK(mat.at(1, 0) == 0);
    CHECK(mat.at(2, 3) == 1);
}

TEST_CASE("shape mismatches are rejected") {
    std::vector<SampleRecord> recs(1);
    recs[0].output = FockState::from_modes(3, {0});
    CHECK_THROWS_AS(encode_occupancy(recs, 4), Error);
    CHECK_THROWS_AS(encode_occupancy(recs, 0), Error);
}

TEST_CASE("column stream is the time-ordered mode track") {
    std::vector<SampleRecord> recs(4);
    recs[0].output = FockState::from_modes(2, {0});
    recs[1].output = FockState::from_modes(2, {1});
    recs[2].output = FockState::from_modes(2, {0});
    recs[3].output = FockState::from_modes(2, {0});
    BitMatrix mat = encode_occupancy(recs, 2);
    BitStream s0 = column_stream(mat, 0);
    BitStream s1 = column_stream(mat, 1);
    CHECK(s0.bits == std::vector<uint8_t>{1, 0, 1, 1});
    CHECK(s1.bits == std::vector<uint8_t>{0, 1, 0, 0});
    CHECK(s0.stage == "raw");
    CHECK(s0.source_mode == 0);
    CHECK(s1.source_mode == 1);
    CHECK_THROWS_AS(column_stream(mat, 2), Error);
}

}

TEST_SUITE("von neumann unbiasing") {

TEST_CASE("pair mapping on an explicit stream") {
    // pairs: (0,1) -> 0, (1,0) -> 1, (0,0) and (1,1) discarded
    BitStream raw = make_stream({0, 1, 1, 0, 0, 0, 1, 1});
    BitStream out = von_neumann(raw);
    CHECK(out.bits == std::vector<uint8_t>{0, 1});
    CHECK(out.stage == "vn");
}

TEST_CASE("odd trailing bit is dropped") {
    BitStream raw = make_stream({1, 0, 1});
    BitStream out = von_neumann(raw);
    CHECK(out.bits == std::vector<uint8_t>{1});
    BitStream empty = von_neumann(make_stream({1}));
    CHECK(empty.bits.empty());
}

TEST_CASE("output of a biased source is unbiased with the expected yield") {
    const size_t n = 1000000;
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        BitStream raw = bernoulli_stream(p, n, uint64_t(p * 1000));
        BitStream vn = von_neumann(raw);
        // yield: one output bit per pair with probability 2 p (1-p)
        double expect = (n / 2.0) * 2.0 * p * (1.0 - p);
        double sigma = std::sqrt((n / 2.0) * 2.0 * p * (1 - p) * (1.0 - 2.0 * p * (1 - p)));
        CHECK(std::abs(double(vn.size()) - expect) < 4.0 * sigma);
        // unbiased: the monobit statistic must not reject
        CHECK(nist_monobit(vn.bits) > 0.001);
    }
}

TEST_CASE("source annotation survives the stage change") {
    std::vector<SampleRecord> recs(6);
    for (int t = 0; t < 6; ++t) recs[t].output = FockState::from_modes(2, {t % 2});
    BitMatrix mat = encode_occupancy(recs, 2);
    BitStream vn = von_neumann(column_stream(mat, 1));
    CHECK(vn.source_mode == 1);
}

}

TEST_SUITE("min entropy") {

TEST_CASE("constant and alternating streams") {
    BitStream zeros = make_stream(std::vector<uint8_t>(4096, 0));
    CHECK(min_entropy(zeros, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(min_entropy(zeros, 8) == doctest::Approx(0.0).epsilon(1e-12));
    std::vector<uint8_t> alt(4096);
    for (size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2;
    // at block size 1 both symbols are equally frequent: one bit per bit
    CHECK(min_entropy(make_stream(alt), 1) == doctest::Approx(1.0).epsilon(1e-12));
    // at block size 2 the single pattern "01" gives zero entropy
    CHECK(min_entropy(make_stream(alt), 2) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("a biased bernoulli source lands near -log2(p_max)") {
    BitStream s = bernoulli_stream(0.75, 400000, 9);
    double h1 = min_entropy(s, 1);
    CHECK(std::abs(h1 - (-std::log2(0.75))) < 0.01);
    // block estimate converges to the same per-bit rate for iid bits
    double h4 = min_entropy(s, 4);
    CHECK(std::abs(h4 - (-std::log2(0.75))) < 0.02);
}

TEST_CASE("mixing a predictable and a random track lowers the pooled rate") {
    // invariant: the pooled stream's min-entropy lies strictly between the
    // two component rates
    const size_t n = 200000;
    BitStream uniform = bernoulli_stream(0.5, n, 31);
    BitStream constant = make_stream(std::vector<uint8_t>(n, 1));
    BitStream mixed;
    mixed.bits.reserve(2 * n);
    for (size_t i = 0; i < n; ++i) {
        mixed.bits.push_back(uniform.bits[i]);
        mixed.bits.push_back(constant.bits[i]);
    }
    for (int block : {2, 4, 8}) {
        double h_mixed = min_entropy(mixed, block);
        double h_const = min_entropy(constant, block);
        double h_unif = min_entropy(uniform, block);
        CHECK(h_mixed > h_const + 0.05);
        CHECK(h_mixed < h_unif - 0.05);
    }
}

TEST_CASE("argument guards") {
    BitStream s = bernoulli_stream(0.5, 64, 1);
    CHECK_THROWS_AS(min_entropy(make_stream({}), 1), Error);
    CHECK_THROWS_AS(min_entropy(s, 0), Error);
    CHECK_THROWS_AS(min_entropy(s, 17), Error);
    CHECK_THROWS_AS(min_entropy(s, 128), Error);
}

}

TEST_SUITE("conditioning") {

TEST_CASE("block length follows the entropy rate") {
    // h = 1: 256-bit blocks, one digest per block
    BitStream vn = bernoulli_stream(0.5, 1024, 5);
    vn.stage = "vn";
    BitStream out = condition_hash(vn, 1.0);
    CHECK(out.bits.size() == 4 * 256); // 1024 / 256 blocks, 256 bits each
    CHECK(out.stage == "hashed");
    // h = 0.5: 512-bit input blocks, so half as many digests
    BitStream half = condition_hash(vn, 0.5);
    CHECK(half.bits.size() == 2 * 256);
    // trailing partial block is dropped
    BitStream ragged = bernoulli_stream(0.5, 300, 6);
    CHECK(condition_hash(ragged, 1.0).bits.size() == 256);
    CHECK(condition_hash(bernoulli_stream(0.5, 255, 7), 1.0).bits.empty());
}

TEST_CASE("digest of a known block matches the hash primitive") {
    // a block of 256 zero bits packs to 32 zero bytes; the conditioner output
    // must be that digest, unpacked msb-first
    BitStream zeros = make_stream(std::vector<uint8_t>(256, 0), "vn");
    BitStream out = condition_hash(zeros, 1.0);
    REQUIRE(out.bits.size() == 256);
    CHECK(sha256_hex(std::vector<uint8_t>(32, 0)) ==
          "66687aadf862bd776c8fc18b8e9f8e20089714856ee233b3902a591d0d5f2925");
    std::array<uint8_t, 32> digest = sha256(std::vector<uint8_t>(32, 0));
    for (int i = 0; i < 256; ++i)
        CHECK(out.bits[i] == ((digest[i / 8] >> (7 - i % 8)) & 1));
}

TEST_CASE("hash primitive matches known answers") {
    CHECK(sha256_hex({}) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    std::vector<uint8_t> abc{'a', 'b', 'c'};
    CHECK(sha256_hex(abc) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("entropy annotation is stored and bad rates are rejected") {
    BitStream vn = bernoulli_stream(0.5, 600, 8);
    BitStream out = condition_hash(vn, 0.9);
    CHECK(out.h_min == 0.9);
    CHECK_THROWS_AS(condition_hash(vn, 0.0), Error);
    CHECK_THROWS_AS(condition_hash(vn, -0.2), Error);
    CHECK_THROWS_AS(condition_hash(vn, 1.5), Error);
    try {
        condition_hash(vn, 1.5);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_entropy);
    }
}

TEST_CASE("single-bit flips avalanche through the conditioner") {
    // mean Hamming distance between digests of blocks differing in one bit
    // must sit in the binomial(256, 1/2) three-sigma window [112, 144]
    Rng rng = Rng::substream(123, StreamId::test, 4);
    double total = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        std::vector<uint8_t> block(256);
        for (auto& b : block) b = rng.bernoulli(0.5) ? 1 : 0;
        BitStream a = make_stream(block, "vn");
        block[rng.uniform_int(256)] ^= 1;
        BitStream b = make_stream(block, "vn");
        BitStream da = condition_hash(a, 1.0);
        BitStream db = condition_hash(b, 1.0);
        int dist = 0;
        for (int i = 0; i < 256; ++i) dist += da.bits[i] != db.bits[i];
        total += dist;
    }
    double mean = total / trials;
    CHECK(mean >= 112.0);
    CHECK(mean <= 144.0);
}

}

TEST_SUITE("packing and io") {

TEST_CASE("bits pack msb-first with low zero padding") {
    CHECK(pack_bits({1, 0, 1, 1, 0, 1, 0, 1}) == std::vector<uint8_t>{0xB5});
    CHECK(pack_bits({1, 1, 1}) == std::vector<uint8_t>{0xE0});
    CHECK(pack_bits({}) == std::vector<uint8_t>{});
    CHECK(pack_bits({0, 0, 0, 0, 0, 0, 0, 1, 1}) == std::vector<uint8_t>{0x01, 0x80});
}

TEST_CASE("bitstreams round-trip through the bin-plus-sidecar format") {
    auto dir = std::filesystem::temp_directory_path();
    auto path = (dir / "bosim_test_stream.bin").string();
    BitStream s = bernoulli_stream(0.5, 1003, 12); // deliberately not byte-aligned
    s.stage = "vn";
    s.source_mode = 17;
    s.h_min = 0.87;
    s.h_min_block = 8;
    save_bitstream(path, s);
    BitStream back = load_bitstream(path);
    CHECK(back.bits == s.bits);
    CHECK(back.stage == "vn");
    CHECK(back.h_min == doctest::Approx(0.87));
    CHECK(back.h_min_block == 8);
    std::filesystem::remove(path);
    std::filesystem::remove(path + ".json");
}

TEST_CASE("a truncated payload is detected") {
    auto dir = std::filesystem::temp_directory_path();
    auto path = (dir / "bosim_test_trunc.bin").string();
    BitStream s = bernoulli_stream(0.5, 4096, 13);
    save_bitstream(path, s);
    std::filesystem::resize_file(path, 100);
    CHECK_THROWS_AS(load_bitstream(path), Error);
    std::filesystem::remove(path);
    std::filesystem::remove(path + ".json");
}

}
