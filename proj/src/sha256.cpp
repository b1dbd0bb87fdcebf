#include "bosim/sha256.hpp"
#include "bosim/error.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <memory>

namespace bosim {

namespace {

struct CtxDeleter {
    void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
using CtxPtr = std::unique_ptr<EVP_MD_CTX, CtxDeleter>;

} // namespace

std::array<uint8_t, 32> sha256(const uint8_t* data, size_t len) {
    CtxPtr ctx(EVP_MD_CTX_new());
    require(ctx != nullptr, ErrorCode::io_error, "sha256: EVP context allocation failed");
    require(EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) == 1, ErrorCode::io_error,
            "sha256: digest init failed");
    require(EVP_DigestUpdate(ctx.get(), data, len) == 1, ErrorCode::io_error,
            "sha256: digest update failed");
    std::array<uint8_t, 32> out{};
    unsigned int out_len = 0;
    require(EVP_DigestFinal_ex(ctx.get(), out.data(), &out_len) == 1 && out_len == 32,
            ErrorCode::io_error, "sha256: digest final failed");
    return out;
}

std::array<uint8_t, 32> sha256(const std::vector<uint8_t>& data) {
    return sha256(data.data(), data.size());
}

std::string to_hex(const uint8_t* data, size_t len) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(2 * len);
    for (size_t i = 0; i < len; ++i) {
        s.push_back(digits[data[i] >> 4]);
        s.push_back(digits[data[i] & 0xf]);
    }
    return s;
}

std::string sha256_hex(const std::vector<uint8_t>& data) {
    const auto d = sha256(data);
    return to_hex(d.data(), d.size());
}

std::string sha256_file_hex(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    require(f.good(), ErrorCode::io_error, "sha256_file_hex: cannot open " + path);
    CtxPtr ctx(EVP_MD_CTX_new());
    require(ctx != nullptr, ErrorCode::io_error, "sha256_file_hex: EVP context allocation failed");
    require(EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) == 1, ErrorCode::io_error,
            "sha256_file_hex: digest init failed");
    std::vector<char> buf(1 << 16);
    while (f.good()) {
        f.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        const std::streamsize got = f.gcount();
        if (got > 0)
            require(EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<size_t>(got)) == 1,
                    ErrorCode::io_error, "sha256_file_hex: digest update failed");
    }
    require(f.eof(), ErrorCode::io_error, "sha256_file_hex: read failed for " + path);
    std::array<uint8_t, 32> out{};
    unsigned int out_len = 0;
    require(EVP_DigestFinal_ex(ctx.get(), out.data(), &out_len) == 1 && out_len == 32,
            ErrorCode::io_error, "sha256_file_hex: digest final failed");
    return to_hex(out.data(), out.size());
}

} // namespace bosim
