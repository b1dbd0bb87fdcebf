#ifndef BOSIM_SHA256_HPP
#define BOSIM_SHA256_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace bosim {

// FIPS 180-4 SHA-256 digest (OpenSSL EVP backend).
std::array<uint8_t, 32> sha256(const uint8_t* data, size_t len);
std::array<uint8_t, 32> sha256(const std::vector<uint8_t>& data);

std::string to_hex(const uint8_t* data, size_t len);
std::string sha256_hex(const std::vector<uint8_t>& data);

// Streaming hash of a file's bytes, hex-encoded (manifest artifact hashes).
std::string sha256_file_hex(const std::string& path);

} // namespace bosim

#endif
