#include "bosim/manifest.hpp"
#include "bosim/error.hpp"
#include "bosim/sha256.hpp"

#include <Eigen/Core>
#include <fftw3.h>
#include <openssl/opensslv.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace bosim {

void RunManifest::add_artifact(const std::string& path) {
    artifacts[std::filesystem::path(path).filename().string()] = sha256_file_hex(path);
}

std::map<std::string, std::string> library_versions() {
    std::map<std::string, std::string> v;
    v["bosim"] = "1.0.0";
    {
        std::ostringstream s;
        s << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION;
        v["eigen"] = s.str();
    }
    v["openssl"] = OPENSSL_VERSION_TEXT;
    v["fftw"] = fftw_version;
    v["json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                std::to_string(NLOHMANN_JSON_VERSION_PATCH);
    return v;
}

void save_manifest(const std::string& path, const RunManifest& manifest) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["seed"] = manifest.seed;
    j["config"] = manifest.config;
    j["artifacts"] = manifest.artifacts;
    j["timings_ms"] = manifest.timings_ms;
    j["versions"] = manifest.versions.empty() ? library_versions() : manifest.versions;
    std::ofstream f(path);
    require(f.good(), ErrorCode::io_error, "save_manifest: cannot open " + path);
    f << j.dump(2) << "\n";
    require(f.good(), ErrorCode::io_error, "save_manifest: write failed");
}

nlohmann::json load_manifest(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), ErrorCode::io_error, "load_manifest: cannot open " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::io_error, std::string("load_manifest: parse failure: ") + e.what());
    }
    return j;
}

} // namespace bosim
