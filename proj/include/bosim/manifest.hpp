#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

namespace bosim {

// Provenance record written next to every command's outputs: the exact
// configuration, a content hash for each artifact, stage timings, and
// library versions.
struct RunManifest {
    std::string command;
    uint64_t seed = 0;
    nlohmann::json config = nlohmann::json::object();
    std::map<std::string, std::string> artifacts; // file name -> sha256 hex
    std::map<std::string, double> timings_ms;
    std::map<std::string, std::string> versions;

    void add_artifact(const std::string& path);
};

std::map<std::string, std::string> library_versions();
void save_manifest(const std::string& path, const RunManifest& manifest);
nlohmann::json load_manifest(const std::string& path);

} // namespace bosim
