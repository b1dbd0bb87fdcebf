#include "bosim/fock.hpp"
#include "bosim/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>

namespace bosim {

FockState FockState::from_modes(int m, const std::vector<int>& modes) {
    FockState s(m);
    for (int mode : modes) {
        require(mode >= 0 && mode < m, ErrorCode::invalid_shape,
                "FockState: mode index out of range");
        ++s.occ[mode];
    }
    return s;
}

int FockState::photons() const {
    int n = 0;
    for (int t : occ) n += t;
    return n;
}

bool FockState::collision_free() const {
    for (int t : occ)
        if (t > 1) return false;
    return true;
}

std::vector<int> FockState::mode_list() const {
    std::vector<int> out;
    for (size_t j = 0; j < occ.size(); ++j)
        for (int k = 0; k < occ[j]; ++k) out.push_back(static_cast<int>(j));
    return out;
}

InputConfig::InputConfig(std::vector<int> modes_, int m) : modes(std::move(modes_)) {
    require(!modes.empty(), ErrorCode::invalid_shape, "InputConfig: no input modes");
    std::set<int> seen;
    for (int mode : modes) {
        require(mode >= 0 && mode < m, ErrorCode::invalid_shape,
                "InputConfig: mode index out of range");
        require(seen.insert(mode).second, ErrorCode::invalid_multiset,
                "InputConfig: duplicate input mode");
    }
}

void save_samples(const std::string& path, const std::vector<SampleRecord>& records) {
    std::ofstream f(path);
    require(f.good(), ErrorCode::io_error, "save_samples: cannot open " + path);
    for (const auto& r : records) {
        nlohmann::json j;
        j["t"] = r.trial;
        j["modes"] = r.output.mode_list();
        nlohmann::json occ = nlohmann::json::object();
        for (size_t mode = 0; mode < r.output.occ.size(); ++mode)
            if (r.output.occ[mode] > 0) occ[std::to_string(mode)] = r.output.occ[mode];
        j["occ"] = std::move(occ);
        j["tag"] = r.tag;
        j["kept"] = r.kept;
        f << j.dump() << "\n";
    }
    require(f.good(), ErrorCode::io_error, "save_samples: write failed for " + path);
}

std::vector<SampleRecord> load_samples(const std::string& path, int m) {
    std::ifstream f(path);
    require(f.good(), ErrorCode::io_error, "load_samples: cannot open " + path);
    std::vector<SampleRecord> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::io_error, "load_samples: line " + std::to_string(line_no) +
                                                 ": " + e.what());
        }
        SampleRecord r;
        r.trial = j.at("t").get<int64_t>();
        r.output = FockState(m);
        for (auto it = j.at("occ").begin(); it != j.at("occ").end(); ++it) {
            const int mode = std::stoi(it.key());
            require(mode >= 0 && mode < m, ErrorCode::io_error,
                    "load_samples: mode index out of range at line " + std::to_string(line_no));
            r.output.occ[mode] = it.value().get<int>();
        }
        r.tag = j.at("tag").get<std::string>();
        r.kept = j.at("kept").get<bool>();
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace bosim
