#ifndef BOSIM_FOCK_HPP
#define BOSIM_FOCK_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace bosim {

// Photon occupation numbers over m modes.
struct FockState {
    std::vector<int> occ;

    FockState() = default;
    explicit FockState(int m) : occ(m, 0) {}
    static FockState from_modes(int m, const std::vector<int>& modes);

    int modes() const { return static_cast<int>(occ.size()); }
    int photons() const;
    bool collision_free() const;
    // Occupied mode indices in ascending order, repeated per photon.
    std::vector<int> mode_list() const;
};

// Collision-free input: n distinct mode indices.
struct InputConfig {
    std::vector<int> modes;

    InputConfig() = default;
    InputConfig(std::vector<int> modes_, int m);

    int photons() const { return static_cast<int>(modes.size()); }
};

struct SampleRecord {
    int64_t trial = 0;
    FockState output;
    std::string tag; // bs | dist | uniform | mixture
    bool kept = true;
};

// JSONL: {"t": int, "modes": [int], "occ": {"mode": count}, "tag": str, "kept": bool}
void save_samples(const std::string& path, const std::vector<SampleRecord>& records);
std::vector<SampleRecord> load_samples(const std::string& path, int m);

} // namespace bosim

#endif
