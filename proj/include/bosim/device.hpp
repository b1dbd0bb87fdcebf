#ifndef BOSIM_DEVICE_HPP
#define BOSIM_DEVICE_HPP

#include "bosim/fock.hpp"
#include "bosim/rng.hpp"
#include "bosim/unitary.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bosim {

// Transverse waveguide layout: a triangular lattice whose site positions carry
// independent per-segment offsets (frozen fabrication disorder along z).
struct LatticeGeometry {
    int n_rows = 8;
    int n_cols = 16;
    double pitch_um = 15.0;
    int segments = 64;       // piecewise-constant z-slices
    double l_chip_mm = 60.0;
    double delta_um = 1.5;   // position-modulation amplitude (0.1 * pitch)
    uint64_t seed = 0;

    int modes() const { return n_rows * n_cols; }
};

struct CouplingLaw {
    // Strong nearest-neighbour coupling keeps the heater-induced detunings in
    // the perturbative regime (detuning/coupling < 1); with weaker coupling the
    // heated rows decouple from the bulk at high powers and reconfigurability
    // saturates instead of approaching the Haar ensemble.
    double c0_per_mm = 2.0;          // coupling at distance == pitch
    double lambda_um = 3.0;          // evanescent decay length
    double cutoff_um = 22.5;         // 1.5 * pitch
    double beta_spread_per_mm = 0.1; // static propagation-constant disorder
};

struct HeaterBank {
    int count = 24;
    double sigma_um = 15.0;      // Gaussian influence width (one pitch)
    double alpha_peak = 0.03;    // rad / (mW * mm) at zero distance
    double gap_um = 15.0;        // heater plane height above the top row
    std::vector<int> active;     // active subset (indices into 0..count-1)
};

struct NoiseModel {
    double indistinguishability = 0.83; // pairwise HOM visibility proxy
    double g2 = 0.04;                   // multi-photon contamination
    bool use_g2 = false;                // extra-photon injection is opt-in
    std::vector<double> eta;            // per-mode detection efficiency

    void validate(int m) const;
};

struct DeviceConfig {
    LatticeGeometry geometry;
    CouplingLaw coupling;
    HeaterBank heaters;
    std::vector<int> input_ports;                 // fan-in, injective, <= 20
    std::vector<int> measured;                    // measured output subset
    std::vector<std::array<int, 2>> detector_map; // mode -> {detector, time_bin}; -1 unmeasured
    NoiseModel noise;
};

DeviceConfig default_device_config(uint64_t seed);
void save_device_config(const std::string& path, const DeviceConfig& cfg);
DeviceConfig load_device_config(const std::string& path);

struct ClickRecord {
    std::vector<int> modes;                      // clicked measured modes, ascending
    std::vector<std::pair<int, int>> clicks;     // (detector, time_bin), ascending
};

// Immutable device: precomputes per-segment site coordinates, heater influence
// vectors, and static propagation-constant detunings from the config seed.
class DeviceModel {
  public:
    explicit DeviceModel(DeviceConfig cfg);

    const DeviceConfig& config() const { return cfg_; }
    int modes() const { return cfg_.geometry.modes(); }
    int segments() const { return cfg_.geometry.segments; }
    // Influence of heater h on mode i, rad/(mW*mm).
    double heater_influence(int h, int i) const { return alpha_[h][i]; }
    const std::vector<double>& beta() const { return beta_; }
    const std::vector<std::array<double, 2>>& coords(int segment) const;

    // Real-symmetric coupling Hamiltonian of one z-slice under power vector p.
    ComplexMatrix build_hamiltonian(int segment, const std::vector<double>& p) const;

    // Ordered product over segments, input facet first (later slices multiply
    // on the left). Deterministic in (config seed, p).
    UnitaryMatrix evolve(const std::vector<double>& p) const;
    // Same product with each slice split into `subdivisions` equal sub-slices;
    // used by the z-refinement convergence check.
    UnitaryMatrix evolve_refined(const std::vector<double>& p, int subdivisions) const;

    std::vector<double> random_power_vector(int n_active, double p_max_mw, Rng& rng) const;
    std::vector<double> random_power_vector(int n_active, double p_max_mw, uint64_t seed) const;

    // Detector/multiplexing model: drops photons in unmeasured modes, applies
    // per-mode efficiency, maps surviving occupied modes to threshold clicks.
    // Returns nullopt (discard) when the click count != fold.
    std::optional<ClickRecord> apply_detector_model(const FockState& output, int fold,
                                                    Rng& rng) const;

  private:
    DeviceConfig cfg_;
    std::vector<std::vector<std::array<double, 2>>> coords_; // [segment][site]{x,y} um
    std::vector<std::vector<double>> alpha_;                 // [heater][mode]
    std::vector<double> beta_;                               // [mode] 1/mm
};

} // namespace bosim

#endif
