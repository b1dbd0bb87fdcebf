#include "bosim/device.hpp"
#include "bosim/error.hpp"
#include "bosim/log.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace bosim {

void NoiseModel::validate(int m) const {
    require(indistinguishability >= 0.0 && indistinguishability <= 1.0,
            ErrorCode::invalid_config, "NoiseModel: indistinguishability outside [0,1]");
    require(g2 >= 0.0 && g2 < 1.0, ErrorCode::invalid_config, "NoiseModel: g2 outside [0,1)");
    require(eta.size() == static_cast<size_t>(m), ErrorCode::invalid_config,
            "NoiseModel: eta length must equal mode count");
    for (double e : eta)
        require(e >= 0.0 && e <= 1.0, ErrorCode::invalid_config,
                "NoiseModel: efficiency outside [0,1]");
}

DeviceConfig default_device_config(uint64_t seed) {
    DeviceConfig cfg;
    cfg.geometry.seed = seed;
    // 17 usable heaters of 24, listed in a low-discrepancy order so that any
    // prefix of the list covers the chip width roughly uniformly.
    cfg.heaters.active = {0, 14, 5, 20, 11, 2, 16, 7, 22, 13, 4, 18, 10, 1, 15, 6, 12};
    // 20 fan-in ports on the two central rows, columns 3..12.
    for (int r : {3, 4})
        for (int c = 3; c <= 12; ++c) cfg.input_ports.push_back(r * cfg.geometry.n_cols + c);
    // 108 measured modes; detector d multiplexes modes (10+2d, 10+2d+1) into
    // time bins 0 and 1.
    const int m = cfg.geometry.modes();
    cfg.detector_map.assign(m, {-1, -1});
    for (int j = 10; j < 118; ++j) {
        cfg.measured.push_back(j);
        cfg.detector_map[j] = {(j - 10) / 2, (j - 10) % 2};
    }
    cfg.noise.eta.assign(m, 1.0);
    return cfg;
}

namespace {

// Base triangular lattice: row r is offset half a pitch on odd rows, rows are
// spaced by pitch * sqrt(3)/2.
std::array<double, 2> base_position(const LatticeGeometry& g, int site) {
    const int r = site / g.n_cols;
    const int c = site % g.n_cols;
    const double x = (c + 0.5 * (r % 2)) * g.pitch_um;
    const double y = r * g.pitch_um * std::sqrt(3.0) / 2.0;
    return {x, y};
}

void check_config(const DeviceConfig& cfg) {
    const auto& g = cfg.geometry;
    require(g.n_rows >= 1 && g.n_cols >= 1, ErrorCode::invalid_config,
            "DeviceConfig: lattice dimensions must be positive");
    require(g.pitch_um > 0.0 && g.l_chip_mm > 0.0 && g.delta_um >= 0.0,
            ErrorCode::invalid_config, "DeviceConfig: geometry scales must be positive");
    require(g.segments >= 1, ErrorCode::invalid_config, "DeviceConfig: segments must be >= 1");
    require(cfg.coupling.lambda_um > 0.0 && cfg.coupling.cutoff_um > 0.0,
            ErrorCode::invalid_config, "DeviceConfig: coupling law scales must be positive");
    require(cfg.heaters.count >= 0, ErrorCode::invalid_config,
            "DeviceConfig: heater count must be non-negative");
    std::set<int> seen_active;
    for (int h : cfg.heaters.active) {
        require(h >= 0 && h < cfg.heaters.count, ErrorCode::invalid_config,
                "DeviceConfig: active heater index out of range");
        require(seen_active.insert(h).second, ErrorCode::invalid_config,
                "DeviceConfig: duplicate active heater");
    }
    const int m = g.modes();
    require(cfg.input_ports.size() <= 20, ErrorCode::invalid_config,
            "DeviceConfig: more than 20 fan-in ports");
    std::set<int> seen_in;
    for (int i : cfg.input_ports) {
        require(i >= 0 && i < m, ErrorCode::invalid_config,
                "DeviceConfig: input port out of range");
        require(seen_in.insert(i).second, ErrorCode::invalid_config,
                "DeviceConfig: input port map not injective");
    }
    require(cfg.detector_map.size() == static_cast<size_t>(m), ErrorCode::invalid_config,
            "DeviceConfig: detector map must cover all modes");
    std::set<int> measured(cfg.measured.begin(), cfg.measured.end());
    require(measured.size() == cfg.measured.size(), ErrorCode::invalid_config,
            "DeviceConfig: duplicate measured mode");
    std::set<std::pair<int, int>> used_bins;
    std::vector<int> per_detector;
    for (int j = 0; j < m; ++j) {
        const auto [det, bin] = cfg.detector_map[j];
        if (measured.count(j)) {
            require(det >= 0 && (bin == 0 || bin == 1), ErrorCode::invalid_config,
                    "DeviceConfig: measured mode lacks a detector assignment");
            require(used_bins.insert({det, bin}).second, ErrorCode::invalid_config,
                    "DeviceConfig: (detector, bin) assigned twice");
            if (det >= static_cast<int>(per_detector.size())) per_detector.resize(det + 1, 0);
            require(++per_detector[det] <= 2, ErrorCode::invalid_config,
                    "DeviceConfig: detector multiplexes more than 2 modes");
        } else {
            require(det == -1, ErrorCode::invalid_config,
                    "DeviceConfig: unmeasured mode has a detector assignment");
        }
    }
    cfg.noise.validate(m);
}

} // namespace

DeviceModel::DeviceModel(DeviceConfig cfg) : cfg_(std::move(cfg)) {
    check_config(cfg_);
    const auto& g = cfg_.geometry;
    const int m = g.modes();

    // Frozen fabrication disorder, all drawn from the device substream so the
    // model is a pure function of the config.
    Rng rng = Rng::substream(g.seed, StreamId::device, 0);
    coords_.resize(g.segments);
    for (int s = 0; s < g.segments; ++s) {
        coords_[s].resize(m);
        for (int i = 0; i < m; ++i) {
            auto pos = base_position(g, i);
            pos[0] += rng.uniform(-g.delta_um, g.delta_um);
            pos[1] += rng.uniform(-g.delta_um, g.delta_um);
            coords_[s][i] = pos;
        }
    }
    beta_.resize(m);
    const double w = cfg_.coupling.beta_spread_per_mm;
    for (int i = 0; i < m; ++i) beta_[i] = rng.uniform(-w, w);

    // Heater influence from undisplaced positions: thermal profiles are
    // micrometer-insensitive. Heaters sit gap_um above the top row, spread
    // evenly across the array width.
    alpha_.assign(cfg_.heaters.count, std::vector<double>(m, 0.0));
    const double y_top = (g.n_rows - 1) * g.pitch_um * std::sqrt(3.0) / 2.0 + cfg_.heaters.gap_um;
    const double width = g.n_cols * g.pitch_um;
    for (int h = 0; h < cfg_.heaters.count; ++h) {
        const double xh = (h + 0.5) * width / std::max(1, cfg_.heaters.count);
        for (int i = 0; i < m; ++i) {
            const auto pos = base_position(g, i);
            const double dx = pos[0] - xh;
            const double dy = pos[1] - y_top;
            const double d2 = dx * dx + dy * dy;
            const double s2 = cfg_.heaters.sigma_um * cfg_.heaters.sigma_um;
            alpha_[h][i] = cfg_.heaters.alpha_peak * std::exp(-d2 / (2.0 * s2));
        }
    }
}

const std::vector<std::array<double, 2>>& DeviceModel::coords(int segment) const {
    require(segment >= 0 && segment < segments(), ErrorCode::invalid_subset,
            "DeviceModel: segment index out of range");
    return coords_[segment];
}

ComplexMatrix DeviceModel::build_hamiltonian(int segment, const std::vector<double>& p) const {
    require(segment >= 0 && segment < segments(), ErrorCode::invalid_subset,
            "build_hamiltonian: segment index out of range");
    require(p.size() == static_cast<size_t>(cfg_.heaters.count), ErrorCode::shape_mismatch,
            "build_hamiltonian: power vector length must equal heater count");
    for (double pw : p)
        require(pw >= 0.0, ErrorCode::invalid_power, "build_hamiltonian: negative power");
    const int m = modes();
    const auto& pos = coords_[segment];
    ComplexMatrix h = ComplexMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double dx = pos[i][0] - pos[j][0];
            const double dy = pos[i][1] - pos[j][1];
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d > cfg_.coupling.cutoff_um) continue;
            const double c =
                cfg_.coupling.c0_per_mm *
                std::exp(-(d - cfg_.geometry.pitch_um) / cfg_.coupling.lambda_um);
            h(i, j) = c;
            h(j, i) = c;
        }
        double diag = beta_[i];
        for (int hh = 0; hh < cfg_.heaters.count; ++hh) diag += alpha_[hh][i] * p[hh];
        h(i, i) = diag;
    }
    return h;
}

UnitaryMatrix DeviceModel::evolve(const std::vector<double>& p) const {
    return evolve_refined(p, 1);
}

UnitaryMatrix DeviceModel::evolve_refined(const std::vector<double>& p, int subdivisions) const {
    require(subdivisions >= 1, ErrorCode::invalid_shape,
            "evolve_refined: subdivisions must be >= 1");
    const int m = modes();
    const int k = segments();
    const double dz = cfg_.geometry.l_chip_mm / (k * subdivisions);
    ComplexMatrix u = ComplexMatrix::Identity(m, m);
    for (int s = 0; s < k; ++s) {
        const ComplexMatrix h = build_hamiltonian(s, p);
        const ComplexMatrix slice = expm_hermitian(h, dz).matrix();
        for (int r = 0; r < subdivisions; ++r) u = slice * u;
    }
    return UnitaryMatrix(std::move(u), "device");
}

std::vector<double> DeviceModel::random_power_vector(int n_active, double p_max_mw,
                                                     Rng& rng) const {
    require(n_active >= 0 && n_active <= cfg_.heaters.count, ErrorCode::invalid_subset,
            "random_power_vector: n_active exceeds heater count");
    require(n_active <= static_cast<int>(cfg_.heaters.active.size()), ErrorCode::invalid_subset,
            "random_power_vector: n_active exceeds active subset");
    require(p_max_mw >= 0.0, ErrorCode::invalid_power, "random_power_vector: negative p_max");
    std::vector<double> p(cfg_.heaters.count, 0.0);
    for (int idx = 0; idx < n_active; ++idx)
        p[cfg_.heaters.active[idx]] = rng.uniform(0.0, p_max_mw);
    return p;
}

std::vector<double> DeviceModel::random_power_vector(int n_active, double p_max_mw,
                                                     uint64_t seed) const {
    Rng rng = Rng::substream(seed, StreamId::powers, 0);
    return random_power_vector(n_active, p_max_mw, rng);
}

std::optional<ClickRecord> DeviceModel::apply_detector_model(const FockState& output, int fold,
                                                             Rng& rng) const {
    require(output.modes() == modes(), ErrorCode::shape_mismatch,
            "apply_detector_model: output length must equal mode count");
    ClickRecord rec;
    for (int j = 0; j < modes(); ++j) {
        const int t = output.occ[j];
        if (t == 0) continue;
        const auto [det, bin] = cfg_.detector_map[j];
        if (det < 0) continue; // unmeasured: photons dropped
        int survivors = 0;
        for (int ph = 0; ph < t; ++ph)
            if (rng.bernoulli(cfg_.noise.eta[j])) ++survivors;
        if (survivors >= 1) { // threshold click
            rec.modes.push_back(j);
            rec.clicks.emplace_back(det, bin);
        }
    }
    if (static_cast<int>(rec.modes.size()) != fold) return std::nullopt;
    std::sort(rec.clicks.begin(), rec.clicks.end());
    return rec;
}

// --- config JSON -----------------------------------------------------------

void save_device_config(const std::string& path, const DeviceConfig& cfg) {
    nlohmann::json j;
    j["geometry"] = {{"n_rows", cfg.geometry.n_rows},   {"n_cols", cfg.geometry.n_cols},
                     {"pitch_um", cfg.geometry.pitch_um}, {"segments", cfg.geometry.segments},
                     {"l_chip_mm", cfg.geometry.l_chip_mm}, {"delta_um", cfg.geometry.delta_um},
                     {"seed", cfg.geometry.seed}};
    j["coupling"] = {{"c0_per_mm", cfg.coupling.c0_per_mm},
                     {"lambda_um", cfg.coupling.lambda_um},
                     {"cutoff_um", cfg.coupling.cutoff_um},
                     {"beta_spread_per_mm", cfg.coupling.beta_spread_per_mm}};
    j["heaters"] = {{"count", cfg.heaters.count},       {"sigma_um", cfg.heaters.sigma_um},
                    {"alpha_peak", cfg.heaters.alpha_peak}, {"gap_um", cfg.heaters.gap_um},
                    {"active", cfg.heaters.active}};
    j["input_ports"] = cfg.input_ports;
    j["measured"] = cfg.measured;
    nlohmann::json dmap = nlohmann::json::object();
    for (size_t mode = 0; mode < cfg.detector_map.size(); ++mode)
        if (cfg.detector_map[mode][0] >= 0)
            dmap[std::to_string(mode)] = {cfg.detector_map[mode][0], cfg.detector_map[mode][1]};
    j["detector_map"] = std::move(dmap);
    j["noise"] = {{"indistinguishability", cfg.noise.indistinguishability},
                  {"g2", cfg.noise.g2},
                  {"use_g2", cfg.noise.use_g2},
                  {"eta", cfg.noise.eta}};
    std::ofstream f(path);
    require(f.good(), ErrorCode::io_error, "save_device_config: cannot open " + path);
    f << j.dump(2) << "\n";
    require(f.good(), ErrorCode::io_error, "save_device_config: write failed");
}

DeviceConfig load_device_config(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), ErrorCode::io_error, "load_device_config: cannot open " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::io_error,
                    std::string("load_device_config: parse failure: ") + e.what());
    }
    DeviceConfig cfg;
    try {
        const auto& g = j.at("geometry");
        cfg.geometry.n_rows = g.at("n_rows").get<int>();
        cfg.geometry.n_cols = g.at("n_cols").get<int>();
        cfg.geometry.pitch_um = g.at("pitch_um").get<double>();
        cfg.geometry.segments = g.at("segments").get<int>();
        cfg.geometry.l_chip_mm = g.at("l_chip_mm").get<double>();
        cfg.geometry.delta_um = g.at("delta_um").get<double>();
        cfg.geometry.seed = g.at("seed").get<uint64_t>();
        const auto& c = j.at("coupling");
        cfg.coupling.c0_per_mm = c.at("c0_per_mm").get<double>();
        cfg.coupling.lambda_um = c.at("lambda_um").get<double>();
        cfg.coupling.cutoff_um = c.at("cutoff_um").get<double>();
        cfg.coupling.beta_spread_per_mm = c.at("beta_spread_per_mm").get<double>();
        const auto& h = j.at("heaters");
        cfg.heaters.count = h.at("count").get<int>();
        cfg.heaters.sigma_um = h.at("sigma_um").get<double>();
        cfg.heaters.alpha_peak = h.at("alpha_peak").get<double>();
        cfg.heaters.gap_um = h.at("gap_um").get<double>();
        cfg.heaters.active = h.at("active").get<std::vector<int>>();
        cfg.input_ports = j.at("input_ports").get<std::vector<int>>();
        cfg.measured = j.at("measured").get<std::vector<int>>();
        cfg.detector_map.assign(cfg.geometry.modes(), {-1, -1});
        for (auto it = j.at("detector_map").begin(); it != j.at("detector_map").end(); ++it) {
            const int mode = std::stoi(it.key());
            require(mode >= 0 && mode < cfg.geometry.modes(), ErrorCode::invalid_config,
                    "load_device_config: detector map mode out of range");
            cfg.detector_map[mode] = {it.value()[0].get<int>(), it.value()[1].get<int>()};
        }
        const auto& n = j.at("noise");
        cfg.noise.indistinguishability = n.at("indistinguishability").get<double>();
        cfg.noise.g2 = n.at("g2").get<double>();
        cfg.noise.use_g2 = n.at("use_g2").get<bool>();
        cfg.noise.eta = n.at("eta").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::io_error,
                    std::string("load_device_config: missing/invalid field: ") + e.what());
    }
    check_config(cfg);
    return cfg;
}

} // namespace bosim
