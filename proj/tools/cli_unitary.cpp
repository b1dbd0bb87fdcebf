#include "cli.hpp"

#include "bosim/device.hpp"
#include "bosim/unitary.hpp"

#include <json.hpp>

#include <fstream>
#include <memory>

namespace bosim::cli {
namespace {

struct HaarState {
    int m = 16;
    uint64_t seed = 1;
    std::string out;
};

void run_haar(const HaarState& s, Context& ctx) {
    StageTimer timer;
    const UnitaryMatrix u = haar_unitary(s.m, s.seed);
    save_unitary(s.out, u);
    ctx.note(s.out);
    RunManifest man;
    man.command = "haar";
    man.seed = s.seed;
    man.config = {{"m", s.m}, {"seed", s.seed}, {"out", s.out}};
    man.timings_ms["haar"] = timer.stop_ms();
    man.add_artifact(s.out);
    const std::string mpath = s.out + ".manifest.json";
    save_manifest(mpath, man);
    ctx.note(mpath);
}

struct EvolveState {
    std::string device;
    std::string powers_file;
    int active = -1; // -1 = all configured active heaters
    double p_max = 30.0;
    int subdiv = 1;
    uint64_t seed = 1;
    std::string out;
};

void run_evolve(const EvolveState& s, Context& ctx) {
    StageTimer timer;
    const DeviceConfig cfg = load_device_config(require_input_file(s.device));
    const DeviceModel model(cfg);
    std::vector<double> p;
    if (!s.powers_file.empty()) {
        std::ifstream f(require_input_file(s.powers_file));
        nlohmann::json j;
        try {
            f >> j;
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::io_error, std::string("powers file parse failure: ") + e.what());
        }
        p = j.get<std::vector<double>>();
    } else {
        const int n_active =
            s.active < 0 ? static_cast<int>(cfg.heaters.active.size()) : s.active;
        p = model.random_power_vector(n_active, s.p_max, s.seed);
    }
    const double build_ms = timer.stop_ms();
    timer.restart();
    const UnitaryMatrix u = s.subdiv > 1 ? model.evolve_refined(p, s.subdiv) : model.evolve(p);
    const double evolve_ms = timer.stop_ms();
    save_unitary(s.out, u);
    ctx.note(s.out);
    RunManifest man;
    man.command = "evolve";
    man.seed = s.seed;
    man.config = {{"device", s.device}, {"seed", s.seed},   {"powers", p},
                  {"subdiv", s.subdiv}, {"p_max", s.p_max}, {"out", s.out}};
    man.timings_ms["setup"] = build_ms;
    man.timings_ms["evolve"] = evolve_ms;
    man.add_artifact(s.out);
    const std::string mpath = s.out + ".manifest.json";
    save_manifest(mpath, man);
    ctx.note(mpath);
}

struct DeviceConfigState {
    uint64_t seed = 1;
    std::string out;
};

void run_device_config(const DeviceConfigState& s, Context& ctx) {
    StageTimer timer;
    save_device_config(s.out, default_device_config(s.seed));
    ctx.note(s.out);
    RunManifest man;
    man.command = "device-config";
    man.seed = s.seed;
    man.config = {{"seed", s.seed}, {"out", s.out}};
    man.timings_ms["emit"] = timer.stop_ms();
    man.add_artifact(s.out);
    const std::string mpath = s.out + ".manifest.json";
    save_manifest(mpath, man);
    ctx.note(mpath);
}

} // namespace

void register_unitary(CLI::App& app, Context& ctx) {
    auto hs = std::make_shared<HaarState>();
    CLI::App* haar = app.add_subcommand("haar", "Generate a Haar-random unitary as JSON");
    haar->add_option("--m", hs->m, "mode count")->required();
    haar->add_option("--seed", hs->seed, "master seed");
    haar->add_option("--out", hs->out, "output unitary JSON path")->required();
    haar->callback([hs, &ctx] { run_haar(*hs, ctx); });

    auto es = std::make_shared<EvolveState>();
    CLI::App* evolve =
        app.add_subcommand("evolve", "Propagate through the device model under heater powers");
    evolve->add_option("--device", es->device, "device config JSON")->required();
    evolve->add_option("--powers", es->powers_file, "JSON array of per-heater powers (mW)");
    evolve->add_option("--active", es->active, "active heater count for random powers");
    evolve->add_option("--p-max", es->p_max, "max random power (mW)");
    evolve->add_option("--subdiv", es->subdiv, "sub-slices per segment");
    evolve->add_option("--seed", es->seed, "master seed (random powers)");
    evolve->add_option("--out", es->out, "output unitary JSON path")->required();
    evolve->callback([es, &ctx] { run_evolve(*es, ctx); });

    auto ds = std::make_shared<DeviceConfigState>();
    CLI::App* dev = app.add_subcommand("device-config", "Emit the default device configuration");
    dev->add_option("--seed", ds->seed, "disorder seed");
    dev->add_option("--out", ds->out, "output config JSON path")->required();
    dev->callback([ds, &ctx] { run_device_config(*ds, ctx); });
}

} // namespace bosim::cli
