#include "cli.hpp"

#include "bosim/device.hpp"
#include "bosim/nist.hpp"
#include "bosim/parallel.hpp"
#include "bosim/rng.hpp"
#include "bosim/sampling.hpp"
#include "bosim/stats.hpp"
#include "bosim/validation.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>

namespace bosim::cli {
namespace {

std::ofstream open_csv(const std::string& path) {
    std::ofstream f(path);
    require(f.good(), ErrorCode::io_error, "figure: cannot open " + path);
    f << std::setprecision(12);
    return f;
}

struct ModuliState {
    int m = 128;
    int matrices = 100;
    int bins = 60;
    std::vector<int> restricted;
    uint64_t seed = 1;
    std::string out;
};

// Pooled squared-modulus histogram with the Haar marginal as a theory column.
void run_moduli(const ModuliState& s, Context& ctx) {
    StageTimer timer;
    const std::vector<double> pool = haar_moduli_pool(s.m, s.matrices, s.seed, s.restricted);
    const int dim = s.restricted.empty() ? s.m : static_cast<int>(s.restricted.size());
    // The bulk of the Beta(1, dim-1) mass sits below ~6/dim.
    const double hi = std::min(1.0, 6.0 / dim);
    const Histogram hist = histogram(pool, s.bins, 0.0, hi);
    auto f = open_csv(s.out);
    f << "bin_center,density,theory\n";
    for (size_t i = 0; i < hist.density.size(); ++i) {
        const double x = 0.5 * (hist.edges[i] + hist.edges[i + 1]);
        f << x << "," << hist.density[i] << "," << haar_moduli_density(x, dim) << "\n";
    }
    f.close();
    ctx.note(s.out);
    RunManifest man;
    man.command = "figure-moduli";
    man.seed = s.seed;
    man.config = {{"m", s.m},           {"matrices", s.matrices},     {"bins", s.bins},
                  {"restricted", s.restricted}, {"seed", s.seed},     {"out", s.out}};
    man.timings_ms["pool"] = timer.stop_ms();
    man.add_artifact(s.out);
    save_manifest(s.out + ".manifest.json", man);
    ctx.note(s.out + ".manifest.json");
}

struct SimilarityState {
    std::string device;
    std::vector<int> heaters;
    int draws = 50;
    double p_max = 60.0;
    int haar_matrices = 100;
    uint64_t seed = 1;
    std::string out;
};

// Reconfigurability scan: similarity of each input-port column under two
// independent power draws (restricted to the measured modes), averaged over
// all draw pairs, versus active heater count. Barely-reconfigured devices
// score near 1; the fully driven device falls to the Haar Monte Carlo band
// for independent columns.
void run_similarity(const SimilarityState& s, Context& ctx) {
    StageTimer timer;
    const DeviceConfig cfg = load_device_config(require_input_file(s.device));
    const DeviceModel model(cfg);
    std::vector<int> columns(cfg.input_ports.begin(), cfg.input_ports.end());
    const SimilarityReport haar = haar_column_report(
        model.modes(), s.haar_matrices, s.seed, static_cast<int>(columns.size()), cfg.measured);
    auto f = open_csv(s.out);
    f << "active_heaters,mean,sd,haar_mean,haar_sd\n";
    for (size_t hi = 0; hi < s.heaters.size(); ++hi) {
        const int n_active = s.heaters[hi];
        std::vector<ComplexMatrix> us(s.draws);
        parallel_for(static_cast<size_t>(s.draws), ctx.threads, [&](size_t t) {
            Rng rng = Rng::substream(s.seed, StreamId::powers,
                                     1000 * static_cast<size_t>(n_active) + t);
            const std::vector<double> p = model.random_power_vector(n_active, s.p_max, rng);
            us[t] = model.evolve(p).matrix();
        });
        std::vector<double> sims;
        for (int a = 0; a < s.draws; ++a)
            for (int b = a + 1; b < s.draws; ++b) {
                const auto vals = cross_column_similarities(us[a], us[b], columns, cfg.measured);
                sims.insert(sims.end(), vals.begin(), vals.end());
            }
        const auto ms = mean_sd(sims);
        f << n_active << "," << ms.mean << "," << ms.sd << "," << haar.mean << "," << haar.sd
          << "\n";
    }
    f.close();
    ctx.note(s.out);
    RunManifest man;
    man.command = "figure-similarity";
    man.seed = s.seed;
    man.config = {{"device", s.device}, {"heaters", s.heaters}, {"draws", s.draws},
                  {"p_max", s.p_max},   {"seed", s.seed},       {"out", s.out}};
    man.timings_ms["scan"] = timer.stop_ms();
    man.add_artifact(s.out);
    save_manifest(s.out + ".manifest.json", man);
    ctx.note(s.out + ".manifest.json");
}

struct CountersState {
    std::string samples;
    std::string unitary;
    std::vector<int> inputs;
    uint64_t seed = 0;
    std::string out;
};

// Both discrimination counters over the same sample set, trace CSVs with the
// +-3*sqrt(k) band column.
void run_counters(const CountersState& s, Context& ctx) {
    StageTimer timer;
    const UnitaryMatrix u = load_unitary(require_input_file(s.unitary));
    const int m = static_cast<int>(u.matrix().rows());
    const InputConfig input(s.inputs, m);
    std::vector<SampleRecord> records = load_samples(require_input_file(s.samples), m);
    std::vector<SampleRecord> cf;
    cf.reserve(records.size());
    for (const SampleRecord& r : records)
        if (r.output.collision_free() && r.output.photons() == input.photons()) cf.push_back(r);
    const ValidationTrace wk = wk_counter(u, input, cf, ctx.threads);
    const ValidationTrace ck = ck_counter(u, input, records, s.seed, ctx.threads);
    std::filesystem::create_directories(s.out);
    const auto out_path = [&](const std::string& name) {
        return (std::filesystem::path(s.out) / name).string();
    };
    save_trace_csv(out_path("wk_trace.csv"), wk);
    ctx.note(out_path("wk_trace.csv"));
    save_trace_csv(out_path("ck_trace.csv"), ck);
    ctx.note(out_path("ck_trace.csv"));
    RunManifest man;
    man.command = "figure-counters";
    man.seed = s.seed;
    man.config = {{"samples", s.samples}, {"unitary", s.unitary}, {"inputs", s.inputs},
                  {"seed", s.seed},       {"out", s.out}};
    man.timings_ms["counters"] = timer.stop_ms();
    man.add_artifact(out_path("wk_trace.csv"));
    man.add_artifact(out_path("ck_trace.csv"));
    save_manifest(out_path("manifest.json"), man);
    ctx.note(out_path("manifest.json"));
}

struct NistFigureState {
    std::string report;
    std::string out;
};

// Flatten a test report (bare list or an extraction report) to CSV rows.
void run_nist_figure(const NistFigureState& s, Context& ctx) {
    StageTimer timer;
    std::ifstream in(require_input_file(s.report));
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::io_error, std::string("figure: report parse failure: ") + e.what());
    }
    const nlohmann::json& tests = j.is_array() ? j : j.at("nist");
    auto f = open_csv(s.out);
    f << "test,p_value,pass,skipped\n";
    for (const auto& e : tests) {
        const auto ps = e.at("p_values").get<std::vector<double>>();
        const double p = ps.empty() ? 0.0 : *std::min_element(ps.begin(), ps.end());
        f << e.at("test").get<std::string>() << "," << p << ","
          << (e.at("pass").get<bool>() ? 1 : 0) << "," << (e.at("skipped").get<bool>() ? 1 : 0)
          << "\n";
    }
    f.close();
    ctx.note(s.out);
    RunManifest man;
    man.command = "figure-nist";
    man.config = {{"report", s.report}, {"out", s.out}};
    man.timings_ms["emit"] = timer.stop_ms();
    man.add_artifact(s.out);
    save_manifest(s.out + ".manifest.json", man);
    ctx.note(s.out + ".manifest.json");
}

} // namespace

void register_figure(CLI::App& app, Context& ctx) {
    CLI::App* figure = app.add_subcommand("figure", "Emit plot-ready CSV series");
    figure->require_subcommand(1);

    auto ms = std::make_shared<ModuliState>();
    CLI::App* moduli = figure->add_subcommand("moduli", "Pooled |U_ij|^2 histogram vs theory");
    moduli->add_option("--m", ms->m, "mode count");
    moduli->add_option("--matrices", ms->matrices, "number of Haar draws");
    moduli->add_option("--bins", ms->bins, "histogram bins");
    moduli->add_option("--restricted", ms->restricted, "restricted row subset")->delimiter(',');
    moduli->add_option("--seed", ms->seed, "master seed");
    moduli->add_option("--out", ms->out, "output CSV path")->required();
    moduli->callback([ms, &ctx] { run_moduli(*ms, ctx); });

    auto ss = std::make_shared<SimilarityState>();
    CLI::App* sim =
        figure->add_subcommand("similarity", "Cross-draw column similarity vs active heaters");
    sim->add_option("--device", ss->device, "device config JSON")->required();
    sim->add_option("--heaters", ss->heaters, "active heater counts")->required()->delimiter(',');
    sim->add_option("--draws", ss->draws, "power draws per setting");
    sim->add_option("--p-max", ss->p_max, "max heater power (mW)");
    sim->add_option("--haar-matrices", ss->haar_matrices, "Haar reference draws");
    sim->add_option("--seed", ss->seed, "master seed");
    sim->add_option("--out", ss->out, "output CSV path")->required();
    sim->callback([ss, &ctx] { run_similarity(*ss, ctx); });

    auto cs = std::make_shared<CountersState>();
    CLI::App* counters = figure->add_subcommand("counters", "W_k and C_k traces with bands");
    counters->add_option("--samples", cs->samples, "samples JSONL path")->required();
    counters->add_option("--unitary", cs->unitary, "unitary JSON path")->required();
    counters->add_option("--inputs", cs->inputs, "input modes")->required()->delimiter(',');
    counters->add_option("--seed", cs->seed, "tie-break seed");
    counters->add_option("--out", cs->out, "output directory")->required();
    counters->callback([cs, &ctx] { run_counters(*cs, ctx); });

    auto ns = std::make_shared<NistFigureState>();
    CLI::App* nist = figure->add_subcommand("nist", "Test battery verdict table as CSV");
    nist->add_option("--report", ns->report, "test report or extraction report JSON")->required();
    nist->add_option("--out", ns->out, "output CSV path")->required();
    nist->callback([ns, &ctx] { run_nist_figure(*ns, ctx); });
}

} // namespace bosim::cli
