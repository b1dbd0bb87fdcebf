#include "cli.hpp"

#include "bosim/bitstream.hpp"
#include "bosim/device.hpp"
#include "bosim/extraction.hpp"
#include "bosim/rng.hpp"
#include "bosim/sampling.hpp"
#include "bosim/unitary.hpp"
#include "bosim/validation.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace bosim::cli {
namespace {

struct SourceSpec {
    std::string type; // haar | device | file
    int m = 16;                // haar
    std::string path;          // device config or unitary file
    int active_heaters = -1;   // device (-1 = all configured active)
    double p_max = 30.0;       // device
};

struct ExperimentConfig {
    uint64_t seed = 1;
    int n = 3;
    SourceSpec source;
    std::vector<int> inputs;
    int64_t events = 10000;
    double raw_draw_factor = 2.0;
    int block_size = 8;
    double p_th = 0.01;
    std::string sampler = "bs"; // test hook: uniform/distinguishable exercise the gate
    nlohmann::json raw;
};

ExperimentConfig parse_experiment(const std::string& path) {
    std::ifstream f(require_input_file(path));
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::invalid_config,
                    std::string("experiment config parse failure: ") + e.what());
    }
    ExperimentConfig cfg;
    cfg.raw = j;
    try {
        cfg.seed = j.at("seed").get<uint64_t>();
        cfg.n = j.at("n").get<int>();
        const nlohmann::json& src = j.at("source");
        cfg.source.type = src.at("type").get<std::string>();
        if (cfg.source.type == "haar") {
            cfg.source.m = src.at("m").get<int>();
        } else if (cfg.source.type == "device") {
            cfg.source.path = src.at("config").get<std::string>();
            if (src.contains("active_heaters"))
                cfg.source.active_heaters = src.at("active_heaters").get<int>();
            if (src.contains("p_max")) cfg.source.p_max = src.at("p_max").get<double>();
        } else if (cfg.source.type == "file") {
            cfg.source.path = src.at("path").get<std::string>();
        } else {
            throw Error(ErrorCode::invalid_config, "unknown source type: " + cfg.source.type);
        }
        cfg.inputs = j.at("inputs").get<std::vector<int>>();
        if (j.contains("events")) cfg.events = j.at("events").get<int64_t>();
        if (j.contains("raw_draw_factor"))
            cfg.raw_draw_factor = j.at("raw_draw_factor").get<double>();
        if (j.contains("block_size")) cfg.block_size = j.at("block_size").get<int>();
        if (j.contains("p_th")) cfg.p_th = j.at("p_th").get<double>();
        if (j.contains("sampler")) cfg.sampler = j.at("sampler").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::invalid_config,
                    std::string("experiment config field error: ") + e.what());
    }
    require(cfg.n >= 1 && cfg.n <= 4, ErrorCode::invalid_config,
            "experiment: n must be in 1..4");
    require(static_cast<int>(cfg.inputs.size()) == cfg.n, ErrorCode::invalid_config,
            "experiment: need exactly n input modes");
    require(cfg.events >= 100, ErrorCode::invalid_config, "experiment: events must be >= 100");
    require(cfg.raw_draw_factor >= 1.0, ErrorCode::invalid_config,
            "experiment: raw_draw_factor must be >= 1");
    require(cfg.sampler == "bs" || cfg.sampler == "uniform" || cfg.sampler == "distinguishable",
            ErrorCode::invalid_config, "experiment: unknown sampler " + cfg.sampler);
    return cfg;
}

struct PipelineState {
    std::string config;
    std::optional<uint64_t> seed_override;
    std::string out;
};

nlohmann::json trace_summary(const ValidationTrace& t) {
    nlohmann::json j;
    j["events"] = t.counter.size();
    j["final"] = t.counter.empty() ? 0 : t.counter.back();
    j["band"] = t.band.empty() ? 0.0 : t.band.back();
    j["skipped"] = t.skipped;
    j["null"] = t.null_tag;
    j["rejected"] = t.rejects_null();
    return j;
}

void run_pipeline(const PipelineState& s, Context& ctx) {
    ExperimentConfig cfg = parse_experiment(s.config);
    if (s.seed_override) cfg.seed = *s.seed_override;
    std::filesystem::create_directories(s.out);
    const auto out_path = [&](const std::string& name) {
        return (std::filesystem::path(s.out) / name).string();
    };
    RunManifest man;
    man.command = "pipeline";
    man.seed = cfg.seed;
    man.config = cfg.raw;
    man.config["seed"] = cfg.seed;
    man.config["out"] = s.out;
    const auto keep = [&](const std::string& path) {
        ctx.note(path);
        man.add_artifact(path);
    };

    // Stage 1: interferometer.
    StageTimer timer;
    std::optional<DeviceModel> model;
    std::optional<UnitaryMatrix> u;
    if (cfg.source.type == "haar") {
        u = haar_unitary(cfg.source.m, cfg.seed);
    } else if (cfg.source.type == "device") {
        model.emplace(load_device_config(require_input_file(cfg.source.path)));
        const int n_active = cfg.source.active_heaters < 0
                                 ? static_cast<int>(model->config().heaters.active.size())
                                 : cfg.source.active_heaters;
        Rng powers_rng = Rng::substream(cfg.seed, StreamId::powers, 0);
        const std::vector<double> p =
            model->random_power_vector(n_active, cfg.source.p_max, powers_rng);
        man.config["powers"] = p;
        u = model->evolve(p);
    } else {
        u = load_unitary(require_input_file(cfg.source.path));
    }
    const int m = static_cast<int>(u->matrix().rows());
    const InputConfig input(cfg.inputs, m);
    man.timings_ms["unitary"] = timer.stop_ms();
    save_unitary(out_path("unitary.json"), *u);
    keep(out_path("unitary.json"));

    // Stage 2: sampling plus detector model, post-selected on fold-n clicks.
    timer.restart();
    const int64_t raw_draws =
        static_cast<int64_t>(std::ceil(static_cast<double>(cfg.events) * cfg.raw_draw_factor));
    std::vector<SampleRecord> raw;
    if (cfg.sampler == "bs") {
        raw = sample_bs(*u, input, raw_draws, cfg.seed, ctx.threads);
    } else if (cfg.sampler == "uniform") {
        raw = sample_uniform(m, cfg.n, raw_draws, cfg.seed, ctx.threads);
    } else {
        raw = sample_distinguishable(*u, input, raw_draws, cfg.seed, ctx.threads);
    }
    std::vector<SampleRecord> accepted;
    accepted.reserve(cfg.events);
    for (const SampleRecord& r : raw) {
        if (static_cast<int64_t>(accepted.size()) == cfg.events) break;
        if (model) {
            Rng rng = Rng::substream(cfg.seed, StreamId::detector, static_cast<uint64_t>(r.trial));
            const auto click = model->apply_detector_model(r.output, cfg.n, rng);
            if (!click) continue;
            SampleRecord kept = r;
            kept.output = FockState::from_modes(m, click->modes);
            accepted.push_back(std::move(kept));
        } else if (r.output.collision_free() && r.output.photons() == cfg.n) {
            accepted.push_back(r);
        }
    }
    require(static_cast<int64_t>(accepted.size()) == cfg.events, ErrorCode::insufficient_data,
            "pipeline: only " + std::to_string(accepted.size()) + " of " +
                std::to_string(cfg.events) +
                " requested events were accepted; raise raw_draw_factor");
    man.timings_ms["sampling"] = timer.stop_ms();
    save_samples(out_path("samples.jsonl"), accepted);
    keep(out_path("samples.jsonl"));

    // Stage 3: validation counters on the accepted events.
    timer.restart();
    const ValidationTrace wk = wk_counter(*u, input, accepted, ctx.threads);
    const ValidationTrace ck = ck_counter(*u, input, accepted, cfg.seed, ctx.threads);
    man.timings_ms["validation"] = timer.stop_ms();
    save_trace_csv(out_path("wk_trace.csv"), wk);
    keep(out_path("wk_trace.csv"));
    save_trace_csv(out_path("ck_trace.csv"), ck);
    keep(out_path("ck_trace.csv"));
    const bool gate = wk.rejects_null() && ck.rejects_null();

    nlohmann::json report;
    report["seed"] = cfg.seed;
    report["n"] = cfg.n;
    report["m"] = m;
    report["inputs"] = cfg.inputs;
    report["events"] = cfg.events;
    report["sampler"] = cfg.sampler;
    report["source"] = cfg.raw.at("source");
    report["wk"] = trace_summary(wk);
    report["ck"] = trace_summary(ck);
    report["gate_passed"] = gate;
    report["emitted_bits"] = 0;
    report["extraction"] = nullptr;

    // Stage 4: randomness extraction, gated on both counters rejecting their
    // nulls; a refused gate emits no bit files.
    if (gate) {
        timer.restart();
        const ExtractionOutput res =
            run_extraction(accepted, m, cfg.block_size, cfg.p_th, ctx.threads);
        man.timings_ms["extraction"] = timer.stop_ms();
        save_bitstream(out_path("vn.bin"), res.vn);
        keep(out_path("vn.bin"));
        keep(out_path("vn.bin.json"));
        save_bitstream(out_path("hashed.bin"), res.hashed);
        keep(out_path("hashed.bin"));
        keep(out_path("hashed.bin.json"));
        save_extraction_report(out_path("extraction_report.json"), res.report);
        keep(out_path("extraction_report.json"));
        report["emitted_bits"] = res.report.hashed_length;
        nlohmann::json ext;
        ext["raw_length"] = res.report.raw_length;
        ext["vn_length"] = res.report.vn_length;
        ext["hashed_length"] = res.report.hashed_length;
        ext["h_min"] = res.report.h_min;
        ext["h_min_block"] = res.report.h_min_block;
        ext["hash_block_len"] = res.report.hash_block_len;
        ext["bits_per_trial"] = res.report.bits_per_trial;
        ext["all_computed_pass"] = res.report.all_computed_pass;
        nlohmann::json tests = nlohmann::json::array();
        for (const TestResult& r : res.report.nist) {
            nlohmann::json e;
            e["test"] = r.name;
            e["p_values"] = r.p_values;
            e["pass"] = r.pass;
            e["skipped"] = r.skipped;
            tests.push_back(std::move(e));
        }
        ext["nist"] = std::move(tests);
        report["extraction"] = std::move(ext);
    }

    {
        std::ofstream f(out_path("pipeline_report.json"));
        require(f.good(), ErrorCode::io_error, "pipeline: cannot open report");
        f << report.dump(2) << "\n";
        require(f.good(), ErrorCode::io_error, "pipeline: report write failed");
    }
    ctx.note(out_path("pipeline_report.json"));
    man.add_artifact(out_path("pipeline_report.json"));
    save_manifest(out_path("manifest.json"), man);
    ctx.note(out_path("manifest.json"));

    std::cout << "wk: final=" << report["wk"]["final"] << " rejected=" << wk.rejects_null()
              << "\nck: final=" << report["ck"]["final"] << " rejected=" << ck.rejects_null()
              << "\ngate " << (gate ? "passed" : "REFUSED") << "\n";
    if (gate) {
        std::cout << "hashed bits: " << report["extraction"]["hashed_length"]
                  << " (all computed tests pass: " << report["extraction"]["all_computed_pass"]
                  << ")\n";
    } else {
        throw ValidationFailure("validation gate refused bit emission (wk rejected=" +
                                std::string(wk.rejects_null() ? "true" : "false") +
                                ", ck rejected=" +
                                std::string(ck.rejects_null() ? "true" : "false") + ")");
    }
}

} // namespace

void register_pipeline(CLI::App& app, Context& ctx) {
    auto ps = std::make_shared<PipelineState>();
    CLI::App* pipe = app.add_subcommand(
        "pipeline", "Full run: unitary, sampling, validation gate, randomness extraction");
    pipe->add_option("--config", ps->config, "experiment config JSON")->required();
    pipe->add_option("--seed", ps->seed_override, "override the config seed");
    pipe->add_option("--out", ps->out, "output directory")->required();
    pipe->callback([ps, &ctx] { run_pipeline(*ps, ctx); });
}

} // namespace bosim::cli
