#include "cli.hpp"

#include "bosim/reconstruction.hpp"
#include "bosim/sampling.hpp"
#include "bosim/validation.hpp"

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace bosim::cli {
namespace {

struct SampleState {
    std::string unitary;
    std::vector<int> inputs;
    int64_t draws = 10000;
    uint64_t seed = 1;
    std::string sampler = "bs";
    double x = 0.83;
    double g2 = 0.0;
    bool collision_free = false;
    std::string out;
};

void run_sample(const SampleState& s, Context& ctx) {
    StageTimer timer;
    const UnitaryMatrix u = load_unitary(require_input_file(s.unitary));
    const int m = static_cast<int>(u.matrix().rows());
    const InputConfig input(s.inputs, m);
    std::vector<SampleRecord> records;
    if (s.sampler == "bs") {
        records = sample_bs(u, input, s.draws, s.seed, ctx.threads);
    } else if (s.sampler == "distinguishable") {
        records = sample_distinguishable(u, input, s.draws, s.seed, ctx.threads);
    } else if (s.sampler == "uniform") {
        records = sample_uniform(m, input.photons(), s.draws, s.seed, ctx.threads);
    } else if (s.sampler == "mixture") {
        NoiseModel noise;
        noise.indistinguishability = s.x;
        noise.g2 = s.g2;
        noise.use_g2 = s.g2 > 0.0;
        noise.eta.assign(m, 1.0);
        records = sample_mixture(u, input, noise, s.draws, s.seed, ctx.threads);
    } else {
        throw Error(ErrorCode::invalid_config, "unknown sampler: " + s.sampler);
    }
    if (s.collision_free) {
        std::vector<SampleRecord> kept;
        kept.reserve(records.size());
        for (SampleRecord& r : records)
            if (r.output.collision_free()) kept.push_back(std::move(r));
        records = std::move(kept);
    }
    const double sample_ms = timer.stop_ms();
    save_samples(s.out, records);
    ctx.note(s.out);
    RunManifest man;
    man.command = "sample";
    man.seed = s.seed;
    man.config = {{"unitary", s.unitary}, {"inputs", s.inputs},
                  {"draws", s.draws},     {"seed", s.seed},
                  {"sampler", s.sampler}, {"collision_free", s.collision_free},
                  {"out", s.out}};
    man.timings_ms["sample"] = sample_ms;
    man.add_artifact(s.out);
    const std::string mpath = s.out + ".manifest.json";
    save_manifest(mpath, man);
    ctx.note(mpath);
    std::cout << "sampled " << records.size() << " events (" << s.sampler << ") over m=" << m
              << "\n";
}

struct ValidateState {
    std::string samples;
    std::string unitary;
    std::vector<int> inputs;
    std::string counter = "wk";
    uint64_t seed = 0;
    std::string out;
};

void run_validate(const ValidateState& s, Context& ctx) {
    StageTimer timer;
    const UnitaryMatrix u = load_unitary(require_input_file(s.unitary));
    const int m = static_cast<int>(u.matrix().rows());
    const InputConfig input(s.inputs, m);
    std::vector<SampleRecord> records = load_samples(require_input_file(s.samples), m);
    ValidationTrace trace;
    if (s.counter == "wk") {
        // The row-norm counter is defined on collision-free events of the
        // configured fold; everything else is discarded up front.
        std::vector<SampleRecord> kept;
        kept.reserve(records.size());
        for (SampleRecord& r : records)
            if (r.output.collision_free() && r.output.photons() == input.photons())
                kept.push_back(std::move(r));
        trace = wk_counter(u, input, kept, ctx.threads);
    } else if (s.counter == "ck") {
        trace = ck_counter(u, input, records, s.seed, ctx.threads);
    } else {
        throw Error(ErrorCode::invalid_config, "unknown counter: " + s.counter);
    }
    const double counter_ms = timer.stop_ms();
    save_trace_csv(s.out, trace);
    ctx.note(s.out);
    RunManifest man;
    man.command = "validate";
    man.seed = s.seed;
    man.config = {{"samples", s.samples}, {"unitary", s.unitary}, {"inputs", s.inputs},
                  {"counter", s.counter}, {"seed", s.seed},       {"out", s.out}};
    man.timings_ms["counter"] = counter_ms;
    man.add_artifact(s.out);
    const std::string mpath = s.out + ".manifest.json";
    save_manifest(mpath, man);
    ctx.note(mpath);
    const bool rejected = trace.rejects_null();
    std::cout << "counter=" << s.counter << " null=" << trace.null_tag << " events="
              << trace.counter.size() << " final="
              << (trace.counter.empty() ? 0 : trace.counter.back()) << " rejected="
              << (rejected ? "true" : "false") << "\n";
    if (!rejected)
        throw ValidationFailure("counter " + s.counter + " did not reject the " + trace.null_tag +
                                " null");
}

struct ReconstructState {
    std::string counts;
    std::string unitary;
    std::vector<int> inputs;
    std::vector<int> outputs;
    double shots = 1e6;
    bool noiseless = false;
    uint64_t seed = 1;
    std::string out;
};

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

void run_reconstruct(const ReconstructState& s, Context& ctx) {
    StageTimer timer;
    CountTable table;
    if (!s.counts.empty()) {
        table = load_counts(require_input_file(s.counts));
    } else {
        require(!s.unitary.empty(), ErrorCode::invalid_config,
                "reconstruct: provide --counts or --unitary with --inputs/--outputs");
        const UnitaryMatrix u = load_unitary(require_input_file(s.unitary));
        table = simulate_counts(u, s.inputs, s.outputs, s.shots, s.seed, s.noiseless);
    }
    const double counts_ms = timer.stop_ms();
    timer.restart();
    const ReconstructedMatrix recon = reconstruct(table);
    const double recon_ms = timer.stop_ms();
    nlohmann::json j;
    j["seed"] = s.seed;
    j["gauge"] = recon.gauge;
    j["rho"] = matrix_json(recon.rho);
    j["theta"] = matrix_json(recon.theta);
    j["sigma_rho"] = matrix_json(recon.sigma_rho);
    j["sigma_theta"] = matrix_json(recon.sigma_theta);
    j["unresolved"] = recon.unresolved;
    std::ofstream f(s.out);
    require(f.good(), ErrorCode::io_error, "reconstruct: cannot open " + s.out);
    f << j.dump(2) << "\n";
    require(f.good(), ErrorCode::io_error, "reconstruct: write failed");
    f.close();
    ctx.note(s.out);
    RunManifest man;
    man.command = "reconstruct";
    man.seed = s.seed;
    man.config = {{"counts", s.counts}, {"unitary", s.unitary},     {"inputs", s.inputs},
                  {"outputs", s.outputs}, {"shots", s.shots},       {"noiseless", s.noiseless},
                  {"seed", s.seed},     {"out", s.out}};
    man.timings_ms["counts"] = counts_ms;
    man.timings_ms["reconstruct"] = recon_ms;
    man.add_artifact(s.out);
    const std::string mpath = s.out + ".manifest.json";
    save_manifest(mpath, man);
    ctx.note(mpath);
}

} // namespace

void register_sampling(CLI::App& app, Context& ctx) {
    auto ss = std::make_shared<SampleState>();
    CLI::App* sample = app.add_subcommand("sample", "Draw multi-photon output samples");
    sample->add_option("--unitary", ss->unitary, "unitary JSON path")->required();
    sample->add_option("--inputs", ss->inputs, "input modes (comma separated)")
        ->required()
        ->delimiter(',');
    sample->add_option("--draws", ss->draws, "number of draws");
    sample->add_option("--seed", ss->seed, "master seed");
    sample->add_option("--sampler", ss->sampler, "bs|distinguishable|uniform|mixture");
    sample->add_option("--x", ss->x, "mixture indistinguishability");
    sample->add_option("--g2", ss->g2, "extra-photon injection probability (mixture)");
    sample->add_flag("--collision-free", ss->collision_free, "keep collision-free events only");
    sample->add_option("--out", ss->out, "output samples JSONL path")->required();
    sample->callback([ss, &ctx] { run_sample(*ss, ctx); });

    auto vs = std::make_shared<ValidateState>();
    CLI::App* validate = app.add_subcommand("validate", "Run a discrimination counter over samples");
    validate->add_option("--samples", vs->samples, "samples JSONL path")->required();
    validate->add_option("--unitary", vs->unitary, "unitary JSON path")->required();
    validate->add_option("--inputs", vs->inputs, "input modes")->required()->delimiter(',');
    validate->add_option("--counter", vs->counter, "wk|ck");
    validate->add_option("--seed", vs->seed, "tie-break seed (ck)");
    validate->add_option("--out", vs->out, "output trace CSV path")->required();
    validate->callback([vs, &ctx] { run_validate(*vs, ctx); });

    auto rs = std::make_shared<ReconstructState>();
    CLI::App* recon = app.add_subcommand(
        "reconstruct", "Estimate a submatrix (moduli + phases) from photon-count data");
    recon->add_option("--counts", rs->counts, "counts JSON path");
    recon->add_option("--unitary", rs->unitary, "unitary JSON to simulate counts from");
    recon->add_option("--inputs", rs->inputs, "input modes (simulation)")->delimiter(',');
    recon->add_option("--outputs", rs->outputs, "output modes (simulation)")->delimiter(',');
    recon->add_option("--shots", rs->shots, "shots per configuration (simulation)");
    recon->add_flag("--noiseless", rs->noiseless, "store exact expected counts");
    recon->add_option("--seed", rs->seed, "simulation seed");
    recon->add_option("--out", rs->out, "output reconstruction JSON path")->required();
    recon->callback([rs, &ctx] { run_reconstruct(*rs, ctx); });
}

} // namespace bosim::cli
