#include "cli.hpp"

#include "bosim/bitstream.hpp"
#include "bosim/extraction.hpp"
#include "bosim/fock.hpp"
#include "bosim/nist.hpp"

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <memory>

namespace bosim::cli {
namespace {

struct ExtractState {
    std::string samples;
    int m = 0;
    int block_size = 8;
    double p_th = 0.01;
    std::string out;
};

void run_extract(const ExtractState& s, Context& ctx) {
    StageTimer timer;
    const std::vector<SampleRecord> records = load_samples(require_input_file(s.samples), s.m);
    std::filesystem::create_directories(s.out);
    const ExtractionOutput res =
        run_extraction(records, s.m, s.block_size, s.p_th, ctx.threads);
    const double extract_ms = timer.stop_ms();
    const auto out_path = [&](const std::string& name) {
        return (std::filesystem::path(s.out) / name).string();
    };
    save_bitstream(out_path("vn.bin"), res.vn);
    ctx.note(out_path("vn.bin"));
    ctx.note(out_path("vn.bin.json"));
    save_bitstream(out_path("hashed.bin"), res.hashed);
    ctx.note(out_path("hashed.bin"));
    ctx.note(out_path("hashed.bin.json"));
    save_extraction_report(out_path("extraction_report.json"), res.report);
    ctx.note(out_path("extraction_report.json"));
    RunManifest man;
    man.command = "extract";
    man.config = {{"samples", s.samples}, {"m", s.m},     {"block_size", s.block_size},
                  {"p_th", s.p_th},       {"out", s.out}};
    man.timings_ms["extract"] = extract_ms;
    man.add_artifact(out_path("vn.bin"));
    man.add_artifact(out_path("vn.bin.json"));
    man.add_artifact(out_path("hashed.bin"));
    man.add_artifact(out_path("hashed.bin.json"));
    man.add_artifact(out_path("extraction_report.json"));
    save_manifest(out_path("manifest.json"), man);
    ctx.note(out_path("manifest.json"));
    std::cout << "raw=" << res.report.raw_length << " vn=" << res.report.vn_length
              << " hashed=" << res.report.hashed_length << " h_min=" << res.report.h_min
              << " L=" << res.report.hash_block_len << "\n";
}

struct NistState {
    std::string bits;
    double p_th = 0.01;
    std::string out;
};

void run_nist(const NistState& s, Context& ctx) {
    StageTimer timer;
    require_input_file(s.bits);
    require_input_file(s.bits + ".json");
    const BitStream stream = load_bitstream(s.bits);
    const std::vector<TestResult> results = nist_suite(stream, s.p_th);
    const double suite_ms = timer.stop_ms();
    save_nist_report(s.out, results);
    ctx.note(s.out);
    RunManifest man;
    man.command = "nist";
    man.config = {{"bits", s.bits}, {"p_th", s.p_th}, {"out", s.out}};
    man.timings_ms["suite"] = suite_ms;
    man.add_artifact(s.out);
    const std::string mpath = s.out + ".manifest.json";
    save_manifest(mpath, man);
    ctx.note(mpath);
    int failed = 0;
    for (const TestResult& r : results) {
        std::cout << std::left << std::setw(26) << r.name;
        if (r.skipped) {
            std::cout << "skipped (stream below length minimum)\n";
            continue;
        }
        std::cout << (r.pass ? "pass" : "FAIL") << "  p=";
        for (size_t i = 0; i < r.p_values.size(); ++i)
            std::cout << (i ? "," : "") << r.p_values[i];
        std::cout << "\n";
        if (!r.pass) ++failed;
    }
    if (failed > 0)
        throw ValidationFailure(std::to_string(failed) + " test(s) below threshold " +
                                std::to_string(s.p_th));
}

} // namespace

void register_randomness(CLI::App& app, Context& ctx) {
    auto es = std::make_shared<ExtractState>();
    CLI::App* extract =
        app.add_subcommand("extract", "Debias occupancy samples and condition into random bits");
    extract->add_option("--samples", es->samples, "samples JSONL path")->required();
    extract->add_option("--m", es->m, "mode count of the samples")->required();
    extract->add_option("--block-size", es->block_size, "min-entropy block size (bits)");
    extract->add_option("--p-th", es->p_th, "test significance threshold");
    extract->add_option("--out", es->out, "output directory")->required();
    extract->callback([es, &ctx] { run_extract(*es, ctx); });

    auto ns = std::make_shared<NistState>();
    CLI::App* nist = app.add_subcommand("nist", "Run the statistical test battery on a bit file");
    nist->add_option("--bits", ns->bits, "bit file (with JSON sidecar)")->required();
    nist->add_option("--p-th", ns->p_th, "test significance threshold");
    nist->add_option("--out", ns->out, "output report JSON path")->required();
    nist->callback([ns, &ctx] { run_nist(*ns, ctx); });
}

} // namespace bosim::cli
