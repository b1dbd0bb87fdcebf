#include "bosim/extraction.hpp"
#include "bosim/error.hpp"
#include "bosim/log.hpp"
#include "bosim/parallel.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace bosim {

ExtractionOutput run_extraction(const BitMatrix& occupancy, int h_min_block, double p_th,
                                int threads) {
    require(occupancy.trials > 0, ErrorCode::insufficient_data, "run_extraction: no trials");
    require(occupancy.m > 0, ErrorCode::invalid_shape, "run_extraction: no modes");

    std::vector<BitStream> per_mode(occupancy.m);
    parallel_for(static_cast<size_t>(occupancy.m), threads, [&](size_t j) {
        per_mode[j] = von_neumann(column_stream(occupancy, static_cast<int>(j)));
    });

    ExtractionOutput out;
    out.vn.stage = "vn";
    for (const BitStream& s : per_mode)
        out.vn.bits.insert(out.vn.bits.end(), s.bits.begin(), s.bits.end());

    ExtractionReport& rep = out.report;
    rep.trials = occupancy.trials;
    rep.m = occupancy.m;
    rep.raw_length = occupancy.trials * occupancy.m;
    rep.vn_length = static_cast<int64_t>(out.vn.bits.size());
    rep.h_min_block = h_min_block;
    rep.p_th = p_th;

    rep.h_min = min_entropy(out.vn, h_min_block);
    out.vn.h_min = rep.h_min;
    out.vn.h_min_block = h_min_block;
    require(rep.h_min > 0.0, ErrorCode::invalid_entropy,
            "run_extraction: estimated min-entropy is zero; stream carries no extractable bits");
    rep.hash_block_len = static_cast<int64_t>(std::ceil(256.0 / rep.h_min));

    out.hashed = condition_hash(out.vn, rep.h_min);
    out.hashed.h_min = rep.h_min;
    out.hashed.h_min_block = h_min_block;
    rep.hashed_length = static_cast<int64_t>(out.hashed.bits.size());
    rep.bits_per_trial = static_cast<double>(rep.hashed_length) / static_cast<double>(rep.trials);

    rep.nist = nist_suite(out.hashed, p_th);
    bool any = false, all = true;
    for (const TestResult& r : rep.nist) {
        if (r.skipped) continue;
        any = true;
        all = all && r.pass;
    }
    rep.all_computed_pass = any && all;
    log_info("extraction: ", rep.raw_length, " raw -> ", rep.vn_length, " debiased -> ",
             rep.hashed_length, " hashed bits (H_min ", rep.h_min, ")");
    return out;
}

ExtractionOutput run_extraction(const std::vector<SampleRecord>& samples, int m, int h_min_block,
                                double p_th, int threads) {
    return run_extraction(encode_occupancy(samples, m), h_min_block, p_th, threads);
}

void save_extraction_report(const std::string& path, const ExtractionReport& report) {
    nlohmann::json j;
    j["trials"] = report.trials;
    j["m"] = report.m;
    j["raw_length"] = report.raw_length;
    j["vn_length"] = report.vn_length;
    j["hashed_length"] = report.hashed_length;
    j["h_min_block"] = report.h_min_block;
    j["h_min"] = report.h_min;
    j["hash_block_len"] = report.hash_block_len;
    j["bits_per_trial"] = report.bits_per_trial;
    j["p_th"] = report.p_th;
    j["all_computed_pass"] = report.all_computed_pass;
    nlohmann::json tests = nlohmann::json::array();
    for (const TestResult& r : report.nist) {
        nlohmann::json e;
        e["test"] = r.name;
        e["p_values"] = r.p_values;
        e["pass"] = r.pass;
        e["skipped"] = r.skipped;
        tests.push_back(std::move(e));
    }
    j["nist"] = std::move(tests);
    std::ofstream f(path);
    require(f.good(), ErrorCode::io_error, "save_extraction_report: cannot open " + path);
    f << j.dump(2) << "\n";
    require(f.good(), ErrorCode::io_error, "save_extraction_report: write failed");
}

} // namespace bosim
